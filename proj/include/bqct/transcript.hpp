// Copyright 2026 The bqct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Per-run protocol log and its line-delimited JSON form.
 *
 * Each event serializes to one JSON object per line. Common fields:
 *   seq    position in the run (0-based, dense)
 *   step   protocol step the event belongs to
 *   kind   "distribute" | "gate" | "measure" | "message" | "correction" |
 *          "complete"
 *   party  "Alice" | "Bob" | "Charlie"
 * Kind-specific fields are documented in README.md.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsim.hpp"

namespace bqct {

enum class Party : std::uint8_t { Alice, Bob, Charlie };

inline std::string_view to_string(Party p) {
    switch (p) {
    case Party::Alice:
        return "Alice";
    case Party::Bob:
        return "Bob";
    case Party::Charlie:
        return "Charlie";
    }
    return "?";
}

inline Party party_from_string(std::string_view s) {
    if (s == "Alice") {
        return Party::Alice;
    }
    if (s == "Bob") {
        return Party::Bob;
    }
    if (s == "Charlie") {
        return Party::Charlie;
    }
    throw Error("unknown party '" + std::string(s) + "'");
}

/// Pauli pair acting on the ordered qubits (b0, a1).
struct CorrectionRule {
    Gate on_b0{Gate::I};
    Gate on_a1{Gate::I};

    friend bool operator==(const CorrectionRule &, const CorrectionRule &) = default;

    /// Two-letter form, b0 first: "IX" means I on b0, X on a1.
    [[nodiscard]] std::string str() const {
        return std::string(to_string(on_b0)) + std::string(to_string(on_a1));
    }

    static CorrectionRule parse(std::string_view s) {
        auto g = [](char ch) {
            switch (ch) {
            case 'I':
                return Gate::I;
            case 'X':
                return Gate::X;
            case 'Z':
                return Gate::Z;
            default:
                throw Error("correction gates must be I, X or Z");
            }
        };
        if (s.size() != 2) {
            throw Error("correction rule must have two letters");
        }
        return {g(s[0]), g(s[1])};
    }
};

enum class PayloadKind : std::uint8_t { ZOutcome, XOutcome, ChannelCode, GhzCode };

inline std::string_view to_string(PayloadKind k) {
    switch (k) {
    case PayloadKind::ZOutcome:
        return "z_outcome";
    case PayloadKind::XOutcome:
        return "x_outcome";
    case PayloadKind::ChannelCode:
        return "channel_code";
    case PayloadKind::GhzCode:
        return "ghz_code";
    }
    return "?";
}

inline PayloadKind payload_kind_from_string(std::string_view s) {
    for (auto k : {PayloadKind::ZOutcome, PayloadKind::XOutcome,
                   PayloadKind::ChannelCode, PayloadKind::GhzCode}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw Error("unknown payload kind '" + std::string(s) + "'");
}

/// Qubits handed to one party when the channel is shared.
struct Distribution {
    std::vector<std::string> qubits;
};

struct GateOp {
    std::string gate; // "H", "X", "Z", "CNOT"
    std::vector<std::string> qubits;
};

struct Measurement {
    std::vector<std::string> qubits; // size is the measurement arity
    Basis basis{Basis::Z};
    Outcome outcome;
    double probability{0.0};
};

/// Classical message. Charlie's announcements go to both users at once and
/// carry one payload.
struct ClassicalMessage {
    std::vector<Party> receivers;
    PayloadKind payload_kind{PayloadKind::ZOutcome};
    std::string payload; // "0"/"1", "+"/"-", two-bit code or 8-bit code

    [[nodiscard]] std::size_t bit_count() const {
        switch (payload_kind) {
        case PayloadKind::ZOutcome:
        case PayloadKind::XOutcome:
            return 1;
        case PayloadKind::ChannelCode:
        case PayloadKind::GhzCode:
            return payload.size();
        }
        return 0;
    }
};

struct Correction {
    CorrectionRule rule;
    std::string qubit; // the rule component this party applies
    Gate gate{Gate::I};
};

struct Completion {};

using EventBody = std::variant<Distribution, GateOp, Measurement,
                               ClassicalMessage, Correction, Completion>;

struct TranscriptEvent {
    std::size_t seq{0};
    int step{0};
    Party party{Party::Charlie};
    EventBody body;
};

/// Ordered log of one protocol run.
class Transcript {
  public:
    void add(int step, Party party, EventBody body) {
        events_.push_back({events_.size(), step, party, std::move(body)});
    }

    /// Appends another run's events, renumbering them after ours.
    void append(const Transcript &other) {
        for (const auto &e : other.events_) {
            add(e.step, e.party, e.body);
        }
    }

    [[nodiscard]] const std::vector<TranscriptEvent> &events() const noexcept {
        return events_;
    }
    [[nodiscard]] bool empty() const noexcept { return events_.empty(); }

    [[nodiscard]] bool completed() const {
        return !events_.empty() &&
               std::holds_alternative<Completion>(events_.back().body);
    }

    template <class T> [[nodiscard]] std::vector<const TranscriptEvent *> of_kind() const {
        std::vector<const TranscriptEvent *> out;
        for (const auto &e : events_) {
            if (std::holds_alternative<T>(e.body)) {
                out.push_back(&e);
            }
        }
        return out;
    }

    [[nodiscard]] std::size_t classical_bits() const {
        std::size_t n = 0;
        for (const auto *e : of_kind<ClassicalMessage>()) {
            n += std::get<ClassicalMessage>(e->body).bit_count();
        }
        return n;
    }

    friend bool operator==(const Transcript &a, const Transcript &b) {
        return a.to_jsonl() == b.to_jsonl();
    }

    [[nodiscard]] std::string to_jsonl() const;
    static Transcript from_jsonl(std::istream &in);

  private:
    std::vector<TranscriptEvent> events_;
};

inline nlohmann::ordered_json to_json(const TranscriptEvent &e) {
    nlohmann::ordered_json j;
    j["seq"] = e.seq;
    j["step"] = e.step;
    j["party"] = to_string(e.party);
    std::visit(
        [&j](const auto &b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Distribution>) {
                j["kind"] = "distribute";
                j["qubits"] = b.qubits;
            } else if constexpr (std::is_same_v<T, GateOp>) {
                j["kind"] = "gate";
                j["gate"] = b.gate;
                j["qubits"] = b.qubits;
            } else if constexpr (std::is_same_v<T, Measurement>) {
                j["kind"] = "measure";
                j["qubits"] = b.qubits;
                j["basis"] = to_string(b.basis);
                j["outcome"] = outcome_symbol(b.outcome);
                j["probability"] = b.probability;
            } else if constexpr (std::is_same_v<T, ClassicalMessage>) {
                j["kind"] = "message";
                auto to = nlohmann::ordered_json::array();
                for (auto p : b.receivers) {
                    to.push_back(to_string(p));
                }
                j["to"] = std::move(to);
                j["payload_kind"] = to_string(b.payload_kind);
                j["payload"] = b.payload;
            } else if constexpr (std::is_same_v<T, Correction>) {
                j["kind"] = "correction";
                j["rule"] = b.rule.str();
                j["qubit"] = b.qubit;
                j["gate"] = to_string(b.gate);
            } else {
                j["kind"] = "complete";
            }
        },
        e.body);
    return j;
}

namespace detail {
inline Outcome outcome_from_symbol(Basis basis, std::string_view s) {
    if (basis == Basis::Z && (s == "0" || s == "1")) {
        return {basis, s == "1" ? 1 : 0};
    }
    if (basis == Basis::X && (s == "+" || s == "-")) {
        return {basis, s == "-" ? 1 : 0};
    }
    throw Error("outcome '" + std::string(s) + "' invalid for basis");
}

inline Gate gate_from_string(std::string_view s) {
    for (auto g : {Gate::I, Gate::X, Gate::Z, Gate::H}) {
        if (to_string(g) == s) {
            return g;
        }
    }
    throw Error("unknown gate '" + std::string(s) + "'");
}
} // namespace detail

inline TranscriptEvent event_from_json(const nlohmann::json &j) {
    TranscriptEvent e;
    e.seq = j.at("seq").get<std::size_t>();
    e.step = j.at("step").get<int>();
    e.party = party_from_string(j.at("party").get<std::string>());
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "distribute") {
        e.body = Distribution{j.at("qubits").get<std::vector<std::string>>()};
    } else if (kind == "gate") {
        e.body = GateOp{j.at("gate").get<std::string>(),
                        j.at("qubits").get<std::vector<std::string>>()};
    } else if (kind == "measure") {
        Measurement m;
        m.qubits = j.at("qubits").get<std::vector<std::string>>();
        const auto basis = j.at("basis").get<std::string>();
        if (basis != "Z" && basis != "X") {
            throw Error("unknown basis '" + basis + "'");
        }
        m.basis = basis == "Z" ? Basis::Z : Basis::X;
        m.outcome = detail::outcome_from_symbol(m.basis,
                                                j.at("outcome").get<std::string>());
        m.probability = j.at("probability").get<double>();
        e.body = std::move(m);
    } else if (kind == "message") {
        ClassicalMessage msg;
        for (const auto &p : j.at("to")) {
            msg.receivers.push_back(party_from_string(p.get<std::string>()));
        }
        msg.payload_kind =
            payload_kind_from_string(j.at("payload_kind").get<std::string>());
        msg.payload = j.at("payload").get<std::string>();
        e.body = std::move(msg);
    } else if (kind == "correction") {
        e.body = Correction{CorrectionRule::parse(j.at("rule").get<std::string>()),
                            j.at("qubit").get<std::string>(),
                            detail::gate_from_string(j.at("gate").get<std::string>())};
    } else if (kind == "complete") {
        e.body = Completion{};
    } else {
        throw Error("unknown transcript event kind '" + kind + "'");
    }
    return e;
}

inline std::string Transcript::to_jsonl() const {
    std::string out;
    for (const auto &e : events_) {
        out += to_json(e).dump();
        out += '\n';
    }
    return out;
}

inline Transcript Transcript::from_jsonl(std::istream &in) {
    Transcript t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        TranscriptEvent e;
        try {
            e = event_from_json(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception &ex) {
            throw Error(std::string("malformed transcript record: ") + ex.what());
        }
        if (e.seq != t.events_.size()) {
            throw Error("transcript records out of sequence");
        }
        t.events_.push_back(std::move(e));
    }
    return t;
}

} // namespace bqct
