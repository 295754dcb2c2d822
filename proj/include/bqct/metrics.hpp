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
 * Resource comparison: qubits sent, channel size, efficiency, measurement
 * counts and the eavesdropper's chance of guessing the channel variant.
 */

#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

#include "channel.hpp"
#include "transcript.hpp"

namespace bqct {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational &r) {
    if (r.denominator() == 1) {
        return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

struct ComparisonRow {
    std::string protocol_name;
    std::string protocol_kind{"BCQT"};
    int bob_qubits_sent{0};
    int alice_qubits_sent{0};
    int channel_qubits{0};
    Rational efficiency;
    int bsm_count{0};
    int sm_count{0};
    Rational guess_probability;
    /// True for rows copied from the literature rather than derived.
    bool literature{false};

    friend bool operator==(const ComparisonRow &, const ComparisonRow &) = default;
};

struct MeasurementCounts {
    int bsm_count{0};
    int sm_count{0};
};

/// Counts measurements by arity: one qubit is an SM, two qubits a BSM.
inline MeasurementCounts transcript_counts(const Transcript &t) {
    if (!t.completed()) {
        throw Error("transcript is empty or incomplete");
    }
    MeasurementCounts c;
    for (const auto *e : t.of_kind<Measurement>()) {
        const auto arity = std::get<Measurement>(e->body).qubits.size();
        if (arity == 1) {
            ++c.sm_count;
        } else if (arity == 2) {
            ++c.bsm_count;
        } else {
            throw Error("unsupported measurement arity");
        }
    }
    return c;
}

inline Rational efficiency(int sent_qubits, int channel_qubits) {
    if (channel_qubits <= 0) {
        throw Error("channel must contain at least one qubit");
    }
    if (sent_qubits < 0) {
        throw Error("sent qubit count is negative");
    }
    return {sent_qubits, channel_qubits};
}

/// Uniform guess over the distinguishable channel variants.
inline Rational guess_probability(int distinct_channel_variants) {
    if (distinct_channel_variants < 1) {
        throw Error("at least one channel variant is required");
    }
    return {1, distinct_channel_variants};
}

/// "Five-qubits" style label used in the comparison table.
inline std::string channel_description(int qubits) {
    static const std::array<const char *, 9> kWords{
        "Zero", "One", "Two", "Three", "Four", "Five", "Six", "Seven", "Eight"};
    const std::string word = qubits >= 0 && qubits < static_cast<int>(kWords.size())
                                 ? kWords[static_cast<std::size_t>(qubits)]
                                 : std::to_string(qubits);
    return word + "-qubits";
}

/**
 * @brief Derives the comparison row from a completed run.
 *
 * Channel qubits are those handed out at distribution; a party's sent qubits
 * are the non-channel qubits it measured. The guess probability uses the
 * number of distinguishable channels produced by live preparation.
 */
inline ComparisonRow comparison_row(const Transcript &t) {
    const MeasurementCounts counts = transcript_counts(t);
    std::set<std::string> channel;
    for (const auto *e : t.of_kind<Distribution>()) {
        for (const auto &q : std::get<Distribution>(e->body).qubits) {
            channel.insert(q);
        }
    }
    std::set<std::string> alice_sent;
    std::set<std::string> bob_sent;
    for (const auto *e : t.of_kind<Measurement>()) {
        for (const auto &q : std::get<Measurement>(e->body).qubits) {
            if (channel.contains(q)) {
                continue;
            }
            if (e->party == Party::Alice) {
                alice_sent.insert(q);
            } else if (e->party == Party::Bob) {
                bob_sent.insert(q);
            }
        }
    }
    ComparisonRow row;
    row.protocol_name = "Our method";
    row.alice_qubits_sent = static_cast<int>(alice_sent.size());
    row.bob_qubits_sent = static_cast<int>(bob_sent.size());
    row.channel_qubits = static_cast<int>(channel.size());
    row.efficiency =
        efficiency(row.alice_qubits_sent + row.bob_qubits_sent, row.channel_qubits);
    row.bsm_count = counts.bsm_count;
    row.sm_count = counts.sm_count;
    row.guess_probability = guess_probability(distinct_channel_variants());
    return row;
}

/// Published figures for earlier protocols, for context only.
inline std::vector<ComparisonRow> literature_rows() {
    return {
        {"[12]", "BCQT", 1, 1, 6, Rational(1, 3), 2, 2, Rational(1, 4), true},
        {"[13]", "BCQT", 1, 1, 6, Rational(1, 3), 1, 4, Rational(1, 2), true},
        {"[17]", "BCQT", 1, 1, 5, Rational(2, 5), 2, 1, Rational(1, 2), true},
    };
}

/// Whitespace-separated table in the published column order.
inline std::string render_text(const std::vector<ComparisonRow> &rows) {
    std::ostringstream out;
    out << "Methods    protocol  #Bob  #Alice  channel      Efficiency  BSMs  SMs  Prob.\n";
    for (const auto &r : rows) {
        std::string name = r.protocol_name;
        name.resize(std::max<std::size_t>(name.size(), 10), ' ');
        std::string chan = channel_description(r.channel_qubits);
        chan.resize(std::max<std::size_t>(chan.size(), 12), ' ');
        std::string eff = to_string(r.efficiency);
        eff.resize(std::max<std::size_t>(eff.size(), 10), ' ');
        out << name << ' ' << r.protocol_kind << "      " << r.bob_qubits_sent
            << "     " << r.alice_qubits_sent << "       " << chan << ' ' << eff
            << "  " << r.bsm_count << "     " << r.sm_count << "    "
            << to_string(r.guess_probability) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json to_json(const ComparisonRow &r) {
    nlohmann::ordered_json j;
    j["method"] = r.protocol_name;
    j["protocol"] = r.protocol_kind;
    j["bob_qubits"] = r.bob_qubits_sent;
    j["alice_qubits"] = r.alice_qubits_sent;
    j["channel"] = channel_description(r.channel_qubits);
    j["channel_qubits"] = r.channel_qubits;
    j["efficiency"] = to_string(r.efficiency);
    j["bsms"] = r.bsm_count;
    j["sms"] = r.sm_count;
    j["prob"] = to_string(r.guess_probability);
    j["source"] = r.literature ? "literature" : "derived";
    return j;
}

/// One JSON object per line, same column order as the text table.
inline std::string render_records(const std::vector<ComparisonRow> &rows) {
    std::string out;
    for (const auto &r : rows) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

} // namespace bqct
