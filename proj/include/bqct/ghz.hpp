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
 * Teleporting GHZ-class states d0|0...0> + d1|1...1> through the one-qubit
 * protocol: the sender folds the state onto one qubit with a CNOT chain, the
 * qubit is teleported, and the receiver fans it back out onto |0> ancillas.
 * The qubit count travels as a fixed-width classical code.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "protocol.hpp"
#include "qsim.hpp"
#include "transcript.hpp"

namespace bqct {

inline constexpr std::size_t kGhzCodeWidth = 8;
inline constexpr int kMaxGhzQubits = 1 << kGhzCodeWidth;
/// Largest GHZ size accepted by run_bqct_ghz.
inline constexpr int kMaxGhzRunQubits = 8;

/// Encoded GHZ size: value k announces a (k + 1)-qubit state.
struct GhzCode {
    std::uint32_t value{0};

    [[nodiscard]] std::string bits() const {
        std::string s(kGhzCodeWidth, '0');
        for (std::size_t i = 0; i < kGhzCodeWidth; ++i) {
            if ((value >> (kGhzCodeWidth - 1 - i)) & 1U) {
                s[i] = '1';
            }
        }
        return s;
    }

    static GhzCode parse(std::string_view bits) {
        return {static_cast<std::uint32_t>(StateVector::parse_bits(bits, kGhzCodeWidth))};
    }

    friend bool operator==(const GhzCode &, const GhzCode &) = default;
};

inline GhzCode encode_qubit_count(int n) {
    if (n < 1 || n > kMaxGhzQubits) {
        throw Error("GHZ qubit count must be in [1, " +
                    std::to_string(kMaxGhzQubits) + "]");
    }
    return {static_cast<std::uint32_t>(n - 1)};
}

inline int decode_qubit_count(const GhzCode &code) {
    if (code.value >= static_cast<std::uint32_t>(kMaxGhzQubits)) {
        throw Error("GHZ code exceeds the code width");
    }
    return static_cast<int>(code.value) + 1;
}

struct GhzState {
    Amplitude d0{1.0};
    Amplitude d1{0.0};
    int n{1};

    [[nodiscard]] InputState head() const { return {d0, d1}; }
};

/// Register labels used for an n-qubit GHZ state rooted at `head`.
inline std::vector<QubitLabel> ghz_labels(const QubitLabel &head, int n) {
    std::vector<QubitLabel> labels{head};
    for (int k = 0; k + 1 < n; ++k) {
        labels.push_back(ancilla(static_cast<std::size_t>(k)));
    }
    return labels;
}

inline StateVector to_state(const GhzState &g, std::vector<QubitLabel> labels) {
    if (g.n < 1 || labels.size() != static_cast<std::size_t>(g.n)) {
        throw Error("GHZ label count does not match qubit count");
    }
    if (std::abs(std::norm(g.d0) + std::norm(g.d1) - 1.0) > kFidelityTol) {
        throw Error("GHZ coefficients are not normalized");
    }
    std::vector<Amplitude> amps(std::size_t{1} << labels.size(), 0.0);
    amps.front() = g.d0;
    amps.back() += g.d1;
    return StateVector::normalized(std::move(labels), std::move(amps));
}

/// Whether the qubits in `labels` only carry weight where they all agree.
inline bool is_ghz_class(const StateVector &sv, std::span<const QubitLabel> labels) {
    std::size_t all = 0;
    for (const auto &l : labels) {
        all |= sv.mask(l);
    }
    const auto amps = sv.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const std::size_t sub = i & all;
        if (sub != 0 && sub != all && std::abs(amps[i]) > kFidelityTol) {
            return false;
        }
    }
    return true;
}

/// CNOT(first -> k) for every later label; leaves d0|0> + d1|1> on the
/// first label and |0> on the rest.
inline StateVector compress_ghz(const StateVector &sv,
                                std::span<const QubitLabel> labels) {
    if (labels.empty()) {
        throw Error("no GHZ qubits given");
    }
    if (!is_ghz_class(sv, labels)) {
        throw Error("register is not in a GHZ-class state on the given qubits");
    }
    StateVector out = sv;
    for (std::size_t k = 1; k < labels.size(); ++k) {
        out = apply_cnot(out, labels[0], labels[k]);
    }
    return out;
}

/// Fans `received` out onto n - 1 fresh ancillas.
inline StateVector expand_ghz(const InputState &received, int n,
                              const QubitLabel &head) {
    if (n < 1) {
        throw Error("GHZ qubit count must be positive");
    }
    StateVector out = to_state(received, head);
    const auto labels = ghz_labels(head, n);
    for (std::size_t k = 1; k < labels.size(); ++k) {
        out = tensor(out, new_basis_state({labels[k]}, "0"));
        out = apply_cnot(out, head, labels[k]);
    }
    return out;
}

struct GhzRunResult {
    StateVector alice_recovered; // Bob's m-qubit state, rooted at a1
    StateVector bob_recovered;   // Alice's n-qubit state, rooted at b0
    double fidelity_alice{0.0};
    double fidelity_bob{0.0};
    Transcript transcript;
    ProtocolResult base;
};

namespace detail {
inline InputState fold_to_head(const GhzState &g, const QubitLabel &head,
                               Party party, Transcript &log) {
    const auto labels = ghz_labels(head, g.n);
    StateVector sv = compress_ghz(to_state(g, labels), labels);
    for (std::size_t k = 1; k < labels.size(); ++k) {
        log.add(0, party, GateOp{"CNOT", {head.name(), labels[k].name()}});
        sv = discard_zero_qubit(sv, labels[k]);
    }
    return extract_qubit(sv, head);
}

inline StateVector unfold_from_head(const InputState &received, int n,
                                    const QubitLabel &head, Party party,
                                    Transcript &log) {
    const auto labels = ghz_labels(head, n);
    for (std::size_t k = 1; k < labels.size(); ++k) {
        log.add(10, party, GateOp{"CNOT", {head.name(), labels[k].name()}});
    }
    return expand_ghz(received, n, head);
}
} // namespace detail

/**
 * @brief Teleports Alice's n-qubit and Bob's m-qubit GHZ-class states.
 *
 * Transcript layout: sender-side folding (step 0), the base run (steps 1-8),
 * the two size codes (step 9), receiver-side fan-out (step 10).
 */
inline GhzRunResult run_bqct_ghz(const ChannelCode &code, const GhzState &alice_ghz,
                                 const GhzState &bob_ghz, const RunMode &mode) {
    for (const auto *g : {&alice_ghz, &bob_ghz}) {
        if (g->n < 1 || g->n > kMaxGhzRunQubits) {
            throw Error("GHZ runs support 1 to " + std::to_string(kMaxGhzRunQubits) +
                        " qubits per side");
        }
    }
    Transcript log;
    const InputState alice_head =
        detail::fold_to_head(alice_ghz, label::A, Party::Alice, log);
    const InputState bob_head = detail::fold_to_head(bob_ghz, label::B, Party::Bob, log);

    ProtocolResult base = run_bqct(code, alice_head, bob_head, mode);
    for (const auto &e : base.transcript.events()) {
        if (!std::holds_alternative<Completion>(e.body)) {
            log.add(e.step, e.party, e.body);
        }
    }
    if (!base.reachable) {
        throw Error("selected branch has probability zero");
    }

    const GhzCode alice_code = encode_qubit_count(alice_ghz.n);
    const GhzCode bob_code = encode_qubit_count(bob_ghz.n);
    log.add(9, Party::Alice,
            ClassicalMessage{{Party::Bob}, PayloadKind::GhzCode, alice_code.bits()});
    log.add(9, Party::Bob,
            ClassicalMessage{{Party::Alice}, PayloadKind::GhzCode, bob_code.bits()});

    const int m = decode_qubit_count(bob_code);
    const int n = decode_qubit_count(alice_code);
    StateVector at_alice =
        detail::unfold_from_head(base.alice_recovered, m, label::a1, Party::Alice, log);
    StateVector at_bob =
        detail::unfold_from_head(base.bob_recovered, n, label::b0, Party::Bob, log);
    log.add(10, Party::Charlie, Completion{});

    const double f_alice = fidelity(
        to_state(bob_ghz, std::vector<QubitLabel>(at_alice.labels().begin(),
                                                  at_alice.labels().end())),
        at_alice);
    const double f_bob = fidelity(
        to_state(alice_ghz, std::vector<QubitLabel>(at_bob.labels().begin(),
                                                    at_bob.labels().end())),
        at_bob);
    return {std::move(at_alice), std::move(at_bob), f_alice, f_bob, std::move(log),
            std::move(base)};
}

} // namespace bqct
