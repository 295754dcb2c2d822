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
 * Bidirectional controlled teleportation over the five-qubit channel.
 *
 * Alice holds a0, a1 and the input A; Bob holds b0, b1 and the input B;
 * Charlie holds c. At the end Alice's a1 carries Bob's input and Bob's b0
 * carries Alice's input. Every correction rule acts on the pair (b0, a1):
 * Bob applies the first component, Alice the second.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "channel.hpp"
#include "qsim.hpp"
#include "random.hpp"
#include "transcript.hpp"

namespace bqct {

/// Correction after the Z measurements of a0 (Alice) and b1 (Bob).
inline CorrectionRule lookup_x_correction(int alice_z, int bob_z) {
    if ((alice_z != 0 && alice_z != 1) || (bob_z != 0 && bob_z != 1)) {
        throw Error("Z outcomes must be bits");
    }
    return {alice_z ? Gate::X : Gate::I, bob_z ? Gate::X : Gate::I};
}

/// Correction after the X measurements of A and B (0 is +, 1 is -).
inline CorrectionRule lookup_z_correction(int alice_x, int bob_x) {
    if ((alice_x != 0 && alice_x != 1) || (bob_x != 0 && bob_x != 1)) {
        throw Error("X outcomes must be bits");
    }
    return {alice_x ? Gate::Z : Gate::I, bob_x ? Gate::Z : Gate::I};
}

/// Correction after Charlie's X measurement of c.
inline CorrectionRule lookup_charlie_correction(const ChannelCode &code,
                                                int charlie_x) {
    validate(code);
    if (charlie_x != 0 && charlie_x != 1) {
        throw Error("X outcome must be a bit");
    }
    if (charlie_x == 0) {
        return {};
    }
    return {code.bit_a0 ? Gate::Z : Gate::I, code.bit_b1 ? Gate::Z : Gate::I};
}

/// The five outcomes of one run: Z on a0, Z on b1, X on A, X on B, X on c.
struct BranchSelector {
    std::array<int, 5> bits{};

    static constexpr int kCount = 32;

    /// Index 0..31 with the a0 outcome as the most significant bit.
    static BranchSelector from_index(int index) {
        if (index < 0 || index >= kCount) {
            throw Error("branch index out of range");
        }
        BranchSelector s;
        for (int k = 0; k < 5; ++k) {
            s.bits[k] = (index >> (4 - k)) & 1;
        }
        return s;
    }

    [[nodiscard]] int index() const {
        int idx = 0;
        for (int b : bits) {
            idx = (idx << 1) | b;
        }
        return idx;
    }

    /// e.g. "01+-+".
    [[nodiscard]] std::string str() const {
        std::string s;
        s += static_cast<char>('0' + bits[0]);
        s += static_cast<char>('0' + bits[1]);
        for (int k = 2; k < 5; ++k) {
            s += bits[k] ? '-' : '+';
        }
        return s;
    }

    friend bool operator==(const BranchSelector &, const BranchSelector &) = default;
};

struct EnumerateBranch {
    BranchSelector selector;
};
struct SampleSeed {
    std::uint64_t seed{0};
};
using RunMode = std::variant<EnumerateBranch, SampleSeed>;

struct ProtocolResult {
    InputState alice_recovered; // a1, should equal Bob's input
    InputState bob_recovered;   // b0, should equal Alice's input
    double fidelity_alice{0.0};
    double fidelity_bob{0.0};
    Transcript transcript;
    BranchSelector branch;
    double probability{0.0};
    /// False when the selected branch has probability zero.
    bool reachable{true};
};

/// State of the users' qubits when Charlie withholds his measurement.
struct ControlReport {
    double purity_b0{1.0};
    double purity_a1{1.0};
    Transcript transcript;
};

inline double fidelity(const InputState &a, const InputState &b) {
    return std::clamp(std::norm(std::conj(a.c0) * b.c0 + std::conj(a.c1) * b.c1),
                      0.0, 1.0);
}

/**
 * @brief Step-by-step execution of one protocol run.
 *
 * Steps must be called in order. In enumerate mode every measurement takes
 * the outcome fixed by the selector; in sample mode outcomes are drawn from
 * the seeded source. The optional rule argument of the correction steps
 * replaces the table lookup, which the tests use to probe alternatives.
 */
class BqctSession {
  public:
    BqctSession(ChannelCode code, InputState alice_in, InputState bob_in,
                RunMode mode)
        : code_(code), alice_in_(alice_in), bob_in_(bob_in), mode_(mode),
          rng_(std::holds_alternative<SampleSeed>(mode)
                   ? std::get<SampleSeed>(mode).seed
                   : 0),
          state_(new_basis_state({}, "")) {
        validate(code_);
        if (!alice_in_.is_normalized() || !bob_in_.is_normalized()) {
            throw Error("input states must be normalized");
        }
    }

    /// Step 1: Charlie prepares the channel and hands out the qubits.
    void share_channel() {
        enter(1);
        const Party ch = Party::Charlie;
        log_gate(ch, "H", {"b0"});
        log_gate(ch, "H", {"a1"});
        log_gate(ch, "CNOT", {"b0", "a0"});
        log_gate(ch, "CNOT", {"a1", "b1"});
        if (code_.bit_a0) {
            log_gate(ch, "CNOT", {"a0", "c"});
        }
        if (code_.bit_b1) {
            log_gate(ch, "CNOT", {"b1", "c"});
        }
        const StateVector channel = prepare_channel(code_);
        transcript_.add(step_, Party::Alice, Distribution{{"a0", "a1"}});
        transcript_.add(step_, Party::Bob, Distribution{{"b0", "b1"}});
        transcript_.add(step_, Party::Charlie, Distribution{{"c"}});
        state_ = tensor(tensor(channel, to_state(alice_in_, label::A)),
                        to_state(bob_in_, label::B));
    }

    /// Step 2: CNOT(A -> a0) by Alice, CNOT(B -> b1) by Bob.
    void entangle_inputs() {
        enter(2);
        log_gate(Party::Alice, "CNOT", {"A", "a0"});
        state_ = apply_cnot(state_, label::A, label::a0);
        log_gate(Party::Bob, "CNOT", {"B", "b1"});
        state_ = apply_cnot(state_, label::B, label::b1);
    }

    /// Step 3: Z measurements of a0 and b1.
    void measure_z() {
        enter(3);
        outcomes_[0] = measure(Party::Alice, label::a0, Basis::Z, 0);
        outcomes_[1] = measure(Party::Bob, label::b1, Basis::Z, 1);
    }

    /// Step 4: exchange Z outcomes, then X corrections on (b0, a1).
    void correct_x(std::optional<CorrectionRule> rule = {}) {
        enter(4);
        send(Party::Alice, {Party::Bob}, PayloadKind::ZOutcome,
             std::to_string(outcomes_[0]));
        send(Party::Bob, {Party::Alice}, PayloadKind::ZOutcome,
             std::to_string(outcomes_[1]));
        correct(rule.value_or(lookup_x_correction(outcomes_[0], outcomes_[1])));
    }

    /// Step 5: X measurements of A and B.
    void measure_x() {
        enter(5);
        outcomes_[2] = measure(Party::Alice, label::A, Basis::X, 2);
        outcomes_[3] = measure(Party::Bob, label::B, Basis::X, 3);
    }

    /// Step 6: exchange X outcomes, then Z corrections on (b0, a1).
    void correct_z(std::optional<CorrectionRule> rule = {}) {
        enter(6);
        send(Party::Alice, {Party::Bob}, PayloadKind::XOutcome,
             outcomes_[2] ? "-" : "+");
        send(Party::Bob, {Party::Alice}, PayloadKind::XOutcome,
             outcomes_[3] ? "-" : "+");
        correct(rule.value_or(lookup_z_correction(outcomes_[2], outcomes_[3])));
    }

    /// Step 7: Charlie announces the code, measures c in X, announces it.
    void charlie_measure() {
        enter(7);
        send(Party::Charlie, {Party::Alice, Party::Bob}, PayloadKind::ChannelCode,
             code_.str());
        outcomes_[4] = measure(Party::Charlie, label::c, Basis::X, 4);
        send(Party::Charlie, {Party::Alice, Party::Bob}, PayloadKind::XOutcome,
             outcomes_[4] ? "-" : "+");
    }

    /// Step 8: Z corrections keyed by the code and Charlie's outcome.
    void correct_charlie(std::optional<CorrectionRule> rule = {}) {
        enter(8);
        correct(rule.value_or(lookup_charlie_correction(code_, outcomes_[4])));
    }

    ProtocolResult finish() {
        if (step_ != 8) {
            throw Error("protocol finished before step 8");
        }
        transcript_.add(step_, Party::Charlie, Completion{});
        ProtocolResult r;
        r.branch.bits = outcomes_;
        r.probability = reachable_ ? probability_ : 0.0;
        r.reachable = reachable_;
        if (reachable_) {
            r.alice_recovered = extract_qubit(state_, label::a1);
            r.bob_recovered = extract_qubit(state_, label::b0);
            r.fidelity_alice = fidelity(r.alice_recovered, bob_in_);
            r.fidelity_bob = fidelity(r.bob_recovered, alice_in_);
        }
        r.transcript = transcript_;
        return r;
    }

    /// Purities of b0 and a1 after step 6, with c left unmeasured.
    [[nodiscard]] ControlReport withheld_report() const {
        if (step_ != 6) {
            throw Error("withheld report is taken right after step 6");
        }
        ControlReport r;
        if (reachable_) {
            r.purity_b0 = purity(state_, label::b0);
            r.purity_a1 = purity(state_, label::a1);
        }
        r.transcript = transcript_;
        return r;
    }

    [[nodiscard]] const StateVector &state() const noexcept { return state_; }
    [[nodiscard]] const Transcript &transcript() const noexcept {
        return transcript_;
    }
    [[nodiscard]] bool reachable() const noexcept { return reachable_; }
    [[nodiscard]] double probability() const noexcept { return probability_; }

  private:
    void enter(int step) {
        if (step != step_ + 1) {
            throw Error("protocol step " + std::to_string(step) +
                        " called out of order");
        }
        step_ = step;
    }

    void log_gate(Party p, std::string gate, std::vector<std::string> qubits) {
        transcript_.add(step_, p, GateOp{std::move(gate), std::move(qubits)});
    }

    void send(Party from, std::vector<Party> to, PayloadKind kind,
              std::string payload) {
        transcript_.add(step_, from,
                        ClassicalMessage{std::move(to), kind, std::move(payload)});
    }

    int measure(Party p, const QubitLabel &q, Basis basis, int slot) {
        if (!reachable_) {
            return 0;
        }
        Outcome outcome;
        BranchResult branch;
        if (const auto *e = std::get_if<EnumerateBranch>(&mode_)) {
            outcome = {basis, e->selector.bits[slot]};
            branch = measure_branch(state_, q, basis, outcome);
        } else {
            std::tie(outcome, branch) = measure_sample(state_, q, basis, rng_);
        }
        transcript_.add(step_, p,
                        Measurement{{q.name()}, basis, outcome, branch.probability});
        probability_ *= branch.probability;
        if (branch.is_zero()) {
            reachable_ = false;
        } else {
            state_ = std::move(*branch.collapsed);
        }
        return outcome.value;
    }

    void correct(const CorrectionRule &rule) {
        transcript_.add(step_, Party::Alice, Correction{rule, "a1", rule.on_a1});
        transcript_.add(step_, Party::Bob, Correction{rule, "b0", rule.on_b0});
        if (!reachable_) {
            return;
        }
        if (rule.on_a1 != Gate::I) {
            state_ = apply_single(state_, rule.on_a1, label::a1);
        }
        if (rule.on_b0 != Gate::I) {
            state_ = apply_single(state_, rule.on_b0, label::b0);
        }
    }

    ChannelCode code_;
    InputState alice_in_;
    InputState bob_in_;
    RunMode mode_;
    Rng rng_;
    StateVector state_;
    Transcript transcript_;
    std::array<int, 5> outcomes_{};
    double probability_{1.0};
    bool reachable_{true};
    int step_{0};
};

/// Runs steps 1-8 and reads out both transmitted states.
inline ProtocolResult run_bqct(const ChannelCode &code, const InputState &alice_in,
                               const InputState &bob_in, const RunMode &mode) {
    BqctSession s(code, alice_in, bob_in, mode);
    s.share_channel();
    s.entangle_inputs();
    s.measure_z();
    s.correct_x();
    s.measure_x();
    s.correct_z();
    s.charlie_measure();
    s.correct_charlie();
    return s.finish();
}

/// Runs steps 1-6 only: Charlie never measures or announces anything.
inline ControlReport run_bqct_withheld(const ChannelCode &code,
                                       const InputState &alice_in,
                                       const InputState &bob_in,
                                       const RunMode &mode) {
    BqctSession s(code, alice_in, bob_in, mode);
    s.share_channel();
    s.entangle_inputs();
    s.measure_z();
    s.correct_x();
    s.measure_x();
    s.correct_z();
    return s.withheld_report();
}

/// All 32 outcome combinations in selector-index order.
inline std::vector<ProtocolResult> enumerate_branches(const ChannelCode &code,
                                                      const InputState &alice_in,
                                                      const InputState &bob_in) {
    std::vector<ProtocolResult> out;
    out.reserve(BranchSelector::kCount);
    for (int i = 0; i < BranchSelector::kCount; ++i) {
        out.push_back(run_bqct(code, alice_in, bob_in,
                               EnumerateBranch{BranchSelector::from_index(i)}));
    }
    return out;
}

// Published collapse tables for channel code 01, kept verbatim as oracles.
namespace published {

/// One ket of a table row: sign * coefficient(alpha_i beta_j) |bits>.
struct Term {
    int alpha{0};
    int beta{0};
    const char *bits{""};
    int sign{1};
};

using Row = std::array<Term, 4>;

/// Z-measurement collapse, kets over (b0)(a1)(c)(A)(B); index 2*alice+bob.
inline const std::array<Row, 4> &z_collapse_rows() {
    static const std::array<Row, 4> rows{{
        {{{0, 0, "00000", 1}, {0, 1, "01101", 1}, {1, 0, "10010", 1}, {1, 1, "11111", 1}}},
        {{{0, 0, "01100", 1}, {0, 1, "00001", 1}, {1, 0, "11110", 1}, {1, 1, "10011", 1}}},
        {{{0, 0, "10000", 1}, {0, 1, "11101", 1}, {1, 0, "00010", 1}, {1, 1, "01111", 1}}},
        {{{0, 0, "11100", 1}, {0, 1, "10001", 1}, {1, 0, "01110", 1}, {1, 1, "00011", 1}}},
    }};
    return rows;
}

/// X-measurement collapse, kets over (b0)(a1)(c); index 2*alice+bob with
/// 0 for + and 1 for -.
inline const std::array<Row, 4> &x_collapse_rows() {
    static const std::array<Row, 4> rows{{
        {{{0, 0, "000", 1}, {0, 1, "011", 1}, {1, 0, "100", 1}, {1, 1, "111", 1}}},
        {{{0, 0, "011", 1}, {0, 1, "000", -1}, {1, 0, "111", 1}, {1, 1, "100", -1}}},
        {{{0, 0, "100", 1}, {0, 1, "111", 1}, {1, 0, "000", -1}, {1, 1, "011", -1}}},
        {{{0, 0, "111", 1}, {0, 1, "100", -1}, {1, 0, "011", -1}, {1, 1, "000", 1}}},
    }};
    return rows;
}

/// State after the X corrections, over (b0)(a1)(c)(A)(B).
inline const Row &after_x_correction() {
    static const Row row{{{0, 0, "00000", 1}, {0, 1, "01101", 1},
                          {1, 0, "10010", 1}, {1, 1, "11111", 1}}};
    return row;
}

/// State after the Z corrections, over (b0)(a1)(c).
inline const Row &after_z_correction() {
    static const Row row{{{0, 0, "000", 1}, {0, 1, "011", 1},
                          {1, 0, "100", 1}, {1, 1, "111", 1}}};
    return row;
}

/// Evaluates a row with concrete coefficients on the given labels.
inline StateVector evaluate(const Row &row, const InputState &alpha,
                            const InputState &beta,
                            std::vector<QubitLabel> labels) {
    const std::size_t n = labels.size();
    std::vector<Amplitude> amps(std::size_t{1} << n, 0.0);
    for (const auto &t : row) {
        const Amplitude a = t.alpha ? alpha.c1 : alpha.c0;
        const Amplitude b = t.beta ? beta.c1 : beta.c0;
        amps[StateVector::parse_bits(t.bits, n)] += static_cast<double>(t.sign) * a * b;
    }
    return StateVector::normalized(std::move(labels), std::move(amps));
}

inline std::vector<QubitLabel> z_collapse_labels() {
    return {label::b0, label::a1, label::c, label::A, label::B};
}
inline std::vector<QubitLabel> x_collapse_labels() {
    return {label::b0, label::a1, label::c};
}

} // namespace published

/// Result of checking one published collapse row against simulation.
struct CollapseRowCheck {
    std::string table; // "Z" (after step 3) or "X" (after step 5)
    std::string key;   // outcome pair, e.g. "01" or "+-"
    double max_distance{0.0};
    bool passed{false};
    /// X rows only: distance to the collapse of the uncorrected Z-branch
    /// with the same outcome pair.
    std::optional<double> uncorrected_distance;
};

struct CollapseReport {
    std::vector<CollapseRowCheck> rows;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(rows.begin(), rows.end(),
                           [](const auto &r) { return r.passed; });
    }
};

namespace detail {
inline StateVector run_to(int last_step, const InputState &alpha,
                          const InputState &beta, const BranchSelector &sel,
                          bool skip_x_correction = false) {
    BqctSession s({0, 1}, alpha, beta, EnumerateBranch{sel});
    s.share_channel();
    s.entangle_inputs();
    s.measure_z();
    if (last_step >= 4) {
        s.correct_x(skip_x_correction ? std::optional<CorrectionRule>(CorrectionRule{})
                                      : std::nullopt);
    }
    if (last_step >= 5) {
        s.measure_x();
    }
    return s.state();
}
} // namespace detail

/**
 * @brief Checks the published Z and X collapse rows against simulation on
 * channel code 01.
 *
 * Each seed draws a Haar-random input pair. A Z row (alice, bob) is compared
 * with the simulated branch a0 = alice, b1 = bob right after the Z
 * measurements. An X row is compared with the X-measurement branch of the
 * state reached after the X corrections on the (0, 0) Z branch, which is the
 * published post-correction state. Comparison is amplitude-wise after phase
 * normalization, within kFidelityTol.
 */
inline CollapseReport verify_collapse_tables(const std::vector<std::uint64_t> &seeds) {
    CollapseReport report;
    const char *x_keys[] = {"++", "+-", "-+", "--"};
    for (int row = 0; row < 4; ++row) {
        CollapseRowCheck z{"Z", std::to_string(row >> 1) + std::to_string(row & 1), 0.0, false, std::nullopt};
        CollapseRowCheck x{"X", x_keys[row], 0.0, false, std::nullopt};
        x.uncorrected_distance = 0.0;
        for (auto seed : seeds) {
            Rng rng(seed);
            const InputState alpha = random_input_state(rng);
            const InputState beta = random_input_state(rng);
            const int hi = row >> 1;
            const int lo = row & 1;

            const StateVector zsim = detail::run_to(3, alpha, beta, {{hi, lo, 0, 0, 0}});
            const StateVector zref = published::evaluate(
                published::z_collapse_rows()[row], alpha, beta,
                published::z_collapse_labels());
            z.max_distance = std::max(
                z.max_distance,
                phase_normalized_distance(reorder(zsim, zref.labels()).amplitudes(),
                                          zref.amplitudes()));

            const StateVector xref = published::evaluate(
                published::x_collapse_rows()[row], alpha, beta,
                published::x_collapse_labels());
            const StateVector xsim = detail::run_to(5, alpha, beta, {{0, 0, hi, lo, 0}});
            x.max_distance = std::max(
                x.max_distance,
                phase_normalized_distance(reorder(xsim, xref.labels()).amplitudes(),
                                          xref.amplitudes()));
            const StateVector xraw =
                detail::run_to(5, alpha, beta, {{hi, lo, hi, lo, 0}}, true);
            x.uncorrected_distance = std::max(
                *x.uncorrected_distance,
                phase_normalized_distance(reorder(xraw, xref.labels()).amplitudes(),
                                          xref.amplitudes()));
        }
        z.passed = z.max_distance <= kFidelityTol;
        x.passed = x.max_distance <= kFidelityTol;
        report.rows.push_back(z);
        report.rows.push_back(x);
    }
    std::stable_partition(report.rows.begin(), report.rows.end(),
                          [](const auto &r) { return r.table == "Z"; });
    return report;
}

} // namespace bqct
