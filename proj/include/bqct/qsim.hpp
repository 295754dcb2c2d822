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
 * Exact dense state-vector engine over labeled qubits.
 *
 * Amplitude index convention: the leftmost label is the most significant bit
 * of the basis index, so a register labeled (a0, b0, a1, c, b1) stores
 * |a0 b0 a1 c b1> at index a0*16 + b0*8 + a1*4 + c*2 + b1.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bqct {

using Amplitude = std::complex<double>;

/// Tolerance for norms and unitarity checks.
inline constexpr double kNormTol = 1e-12;
/// Tolerance for fidelity, purity and phase-normalized amplitude comparisons.
inline constexpr double kFidelityTol = 1e-10;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a qubit expected to be unentangled is not.
class PurityError : public Error {
  public:
    using Error::Error;
};

/// Name of one qubit inside a register.
class QubitLabel {
  public:
    QubitLabel() = default;
    QubitLabel(std::string name) : name_(std::move(name)) {}
    QubitLabel(const char *name) : name_(name) {}

    [[nodiscard]] const std::string &name() const noexcept { return name_; }

    friend bool operator==(const QubitLabel &, const QubitLabel &) = default;
    friend auto operator<=>(const QubitLabel &, const QubitLabel &) = default;

  private:
    std::string name_;
};

/// Ancilla labels anc_0, anc_1, ...
inline QubitLabel ancilla(std::size_t k) {
    return QubitLabel("anc_" + std::to_string(k));
}

enum class Basis : std::uint8_t { Z, X };

inline std::string_view to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// Measurement outcome. Z: 0 <-> |0>, 1 <-> |1>. X: 0 <-> |+>, 1 <-> |->.
struct Outcome {
    Basis basis{Basis::Z};
    int value{0};

    friend bool operator==(const Outcome &, const Outcome &) = default;
};

/// Symbol used for an outcome in reports: "0"/"1" for Z, "+"/"-" for X.
inline std::string outcome_symbol(const Outcome &o) {
    if (o.basis == Basis::Z) {
        return o.value == 0 ? "0" : "1";
    }
    return o.value == 0 ? "+" : "-";
}

enum class Gate : std::uint8_t { I, X, Z, H };

inline std::string_view to_string(Gate g) {
    switch (g) {
    case Gate::I:
        return "I";
    case Gate::X:
        return "X";
    case Gate::Z:
        return "Z";
    case Gate::H:
        return "H";
    }
    return "?";
}

using Matrix2 = std::array<Amplitude, 4>; // row-major

inline Matrix2 gate_matrix(Gate g) {
    switch (g) {
    case Gate::I:
        return {1.0, 0.0, 0.0, 1.0};
    case Gate::X:
        return {0.0, 1.0, 1.0, 0.0};
    case Gate::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case Gate::H:
        return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    }
    throw Error("unknown gate");
}

/**
 * @brief Dense pure state on an ordered list of uniquely labeled qubits.
 *
 * Instances are immutable values; every operation below returns a new state.
 * A register with zero qubits holds a single scalar amplitude.
 */
class StateVector {
  public:
    /// Builds a state from explicit amplitudes, which must already be
    /// normalized within kNormTol.
    StateVector(std::vector<QubitLabel> labels, std::vector<Amplitude> amps)
        : labels_(std::move(labels)), amps_(std::move(amps)) {
        validate_labels(labels_);
        if (labels_.size() > kMaxQubits) {
            throw Error("register too large");
        }
        if (amps_.size() != (std::size_t{1} << labels_.size())) {
            throw Error("amplitude count does not match 2^(qubit count)");
        }
        for (const auto &a : amps_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw Error("non-finite amplitude");
            }
        }
        if (std::abs(norm_squared() - 1.0) > kNormTol) {
            throw Error("state is not normalized");
        }
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    static StateVector normalized(std::vector<QubitLabel> labels,
                                  std::vector<Amplitude> amps) {
        double n2 = 0.0;
        for (const auto &a : amps) {
            n2 += std::norm(a);
        }
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            throw Error("cannot normalize a zero or non-finite vector");
        }
        const double s = 1.0 / std::sqrt(n2);
        for (auto &a : amps) {
            a *= s;
        }
        return {std::move(labels), std::move(amps)};
    }

    [[nodiscard]] std::span<const QubitLabel> labels() const noexcept {
        return labels_;
    }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return labels_.size();
    }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] bool contains(const QubitLabel &l) const {
        return std::find(labels_.begin(), labels_.end(), l) != labels_.end();
    }

    /// Position of a label in the register; throws if absent.
    [[nodiscard]] std::size_t position(const QubitLabel &l) const {
        auto it = std::find(labels_.begin(), labels_.end(), l);
        if (it == labels_.end()) {
            throw Error("unknown qubit label '" + l.name() + "'");
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Bit mask of a label within the amplitude index.
    [[nodiscard]] std::size_t mask(const QubitLabel &l) const {
        return std::size_t{1} << (labels_.size() - 1 - position(l));
    }

    [[nodiscard]] double norm_squared() const {
        double n2 = 0.0;
        for (const auto &a : amps_) {
            n2 += std::norm(a);
        }
        return n2;
    }

    /// Amplitude of the basis state spelled as a bitstring in label order.
    [[nodiscard]] Amplitude amplitude(std::string_view bits) const {
        return amps_.at(parse_bits(bits, labels_.size()));
    }

    static constexpr std::size_t kMaxQubits = 24;

    static void validate_labels(std::span<const QubitLabel> labels) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i].name().empty()) {
                throw Error("empty qubit label");
            }
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) {
                    throw Error("duplicate qubit label '" + labels[i].name() +
                                "'");
                }
            }
        }
    }

    static std::size_t parse_bits(std::string_view bits, std::size_t width) {
        if (bits.size() != width) {
            throw Error("bitstring length does not match qubit count");
        }
        std::size_t index = 0;
        for (char ch : bits) {
            if (ch != '0' && ch != '1') {
                throw Error("bitstring must contain only 0 and 1");
            }
            index = (index << 1) | static_cast<std::size_t>(ch - '0');
        }
        return index;
    }

  private:
    std::vector<QubitLabel> labels_;
    std::vector<Amplitude> amps_;
};

inline StateVector new_basis_state(std::vector<QubitLabel> labels,
                                   std::string_view bits) {
    StateVector::validate_labels(labels);
    const std::size_t index = StateVector::parse_bits(bits, labels.size());
    std::vector<Amplitude> amps(std::size_t{1} << labels.size(), 0.0);
    amps[index] = 1.0;
    return {std::move(labels), std::move(amps)};
}

/// Single-qubit state a0|0> + a1|1> on one label.
inline StateVector single_qubit(QubitLabel label, Amplitude c0, Amplitude c1) {
    return StateVector::normalized({std::move(label)}, {c0, c1});
}

inline StateVector tensor(const StateVector &left, const StateVector &right) {
    std::vector<QubitLabel> labels(left.labels().begin(), left.labels().end());
    for (const auto &l : right.labels()) {
        if (left.contains(l)) {
            throw Error("tensor of registers sharing label '" + l.name() + "'");
        }
        labels.push_back(l);
    }
    const auto ra = right.amplitudes();
    std::vector<Amplitude> amps;
    amps.reserve(left.size() * right.size());
    for (const auto &a : left.amplitudes()) {
        for (const auto &b : ra) {
            amps.push_back(a * b);
        }
    }
    // Product of two unit vectors; renormalize away rounding only.
    return StateVector::normalized(std::move(labels), std::move(amps));
}

inline StateVector apply_matrix(const StateVector &sv, const Matrix2 &m,
                                const QubitLabel &target) {
    const std::size_t bit = sv.mask(target);
    std::vector<Amplitude> out(sv.amplitudes().begin(), sv.amplitudes().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        const Amplitude v0 = out[i];
        const Amplitude v1 = out[i | bit];
        out[i] = m[0] * v0 + m[1] * v1;
        out[i | bit] = m[2] * v0 + m[3] * v1;
    }
    std::vector<QubitLabel> labels(sv.labels().begin(), sv.labels().end());
    return {std::move(labels), std::move(out)};
}

inline StateVector apply_single(const StateVector &sv, Gate gate,
                                const QubitLabel &target) {
    return apply_matrix(sv, gate_matrix(gate), target);
}

inline StateVector apply_cnot(const StateVector &sv, const QubitLabel &control,
                              const QubitLabel &target) {
    if (control == target) {
        throw Error("CNOT control and target must differ");
    }
    const std::size_t cbit = sv.mask(control);
    const std::size_t tbit = sv.mask(target);
    std::vector<Amplitude> out(sv.amplitudes().begin(), sv.amplitudes().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(out[i], out[i | tbit]);
        }
    }
    std::vector<QubitLabel> labels(sv.labels().begin(), sv.labels().end());
    return {std::move(labels), std::move(out)};
}

/// Outcome of projecting one qubit. `collapsed` is empty for a zero branch.
struct BranchResult {
    double probability{0.0};
    std::optional<StateVector> collapsed;

    [[nodiscard]] bool is_zero() const noexcept { return !collapsed; }
};

/// Projects `target` onto the eigenstate named by `outcome` and removes it
/// from the register.
inline BranchResult measure_branch(const StateVector &sv,
                                   const QubitLabel &target, Basis basis,
                                   const Outcome &outcome) {
    if (outcome.basis != basis) {
        throw Error("outcome basis does not match measurement basis");
    }
    if (outcome.value != 0 && outcome.value != 1) {
        throw Error("outcome value must be 0 or 1");
    }
    const std::size_t n = sv.num_qubits();
    const std::size_t pos = sv.position(target);
    const std::size_t bit = std::size_t{1} << (n - 1 - pos);
    const std::size_t low_mask = bit - 1;

    // Bra of the selected eigenstate.
    std::array<double, 2> bra{};
    if (basis == Basis::Z) {
        bra = outcome.value == 0 ? std::array{1.0, 0.0} : std::array{0.0, 1.0};
    } else {
        bra = outcome.value == 0 ? std::array{kInvSqrt2, kInvSqrt2}
                                 : std::array{kInvSqrt2, -kInvSqrt2};
    }

    const auto amps = sv.amplitudes();
    std::vector<Amplitude> out(amps.size() / 2);
    double p = 0.0;
    for (std::size_t r = 0; r < out.size(); ++r) {
        const std::size_t i0 = ((r & ~low_mask) << 1) | (r & low_mask);
        out[r] = bra[0] * amps[i0] + bra[1] * amps[i0 | bit];
        p += std::norm(out[r]);
    }

    BranchResult result;
    result.probability = std::clamp(p, 0.0, 1.0);
    if (p <= kNormTol * kNormTol) {
        result.probability = 0.0;
        return result;
    }
    std::vector<QubitLabel> labels;
    labels.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i != pos) {
            labels.push_back(sv.labels()[i]);
        }
    }
    result.collapsed = StateVector::normalized(std::move(labels), std::move(out));
    return result;
}

/// Born-rule probability of each outcome of measuring `target`.
inline std::array<double, 2> outcome_probabilities(const StateVector &sv,
                                                   const QubitLabel &target,
                                                   Basis basis) {
    return {measure_branch(sv, target, basis, {basis, 0}).probability,
            measure_branch(sv, target, basis, {basis, 1}).probability};
}

/**
 * @brief Samples a measurement outcome with Born-rule probabilities.
 *
 * `uniform` must return a value in [0, 1). The returned branch is the one
 * measure_branch produces for the drawn outcome.
 */
template <class UniformSource>
std::pair<Outcome, BranchResult>
measure_sample(const StateVector &sv, const QubitLabel &target, Basis basis,
               UniformSource &&uniform) {
    BranchResult zero = measure_branch(sv, target, basis, {basis, 0});
    const double u = uniform();
    if (!zero.is_zero() && u < zero.probability) {
        return {Outcome{basis, 0}, std::move(zero)};
    }
    BranchResult one = measure_branch(sv, target, basis, {basis, 1});
    if (one.is_zero()) {
        return {Outcome{basis, 0}, std::move(zero)};
    }
    return {Outcome{basis, 1}, std::move(one)};
}

/// Same state with the register permuted into `order` (a permutation of the
/// current labels).
inline StateVector reorder(const StateVector &sv,
                           std::span<const QubitLabel> order) {
    const std::size_t n = sv.num_qubits();
    if (order.size() != n) {
        throw Error("label sets differ");
    }
    std::vector<std::size_t> src_mask(n);
    for (std::size_t j = 0; j < n; ++j) {
        src_mask[j] = sv.mask(order[j]);
    }
    StateVector::validate_labels(order);
    const auto amps = sv.amplitudes();
    std::vector<Amplitude> out(amps.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::size_t src = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if ((k >> (n - 1 - j)) & 1U) {
                src |= src_mask[j];
            }
        }
        out[k] = amps[src];
    }
    return {std::vector<QubitLabel>(order.begin(), order.end()), std::move(out)};
}

/// <a|b> after aligning b's register to a's label order.
inline Amplitude inner_product(const StateVector &a, const StateVector &b) {
    const StateVector aligned = reorder(b, a.labels());
    Amplitude acc = 0.0;
    const auto x = a.amplitudes();
    const auto y = aligned.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return acc;
}

/// |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const StateVector &a, const StateVector &b) {
    return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

/// Reduced density matrix of one qubit, row-major 2x2.
inline Matrix2 reduced_density(const StateVector &sv, const QubitLabel &target) {
    const std::size_t bit = sv.mask(target);
    const auto amps = sv.amplitudes();
    Matrix2 rho{};
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        const Amplitude v0 = amps[i];
        const Amplitude v1 = amps[i | bit];
        rho[0] += v0 * std::conj(v0);
        rho[1] += v0 * std::conj(v1);
        rho[2] += v1 * std::conj(v0);
        rho[3] += v1 * std::conj(v1);
    }
    return rho;
}

/// tr(rho^2) of the target's reduced state; 1 for an unentangled qubit.
inline double purity(const StateVector &sv, const QubitLabel &target) {
    const Matrix2 rho = reduced_density(sv, target);
    return std::norm(rho[0]) + std::norm(rho[1]) + std::norm(rho[2]) +
           std::norm(rho[3]);
}

/// Multiplies amplitudes by a phase so the first nonzero one is real positive.
inline std::vector<Amplitude>
phase_normalized(std::span<const Amplitude> amps,
                 double zero_tol = kFidelityTol) {
    std::vector<Amplitude> out(amps.begin(), amps.end());
    for (const auto &a : out) {
        if (std::abs(a) > zero_tol) {
            const Amplitude phase = std::conj(a) / std::abs(a);
            for (auto &v : out) {
                v *= phase;
            }
            break;
        }
    }
    return out;
}

/// Largest elementwise distance between two amplitude arrays after phase
/// normalization of both.
inline double phase_normalized_distance(std::span<const Amplitude> a,
                                        std::span<const Amplitude> b) {
    if (a.size() != b.size()) {
        throw Error("amplitude arrays differ in length");
    }
    const auto x = phase_normalized(a);
    const auto y = phase_normalized(b);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, std::abs(x[i] - y[i]));
    }
    return d;
}

/// Normalized one-qubit state c0|0> + c1|1>.
struct InputState {
    Amplitude c0{1.0};
    Amplitude c1{0.0};

    [[nodiscard]] double norm_squared() const {
        return std::norm(c0) + std::norm(c1);
    }
    [[nodiscard]] bool is_normalized(double tol = kFidelityTol) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }
};

inline StateVector to_state(const InputState &s, QubitLabel label) {
    if (!s.is_normalized()) {
        throw Error("input state is not normalized");
    }
    return StateVector::normalized({std::move(label)}, {s.c0, s.c1});
}

/**
 * @brief Reads out one unentangled qubit as a phase-fixed InputState.
 *
 * Throws PurityError when 1 - tr(rho^2) exceeds kFidelityTol.
 */
inline InputState extract_qubit(const StateVector &sv, const QubitLabel &target) {
    const double p = purity(sv, target);
    if (1.0 - p > kFidelityTol) {
        throw PurityError("qubit '" + target.name() +
                          "' is entangled with the rest of the register "
                          "(purity " +
                          std::to_string(p) + ")");
    }
    // For a product state every environment index carries the target state up
    // to scale; take the heaviest one.
    const std::size_t bit = sv.mask(target);
    const auto amps = sv.amplitudes();
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        const double w = std::norm(amps[i]) + std::norm(amps[i | bit]);
        if (w > best_w) {
            best_w = w;
            best = i;
        }
    }
    const double s = 1.0 / std::sqrt(best_w);
    std::array<Amplitude, 2> c{amps[best] * s, amps[best | bit] * s};
    const auto fixed = phase_normalized(c);
    return {fixed[0], fixed[1]};
}

/// Removes a qubit that is in |0>; throws if it carries weight on |1>.
inline StateVector discard_zero_qubit(const StateVector &sv,
                                      const QubitLabel &target) {
    BranchResult b = measure_branch(sv, target, Basis::Z, {Basis::Z, 0});
    if (b.is_zero() || 1.0 - b.probability > kFidelityTol) {
        throw Error("qubit '" + target.name() + "' is not in |0>");
    }
    return std::move(*b.collapsed);
}

} // namespace bqct
