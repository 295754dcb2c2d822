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
 * The five-qubit channel shared by Alice (a0, a1), Bob (b0, b1) and
 * Charlie (c), in its four controller-selected variants.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsim.hpp"

namespace bqct {

namespace label {
inline const QubitLabel a0{"a0"};
inline const QubitLabel b0{"b0"};
inline const QubitLabel a1{"a1"};
inline const QubitLabel c{"c"};
inline const QubitLabel b1{"b1"};
inline const QubitLabel A{"A"};
inline const QubitLabel B{"B"};
} // namespace label

/// Channel register order (a0)(b0)(a1)(c)(b1).
inline std::vector<QubitLabel> channel_labels() {
    return {label::a0, label::b0, label::a1, label::c, label::b1};
}

/// Charlie's two-bit choice, written in the order (a0, b1). A set bit means
/// that qubit controls a CNOT onto c.
struct ChannelCode {
    int bit_a0{0};
    int bit_b1{0};

    friend bool operator==(const ChannelCode &, const ChannelCode &) = default;

    [[nodiscard]] std::string str() const {
        return std::string{static_cast<char>('0' + bit_a0),
                           static_cast<char>('0' + bit_b1)};
    }

    static ChannelCode parse(std::string_view s) {
        if (s.size() != 2 || (s[0] != '0' && s[0] != '1') ||
            (s[1] != '0' && s[1] != '1')) {
            throw Error("channel code must be two bits, got '" +
                        std::string(s) + "'");
        }
        return {s[0] - '0', s[1] - '0'};
    }
};

inline constexpr std::array<ChannelCode, 4> kAllChannelCodes{
    ChannelCode{0, 0}, ChannelCode{0, 1}, ChannelCode{1, 0}, ChannelCode{1, 1}};

inline void validate(const ChannelCode &code) {
    if ((code.bit_a0 != 0 && code.bit_a0 != 1) ||
        (code.bit_b1 != 0 && code.bit_b1 != 1)) {
        throw Error("channel code bits must be 0 or 1");
    }
}

/// Charlie's U: CNOT(a0 -> c) if bit_a0, then CNOT(b1 -> c) if bit_b1.
inline StateVector apply_charlie_u(const StateVector &sv, const ChannelCode &code) {
    validate(code);
    for (const auto &l : {label::a0, label::c, label::b1}) {
        if (!sv.contains(l)) {
            throw Error("register lacks channel qubit '" + l.name() + "'");
        }
    }
    StateVector out = sv;
    if (code.bit_a0 == 1) {
        out = apply_cnot(out, label::a0, label::c);
    }
    if (code.bit_b1 == 1) {
        out = apply_cnot(out, label::b1, label::c);
    }
    return out;
}

/// The state after H(b0), H(a1), CNOT(b0 -> a0), CNOT(a1 -> b1).
inline StateVector prepare_channel_base() {
    StateVector sv = new_basis_state(channel_labels(), "00000");
    sv = apply_single(sv, Gate::H, label::b0);
    sv = apply_single(sv, Gate::H, label::a1);
    sv = apply_cnot(sv, label::b0, label::a0);
    sv = apply_cnot(sv, label::a1, label::b1);
    return sv;
}

inline StateVector prepare_channel(const ChannelCode &code) {
    return apply_charlie_u(prepare_channel_base(), code);
}

struct ReferenceTerm {
    std::string bits; // (a0)(b0)(a1)(c)(b1)
    Amplitude amplitude;
};

/// Published channel amplitudes, one row per code.
inline std::vector<ReferenceTerm> reference_amplitudes(const ChannelCode &code) {
    validate(code);
    static const std::array<std::array<const char *, 4>, 4> kTable{{
        {"00000", "00101", "11000", "11101"}, // 00
        {"00000", "00111", "11000", "11111"}, // 01
        {"00000", "00101", "11010", "11111"}, // 10
        {"00000", "00111", "11010", "11101"}, // 11
    }};
    std::vector<ReferenceTerm> out;
    for (const char *bits : kTable[code.bit_a0 * 2 + code.bit_b1]) {
        out.push_back({bits, 0.5});
    }
    return out;
}

/// The reference row expanded to a full state on the channel register.
inline StateVector reference_state(const ChannelCode &code) {
    std::vector<Amplitude> amps(32, 0.0);
    for (const auto &t : reference_amplitudes(code)) {
        amps[StateVector::parse_bits(t.bits, 5)] = t.amplitude;
    }
    return {channel_labels(), std::move(amps)};
}

/// Largest amplitude-wise deviation of the prepared channel from its
/// reference row. No phase normalization: both are real and positive.
inline double channel_reference_deviation(const ChannelCode &code) {
    const StateVector prepared = prepare_channel(code);
    const StateVector ref = reference_state(code);
    double d = 0.0;
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        d = std::max(d, std::abs(prepared.amplitudes()[i] - ref.amplitudes()[i]));
    }
    return d;
}

/// Number of mutually distinguishable channel states over all codes
/// (distinct when fidelity < 1 - kFidelityTol).
inline int distinct_channel_variants() {
    std::vector<StateVector> reps;
    for (const auto &code : kAllChannelCodes) {
        StateVector s = prepare_channel(code);
        bool seen = false;
        for (const auto &r : reps) {
            if (fidelity(r, s) >= 1.0 - kFidelityTol) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            reps.push_back(std::move(s));
        }
    }
    return static_cast<int>(reps.size());
}

} // namespace bqct
