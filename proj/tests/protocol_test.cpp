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

#include "bqct/protocol.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "bqct/random.hpp"

using namespace bqct;

namespace {

struct Inputs {
    InputState alpha;
    InputState beta;
};

Inputs random_inputs(std::uint64_t seed) {
    Rng rng(seed);
    return {random_input_state(rng), random_input_state(rng)};
}

StateVector run_steps(int last, const Inputs &in, BranchSelector sel,
                      ChannelCode code = {0, 1}) {
    BqctSession s(code, in.alpha, in.beta, EnumerateBranch{sel});
    s.share_channel();
    if (last >= 2) s.entangle_inputs();
    if (last >= 3) s.measure_z();
    if (last >= 4) s.correct_x();
    if (last >= 5) s.measure_x();
    if (last >= 6) s.correct_z();
    if (last >= 7) s.charlie_measure();
    if (last >= 8) s.correct_charlie();
    return s.state();
}

double phase_distance(const StateVector &sim, const StateVector &ref) {
    return phase_normalized_distance(reorder(sim, ref.labels()).amplitudes(),
                                     ref.amplitudes());
}

} // namespace

TEST(Lookups, x_corrections) {
    EXPECT_EQ(lookup_x_correction(0, 0).str(), "II");
    EXPECT_EQ(lookup_x_correction(0, 1).str(), "IX");
    EXPECT_EQ(lookup_x_correction(1, 0).str(), "XI");
    EXPECT_EQ(lookup_x_correction(1, 1).str(), "XX");
    EXPECT_THROW(lookup_x_correction(2, 0), Error);
}

TEST(Lookups, z_corrections) {
    EXPECT_EQ(lookup_z_correction(0, 0).str(), "II");
    EXPECT_EQ(lookup_z_correction(0, 1).str(), "IZ");
    EXPECT_EQ(lookup_z_correction(1, 0).str(), "ZI");
    EXPECT_EQ(lookup_z_correction(1, 1).str(), "ZZ");
}

TEST(Lookups, charlie_corrections) {
    EXPECT_EQ(lookup_charlie_correction({1, 1}, 1).str(), "ZZ");
    EXPECT_EQ(lookup_charlie_correction({0, 0}, 1).str(), "II");
    EXPECT_EQ(lookup_charlie_correction({0, 1}, 1).str(), "IZ");
    EXPECT_EQ(lookup_charlie_correction({1, 0}, 1).str(), "ZI");
    for (const auto &code : kAllChannelCodes) {
        EXPECT_EQ(lookup_charlie_correction(code, 0).str(), "II");
    }
}

TEST(BranchSelector, index_round_trip) {
    for (int i = 0; i < BranchSelector::kCount; ++i) {
        EXPECT_EQ(BranchSelector::from_index(i).index(), i);
    }
    EXPECT_EQ(BranchSelector::from_index(0b01101).str(), "01-+-");
    EXPECT_THROW(BranchSelector::from_index(32), Error);
}

TEST(Session, joint_state_is_channel_times_inputs) {
    const auto in = random_inputs(1);
    auto sv = run_steps(1, in, {});
    auto want = tensor(tensor(prepare_channel({0, 1}), to_state(in.alpha, label::A)),
                       to_state(in.beta, label::B));
    EXPECT_NEAR(fidelity(sv, want), 1.0, kFidelityTol);
}

TEST(Session, input_cnots_produce_the_published_joint_state) {
    const auto in = random_inputs(2);
    // (a0)(b0)(a1)(c)(b1)(A)(B) terms grouped by the input basis pair.
    const std::vector<std::pair<std::array<int, 2>, std::vector<std::string>>> groups{
        {{0, 0}, {"0000000", "0011100", "1100000", "1111100"}},
        {{0, 1}, {"0000101", "0011001", "1100101", "1111001"}},
        {{1, 0}, {"1000010", "1011110", "0100010", "0111110"}},
        {{1, 1}, {"1000111", "1011011", "0100111", "0111011"}},
    };
    std::vector<Amplitude> amps(128, 0.0);
    for (const auto &[ij, kets] : groups) {
        const Amplitude coef = (ij[0] ? in.alpha.c1 : in.alpha.c0) *
                               (ij[1] ? in.beta.c1 : in.beta.c0) * 0.5;
        for (const auto &k : kets) {
            amps[StateVector::parse_bits(k, 7)] += coef;
        }
    }
    StateVector want({"a0", "b0", "a1", "c", "b1", "A", "B"}, amps);
    auto sv = run_steps(2, in, {});
    EXPECT_LE(phase_distance(sv, want), kFidelityTol);
}

TEST(Session, alice_and_bob_actions_commute) {
    const auto in = random_inputs(3);
    auto joint = run_steps(1, in, {});
    auto ab = apply_cnot(apply_cnot(joint, label::A, label::a0), label::B, label::b1);
    auto ba = apply_cnot(apply_cnot(joint, label::B, label::b1), label::A, label::a0);
    EXPECT_NEAR(fidelity(ab, ba), 1.0, kFidelityTol);
}

TEST(Session, steps_must_run_in_order) {
    BqctSession s({0, 1}, {}, {}, EnumerateBranch{});
    EXPECT_THROW(s.entangle_inputs(), Error);
    s.share_channel();
    EXPECT_THROW(s.share_channel(), Error);
    EXPECT_THROW(s.finish(), Error);
}

TEST(Session, rejects_unnormalized_inputs) {
    EXPECT_THROW(run_bqct({0, 1}, {1.0, 1.0}, {}, EnumerateBranch{}), Error);
}

TEST(CollapseTables, z_rows_match_simulation) {
    const auto rep = verify_collapse_tables({1, 2, 3});
    for (const auto &row : rep.rows) {
        if (row.table == "Z") {
            EXPECT_TRUE(row.passed) << row.key << " " << row.max_distance;
        }
    }
}

TEST(CollapseTables, z_row_01_spot_check) {
    const auto in = random_inputs(4);
    auto sim = run_steps(3, in, {{0, 1, 0, 0, 0}});
    auto ref = published::evaluate(published::z_collapse_rows()[1], in.alpha, in.beta,
                                   published::z_collapse_labels());
    EXPECT_LE(phase_distance(sim, ref), kFidelityTol);
}

TEST(CollapseTables, x_corrections_reach_published_state_up_to_x_on_c) {
    // Bob's Z outcome leaves an X on Charlie's qubit that the published
    // post-correction state does not show. It only flips the sign of c's
    // |-> outcome, so it never affects recovery.
    const auto in = random_inputs(5);
    const auto ref = published::evaluate(published::after_x_correction(), in.alpha,
                                         in.beta, published::z_collapse_labels());
    for (int za = 0; za < 2; ++za) {
        for (int zb = 0; zb < 2; ++zb) {
            auto sim = run_steps(4, in, {{za, zb, 0, 0, 0}});
            if (zb == 1) {
                EXPECT_NEAR(fidelity(sim, ref), 0.0, kFidelityTol);
                sim = apply_single(sim, Gate::X, label::c);
            }
            EXPECT_LE(phase_distance(sim, ref), kFidelityTol) << za << zb;
        }
    }
}

TEST(CollapseTables, published_x_rows_skip_the_x_correction) {
    // Only the (+,+) X row equals the simulated collapse of the corrected
    // state. The other rows equal the collapse of the uncorrected Z branch
    // with the same outcome pair.
    const auto rep = verify_collapse_tables({6, 7});
    std::map<std::string, CollapseRowCheck> x;
    for (const auto &row : rep.rows) {
        if (row.table == "X") {
            x[row.key] = row;
        }
    }
    ASSERT_EQ(x.size(), 4u);
    EXPECT_TRUE(x["++"].passed);
    for (const char *key : {"+-", "-+", "--"}) {
        EXPECT_FALSE(x[key].passed) << key;
        EXPECT_GT(x[key].max_distance, 0.1) << key;
        EXPECT_LE(*x[key].uncorrected_distance, kFidelityTol) << key;
    }
    EXPECT_FALSE(rep.all_passed());
}

TEST(CollapseTables, z_corrections_reach_the_published_state) {
    const auto in = random_inputs(8);
    const auto ref = published::evaluate(published::after_z_correction(), in.alpha,
                                         in.beta, published::x_collapse_labels());
    for (int xa = 0; xa < 2; ++xa) {
        for (int xb = 0; xb < 2; ++xb) {
            auto sim = run_steps(6, in, {{0, 0, xa, xb, 0}});
            EXPECT_LE(phase_distance(sim, ref), kFidelityTol) << xa << xb;
        }
    }
}

TEST(CharlieStep, code_01_leaves_the_published_pair_states) {
    const auto in = random_inputs(9);
    const auto &a = in.alpha;
    const auto &b = in.beta;
    // Outcome + : a0b0|00> + a0b1|01> + a1b0|10> + a1b1|11> over (b0)(a1).
    StateVector plus({"b0", "a1"}, {a.c0 * b.c0, a.c0 * b.c1, a.c1 * b.c0, a.c1 * b.c1});
    StateVector minus({"b0", "a1"},
                      {a.c0 * b.c0, -a.c0 * b.c1, a.c1 * b.c0, -a.c1 * b.c1});
    EXPECT_LE(phase_distance(run_steps(7, in, {{0, 0, 0, 0, 0}}), plus), kFidelityTol);
    EXPECT_LE(phase_distance(run_steps(7, in, {{0, 0, 0, 0, 1}}), minus), kFidelityTol);
    EXPECT_LE(phase_distance(run_steps(8, in, {{0, 0, 0, 0, 1}}), plus), kFidelityTol);
}

TEST(RunBqct, every_branch_recovers_both_states) {
    const auto in = random_inputs(10);
    for (int i = 0; i < BranchSelector::kCount; ++i) {
        auto r = run_bqct({0, 1}, in.alpha, in.beta,
                          EnumerateBranch{BranchSelector::from_index(i)});
        EXPECT_GE(r.fidelity_alice, 1.0 - kFidelityTol) << i;
        EXPECT_GE(r.fidelity_bob, 1.0 - kFidelityTol) << i;
        EXPECT_NEAR(r.probability, 1.0 / 32.0, kNormTol);
    }
}

TEST(RunBqct, alice_ends_with_bobs_state_and_bob_with_alices) {
    const InputState alice{0.6, 0.8};
    const InputState bob{kInvSqrt2, {0.0, kInvSqrt2}};
    auto r = run_bqct({1, 1}, alice, bob, SampleSeed{5});
    EXPECT_NEAR(std::abs(r.alice_recovered.c0 - bob.c0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(r.alice_recovered.c1 - bob.c1), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(r.bob_recovered.c0 - alice.c0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(r.bob_recovered.c1 - alice.c1), 0.0, 1e-10);
}

TEST(RunBqct, computational_zero_is_a_fixed_point) {
    for (const auto &code : kAllChannelCodes) {
        for (int i = 0; i < BranchSelector::kCount; ++i) {
            auto r = run_bqct(code, {1.0, 0.0}, {1.0, 0.0},
                              EnumerateBranch{BranchSelector::from_index(i)});
            EXPECT_NEAR(std::abs(r.alice_recovered.c0 - Amplitude(1.0)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(r.bob_recovered.c0 - Amplitude(1.0)), 0.0, 1e-12);
        }
    }
}

TEST(RunBqct, sampling_is_deterministic_per_seed) {
    const auto in = random_inputs(11);
    auto r1 = run_bqct({1, 0}, in.alpha, in.beta, SampleSeed{42});
    auto r2 = run_bqct({1, 0}, in.alpha, in.beta, SampleSeed{42});
    EXPECT_EQ(r1.transcript.to_jsonl(), r2.transcript.to_jsonl());
    EXPECT_EQ(r1.branch, r2.branch);
}

TEST(EnumerateBranches, thirty_two_uniform_branches) {
    const auto in = random_inputs(12);
    auto all = enumerate_branches({0, 1}, in.alpha, in.beta);
    ASSERT_EQ(all.size(), 32u);
    double total = 0.0;
    double min_f = 1.0;
    for (const auto &r : all) {
        EXPECT_NEAR(r.probability, 1.0 / 32.0, 1e-12);
        total += r.probability;
        min_f = std::min({min_f, r.fidelity_alice, r.fidelity_bob});
    }
    EXPECT_NEAR(total, 1.0, kFidelityTol);
    EXPECT_GE(min_f, 1.0 - kFidelityTol);
}

TEST(Transcript, counts_per_run) {
    const auto in = random_inputs(13);
    for (const auto &code : kAllChannelCodes) {
        auto t = run_bqct(code, in.alpha, in.beta, SampleSeed{1}).transcript;
        EXPECT_TRUE(t.completed());
        const auto meas = t.of_kind<Measurement>();
        EXPECT_EQ(meas.size(), 5u);
        for (const auto *e : meas) {
            EXPECT_EQ(std::get<Measurement>(e->body).qubits.size(), 1u);
        }
        int step2_cnots = 0;
        for (const auto *e : t.of_kind<GateOp>()) {
            step2_cnots += e->step == 2 && std::get<GateOp>(e->body).gate == "CNOT";
        }
        EXPECT_EQ(step2_cnots, 2);
        std::size_t user_bits = 0;
        std::size_t charlie_bits = 0;
        for (const auto *e : t.of_kind<ClassicalMessage>()) {
            const auto n = std::get<ClassicalMessage>(e->body).bit_count();
            (e->party == Party::Charlie ? charlie_bits : user_bits) += n;
        }
        EXPECT_EQ(user_bits, 4u);
        EXPECT_EQ(charlie_bits, 3u);
    }
}

TEST(Transcript, corrections_follow_the_messages_they_use) {
    const auto in = random_inputs(14);
    for (int i = 0; i < BranchSelector::kCount; ++i) {
        const auto sel = BranchSelector::from_index(i);
        auto r = run_bqct({1, 1}, in.alpha, in.beta, EnumerateBranch{sel});
        const auto &ev = r.transcript.events();
        for (std::size_t k = 0; k < ev.size(); ++k) {
            const auto *corr = std::get_if<Correction>(&ev[k].body);
            if (!corr) {
                continue;
            }
            // Every message of this step comes before any correction of it.
            for (std::size_t j = k + 1; j < ev.size(); ++j) {
                if (ev[j].step == ev[k].step) {
                    EXPECT_FALSE(std::holds_alternative<ClassicalMessage>(ev[j].body));
                }
            }
            if (ev[k].step == 4 && ev[k].party == Party::Alice) {
                // Alice's X on a1 is decided by Bob's Z bit alone.
                EXPECT_EQ(corr->qubit, "a1");
                EXPECT_EQ(corr->gate == Gate::X, sel.bits[1] == 1);
                bool saw_bob_bit = false;
                for (std::size_t j = 0; j < k; ++j) {
                    const auto *m = std::get_if<ClassicalMessage>(&ev[j].body);
                    saw_bob_bit |= m && ev[j].party == Party::Bob &&
                                   m->payload_kind == PayloadKind::ZOutcome;
                }
                EXPECT_TRUE(saw_bob_bit);
            }
        }
    }
}

TEST(CorrectionAlgebra, composite_is_a_pauli_product_and_self_inverse) {
    const auto in = random_inputs(15);
    for (const auto &code : kAllChannelCodes) {
        for (int i = 0; i < BranchSelector::kCount; ++i) {
            const auto s = BranchSelector::from_index(i);
            const CorrectionRule x = lookup_x_correction(s.bits[0], s.bits[1]);
            const CorrectionRule z = lookup_z_correction(s.bits[2], s.bits[3]);
            const CorrectionRule c = lookup_charlie_correction(code, s.bits[4]);
            for (Gate g : {x.on_b0, x.on_a1}) {
                EXPECT_TRUE(g == Gate::I || g == Gate::X);
            }
            for (Gate g : {z.on_b0, z.on_a1, c.on_b0, c.on_a1}) {
                EXPECT_TRUE(g == Gate::I || g == Gate::Z);
            }
            // The composite squares to +-I, so applying it twice restores
            // the state up to global phase.
            auto state = run_steps(3, in, s, code);
            auto once = state;
            for (int rep = 0; rep < 2; ++rep) {
                for (const auto &rule : {x, z, c}) {
                    once = apply_single(once, rule.on_b0, label::b0);
                    once = apply_single(once, rule.on_a1, label::a1);
                }
            }
            EXPECT_NEAR(fidelity(once, state), 1.0, kFidelityTol);
        }
    }
}

TEST(CorrectionUniqueness, wrong_x_rule_breaks_recovery) {
    const auto in = random_inputs(16);
    const BranchSelector sel{{1, 0, 0, 1, 1}};
    int restoring = 0;
    for (Gate g0 : {Gate::I, Gate::X}) {
        for (Gate g1 : {Gate::I, Gate::X}) {
            BqctSession s({0, 1}, in.alpha, in.beta, EnumerateBranch{sel});
            s.share_channel();
            s.entangle_inputs();
            s.measure_z();
            s.correct_x(CorrectionRule{g0, g1});
            s.measure_x();
            s.correct_z();
            s.charlie_measure();
            s.correct_charlie();
            auto r = s.finish();
            const bool ok = r.fidelity_alice >= 1.0 - kFidelityTol &&
                            r.fidelity_bob >= 1.0 - kFidelityTol;
            restoring += ok;
            EXPECT_EQ(ok, (CorrectionRule{g0, g1} == lookup_x_correction(1, 0)));
        }
    }
    EXPECT_EQ(restoring, 1);
}

TEST(Withheld, charlie_controls_codes_with_a_set_bit) {
    const auto in = random_inputs(17);
    for (const auto &code : kAllChannelCodes) {
        for (int i = 0; i < BranchSelector::kCount; i += 2) {
            auto r = run_bqct_withheld(code, in.alpha, in.beta,
                                       EnumerateBranch{BranchSelector::from_index(i)});
            const double worst = std::min(r.purity_b0, r.purity_a1);
            if (code == ChannelCode{0, 0}) {
                EXPECT_NEAR(worst, 1.0, kFidelityTol);
            } else {
                EXPECT_LE(worst, 1.0 - 1e-3) << code.str();
            }
            EXPECT_FALSE(r.transcript.completed());
            EXPECT_TRUE(r.transcript.of_kind<ClassicalMessage>().size() == 4u);
        }
    }
}
