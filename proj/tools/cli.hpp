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

// Command-line driver: run, enumerate, verify-tables, ghz, metrics.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bqct/bqct.hpp"

namespace bqct::cli {

/// Ingest tolerance for hand-typed amplitudes.
inline constexpr double kIngestTol = 1e-6;

inline std::string fixed10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10f", v);
    return buf;
}

/**
 * Parses a state flag: a preset ("random", "zero", "one", "plus") or
 * "re,im;re,im". Explicit states within kIngestTol of unit norm are
 * renormalized; a warning goes to `err` when that changes anything.
 */
inline InputState parse_state(const std::string &flag, const std::string &text,
                              Rng &rng, std::ostream &err) {
    if (text == "random") {
        return random_input_state(rng);
    }
    if (text == "zero") {
        return {1.0, 0.0};
    }
    if (text == "one") {
        return {0.0, 1.0};
    }
    if (text == "plus") {
        return {kInvSqrt2, kInvSqrt2};
    }
    std::vector<Amplitude> c;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        const auto comma = pair.find(',');
        try {
            if (comma == std::string::npos) {
                throw std::invalid_argument("missing comma");
            }
            std::size_t used_re = 0;
            std::size_t used_im = 0;
            const std::string re_s = pair.substr(0, comma);
            const std::string im_s = pair.substr(comma + 1);
            const double re = std::stod(re_s, &used_re);
            const double im = std::stod(im_s, &used_im);
            if (used_re != re_s.size() || used_im != im_s.size()) {
                throw std::invalid_argument("trailing characters");
            }
            c.emplace_back(re, im);
        } catch (const std::exception &) {
            throw Error(flag + ": cannot parse amplitude '" + pair +
                        "' (expected re,im)");
        }
    }
    if (c.size() != 2) {
        throw Error(flag + ": expected two amplitudes 're,im;re,im'");
    }
    const double n2 = std::norm(c[0]) + std::norm(c[1]);
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kIngestTol) {
        throw Error(flag + ": state is not normalized (|c0|^2+|c1|^2 = " +
                    std::to_string(n2) + ")");
    }
    if (std::abs(n2 - 1.0) > kNormTol) {
        err << "warning: " << flag << ": renormalized state (norm^2 was " << n2
            << ")\n";
    }
    const double s = 1.0 / std::sqrt(n2);
    return {c[0] * s, c[1] * s};
}

inline BranchSelector parse_branch(const std::string &text) {
    if (text.size() == 5) {
        BranchSelector s;
        for (int k = 0; k < 5; ++k) {
            const char ch = text[static_cast<std::size_t>(k)];
            const bool z = k < 2;
            if (z && (ch == '0' || ch == '1')) {
                s.bits[k] = ch - '0';
            } else if (!z && (ch == '+' || ch == '-')) {
                s.bits[k] = ch == '-' ? 1 : 0;
            } else {
                throw Error("--branch: expected an index 0-31 or a selector like 01+-+");
            }
        }
        return s;
    }
    try {
        std::size_t used = 0;
        const int idx = std::stoi(text, &used);
        if (used == text.size()) {
            return BranchSelector::from_index(idx);
        }
    } catch (const std::exception &) {
    }
    throw Error("--branch: expected an index 0-31 or a selector like 01+-+");
}

inline std::string state_str(const InputState &s) {
    std::ostringstream o;
    o << "(" << fixed10(s.c0.real()) << "," << fixed10(s.c0.imag()) << ";"
      << fixed10(s.c1.real()) << "," << fixed10(s.c1.imag()) << ")";
    return o.str();
}

inline nlohmann::ordered_json state_json(const InputState &s) {
    return {{s.c0.real(), s.c0.imag()}, {s.c1.real(), s.c1.imag()}};
}

inline bool recovered(double f_alice, double f_bob) {
    return f_alice >= 1.0 - kFidelityTol && f_bob >= 1.0 - kFidelityTol;
}

struct Options {
    std::string code{"01"};
    std::string alice{"random"};
    std::string bob{"random"};
    std::string mode{"sample"};
    std::string branch{"0"};
    int trials{1};
    std::uint64_t seed{0};
    std::string format{"text"};
    bool withhold{false};
    int seeds{10};
    int ghz_n{1};
    int ghz_m{1};
    std::string transcript_path;
};

inline RunMode make_mode(const Options &o, Rng &rng) {
    if (o.mode == "enumerate") {
        return EnumerateBranch{parse_branch(o.branch)};
    }
    return SampleSeed{rng.next_u64()};
}

inline int cmd_run(const Options &o, std::ostream &out, std::ostream &err) {
    const ChannelCode code = ChannelCode::parse(o.code);
    Rng rng(o.seed);
    bool ok = true;
    for (int t = 0; t < o.trials; ++t) {
        const InputState a = parse_state("--alice", o.alice, rng, err);
        const InputState b = parse_state("--bob", o.bob, rng, err);
        const RunMode mode = make_mode(o, rng);
        if (o.withhold) {
            const ControlReport r = run_bqct_withheld(code, a, b, mode);
            if (o.format == "records") {
                for (const auto &e : r.transcript.events()) {
                    auto j = to_json(e);
                    j["trial"] = t;
                    out << j.dump() << '\n';
                }
                nlohmann::ordered_json j{{"kind", "withheld"},
                                         {"trial", t},
                                         {"code", code.str()},
                                         {"purity_b0", r.purity_b0},
                                         {"purity_a1", r.purity_a1}};
                out << j.dump() << '\n';
            } else {
                out << "trial " << t << " code " << code.str()
                    << " withheld purity_b0=" << fixed10(r.purity_b0)
                    << " purity_a1=" << fixed10(r.purity_a1) << '\n';
            }
            continue;
        }
        const ProtocolResult r = run_bqct(code, a, b, mode);
        const bool pass = r.reachable && recovered(r.fidelity_alice, r.fidelity_bob);
        ok = ok && pass;
        if (o.format == "records") {
            for (const auto &e : r.transcript.events()) {
                auto j = to_json(e);
                j["trial"] = t;
                out << j.dump() << '\n';
            }
            nlohmann::ordered_json j{{"kind", "result"},
                                     {"trial", t},
                                     {"code", code.str()},
                                     {"branch", r.branch.str()},
                                     {"probability", r.probability},
                                     {"alice_in", state_json(a)},
                                     {"bob_in", state_json(b)},
                                     {"alice_recovered", state_json(r.alice_recovered)},
                                     {"bob_recovered", state_json(r.bob_recovered)},
                                     {"fidelity_alice", r.fidelity_alice},
                                     {"fidelity_bob", r.fidelity_bob},
                                     {"pass", pass}};
            out << j.dump() << '\n';
        } else {
            out << "trial " << t << " code " << code.str() << " branch "
                << r.branch.str() << " p=" << fixed10(r.probability)
                << " F_alice=" << fixed10(r.fidelity_alice)
                << " F_bob=" << fixed10(r.fidelity_bob) << ' '
                << (pass ? "PASS" : "FAIL") << '\n';
        }
    }
    if (o.format == "text" && !o.withhold) {
        out << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? 0 : 1;
}

inline int cmd_enumerate(const Options &o, std::ostream &out, std::ostream &err) {
    const ChannelCode code = ChannelCode::parse(o.code);
    Rng rng(o.seed);
    const InputState a = parse_state("--alice", o.alice, rng, err);
    const InputState b = parse_state("--bob", o.bob, rng, err);
    const auto branches = enumerate_branches(code, a, b);
    double total = 0.0;
    double min_f = 1.0;
    bool ok = true;
    for (const auto &r : branches) {
        total += r.probability;
        const double f = std::min(r.fidelity_alice, r.fidelity_bob);
        min_f = std::min(min_f, f);
        const bool pass = r.reachable && recovered(r.fidelity_alice, r.fidelity_bob);
        ok = ok && pass;
        if (o.format == "records") {
            nlohmann::ordered_json j{{"kind", "branch"},
                                     {"code", code.str()},
                                     {"branch", r.branch.str()},
                                     {"index", r.branch.index()},
                                     {"probability", r.probability},
                                     {"fidelity_alice", r.fidelity_alice},
                                     {"fidelity_bob", r.fidelity_bob},
                                     {"pass", pass}};
            out << j.dump() << '\n';
        } else {
            out << "branch " << r.branch.str() << " p=" << fixed10(r.probability)
                << " F_alice=" << fixed10(r.fidelity_alice)
                << " F_bob=" << fixed10(r.fidelity_bob) << '\n';
        }
    }
    ok = ok && std::abs(total - 1.0) <= kFidelityTol;
    if (o.format == "records") {
        nlohmann::ordered_json j{{"kind", "summary"},
                                 {"branches", branches.size()},
                                 {"total_probability", total},
                                 {"min_fidelity", min_f},
                                 {"pass", ok}};
        out << j.dump() << '\n';
    } else {
        out << "branches=" << branches.size() << " sum_p=" << fixed10(total)
            << " min_F=" << fixed10(min_f) << ' ' << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? 0 : 1;
}

inline int cmd_verify(const Options &o, std::ostream &out, std::ostream &) {
    if (o.seeds < 1) {
        throw Error("--seeds must be positive");
    }
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < o.seeds; ++k) {
        seeds.push_back(o.seed + static_cast<std::uint64_t>(k));
    }
    const CollapseReport rep = verify_collapse_tables(seeds);
    bool ok = rep.all_passed();
    for (const auto &row : rep.rows) {
        if (o.format == "records") {
            nlohmann::ordered_json j{{"kind", "collapse_row"},
                                     {"basis", row.table},
                                     {"key", row.key},
                                     {"max_deviation", row.max_distance},
                                     {"pass", row.passed}};
            if (row.uncorrected_distance) {
                j["uncorrected_deviation"] = *row.uncorrected_distance;
            }
            out << j.dump() << '\n';
        } else {
            out << (row.table == "Z" ? "collapse-z " : "collapse-x ") << row.key
                << " max_dev=" << row.max_distance << ' '
                << (row.passed ? "PASS" : "FAIL");
            if (!row.passed && row.uncorrected_distance &&
                *row.uncorrected_distance <= kFidelityTol) {
                out << " (row matches the branch without X corrections)";
            }
            out << '\n';
        }
    }
    for (const auto &code : kAllChannelCodes) {
        const double d = channel_reference_deviation(code);
        const bool pass = d <= kNormTol;
        ok = ok && pass;
        if (o.format == "records") {
            nlohmann::ordered_json j{{"kind", "channel_row"},
                                     {"code", code.str()},
                                     {"max_deviation", d},
                                     {"pass", pass}};
            out << j.dump() << '\n';
        } else {
            out << "channel " << code.str() << " max_dev=" << d << ' '
                << (pass ? "PASS" : "FAIL") << '\n';
        }
    }
    if (o.format == "text") {
        out << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? 0 : 1;
}

inline int cmd_ghz(const Options &o, std::ostream &out, std::ostream &) {
    const ChannelCode code = ChannelCode::parse(o.code);
    Rng rng(o.seed);
    const InputState da = random_input_state(rng);
    const InputState db = random_input_state(rng);
    const RunMode mode = make_mode(o, rng);
    const GhzRunResult r = run_bqct_ghz(code, {da.c0, da.c1, o.ghz_n},
                                        {db.c0, db.c1, o.ghz_m}, mode);
    const bool ok = recovered(r.fidelity_alice, r.fidelity_bob);
    if (o.format == "records") {
        for (const auto &e : r.transcript.events()) {
            out << to_json(e).dump() << '\n';
        }
        nlohmann::ordered_json j{{"kind", "ghz_result"},
                                 {"code", code.str()},
                                 {"n", o.ghz_n},
                                 {"m", o.ghz_m},
                                 {"branch", r.base.branch.str()},
                                 {"fidelity_alice", r.fidelity_alice},
                                 {"fidelity_bob", r.fidelity_bob},
                                 {"pass", ok}};
        out << j.dump() << '\n';
    } else {
        out << "ghz code " << code.str() << " n=" << o.ghz_n << " m=" << o.ghz_m
            << " branch " << r.base.branch.str()
            << " F_alice=" << fixed10(r.fidelity_alice)
            << " F_bob=" << fixed10(r.fidelity_bob) << ' ' << (ok ? "PASS" : "FAIL")
            << '\n';
    }
    return ok ? 0 : 1;
}

inline int cmd_metrics(const Options &o, std::ostream &out, std::ostream &) {
    Transcript t;
    if (!o.transcript_path.empty()) {
        std::ifstream in(o.transcript_path);
        if (!in) {
            throw Error("--transcript: cannot open '" + o.transcript_path + "'");
        }
        t = Transcript::from_jsonl(in);
    } else {
        Rng rng(o.seed);
        const InputState a = random_input_state(rng);
        const InputState b = random_input_state(rng);
        t = run_bqct(ChannelCode::parse(o.code), a, b, SampleSeed{rng.next_u64()})
                .transcript;
    }
    auto rows = literature_rows();
    rows.push_back(comparison_row(t));
    out << (o.format == "records" ? render_records(rows) : render_text(rows));
    return 0;
}

/// Runs one invocation. args excludes the program name.
inline int execute(const std::vector<std::string> &args, std::ostream &out,
                   std::ostream &err) {
    CLI::App app{"Bidirectional controlled teleportation simulator", "bqct"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App *sub) {
        sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"text", "records"}))
            ->capture_default_str();
    };
    auto add_code = [&o](CLI::App *sub) {
        sub->add_option("--code", o.code, "Channel code (two bits, a0 then b1)")
            ->capture_default_str();
    };
    auto add_states = [&o](CLI::App *sub) {
        sub->add_option("--alice", o.alice,
                        "Alice's input: random|zero|one|plus or 're,im;re,im'")
            ->capture_default_str();
        sub->add_option("--bob", o.bob, "Bob's input, same syntax")
            ->capture_default_str();
    };
    auto add_mode = [&o](CLI::App *sub) {
        sub->add_option("--mode", o.mode, "enumerate or sample")
            ->check(CLI::IsMember({"enumerate", "sample"}))
            ->capture_default_str();
        sub->add_option("--branch", o.branch,
                        "Outcome selector for enumerate mode (0-31 or e.g. 01+-+)")
            ->capture_default_str();
    };

    auto *run = app.add_subcommand("run", "Run the protocol");
    add_common(run);
    add_code(run);
    add_states(run);
    add_mode(run);
    run->add_option("--trials", o.trials, "Number of runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_flag("--withhold", o.withhold,
                  "Charlie withholds his measurement; stop after step 6");

    auto *en = app.add_subcommand("enumerate", "Run all 32 measurement branches");
    add_common(en);
    add_code(en);
    add_states(en);

    auto *ver = app.add_subcommand("verify-tables",
                                   "Check collapse and channel tables against simulation");
    add_common(ver);
    ver->add_option("--seeds", o.seeds, "Number of random input pairs")
        ->capture_default_str();

    auto *ghz = app.add_subcommand("ghz", "Teleport GHZ-class states");
    add_common(ghz);
    add_code(ghz);
    add_mode(ghz);
    ghz->add_option("--ghz-n", o.ghz_n, "Qubits in Alice's GHZ state")
        ->check(CLI::Range(1, kMaxGhzRunQubits))
        ->capture_default_str();
    ghz->add_option("--ghz-m", o.ghz_m, "Qubits in Bob's GHZ state")
        ->check(CLI::Range(1, kMaxGhzRunQubits))
        ->capture_default_str();

    auto *met = app.add_subcommand("metrics", "Print the resource comparison table");
    add_common(met);
    add_code(met);
    met->add_option("--transcript", o.transcript_path,
                    "Read a JSONL transcript instead of running live");

    std::vector<const char *> argv{"bqct"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (run->parsed()) {
            return cmd_run(o, out, err);
        }
        if (en->parsed()) {
            return cmd_enumerate(o, out, err);
        }
        if (ver->parsed()) {
            return cmd_verify(o, out, err);
        }
        if (ghz->parsed()) {
            return cmd_ghz(o, out, err);
        }
        return cmd_metrics(o, out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace bqct::cli
