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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using bqct::cli::execute;

namespace {

struct Invocation {
    int status;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = execute(args, out, err);
    return {status, out.str(), err.str()};
}

int count_lines(const std::string &s, const std::string &prefix) {
    std::istringstream in(s);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        n += line.rfind(prefix, 0) == 0;
    }
    return n;
}

} // namespace

TEST(Cli, enumerate_prints_all_branches) {
    const auto r = invoke({"enumerate", "--code", "01", "--seed", "7"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(count_lines(r.out, "branch "), 32);
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("branch ", 0) == 0) {
            EXPECT_NE(line.find("F_alice=1.0000000000 F_bob=1.0000000000"),
                      std::string::npos)
                << line;
        }
    }
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, run_with_explicit_states_and_records) {
    const auto r = invoke({"run", "--code", "11", "--alice", "0.6,0;0,0.8", "--bob",
                           "plus", "--format", "records", "--seed", "3"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find(R"("kind":"result")"), std::string::npos);
    EXPECT_NE(r.out.find(R"("pass":true)"), std::string::npos);
}

TEST(Cli, records_are_byte_identical_for_the_same_seed) {
    const std::vector<std::string> args{"run", "--trials", "5", "--seed", "77",
                                        "--format", "records"};
    EXPECT_EQ(invoke(args).out, invoke(args).out);
    const auto other = invoke({"run", "--trials", "5", "--seed", "78", "--format",
                               "records"});
    EXPECT_NE(invoke(args).out, other.out);
}

TEST(Cli, enumerate_mode_with_selector) {
    const auto r = invoke({"run", "--mode", "enumerate", "--branch", "10-+-"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("branch 10-+-"), std::string::npos);
}

TEST(Cli, renormalizes_slightly_off_states_with_warning) {
    const auto r = invoke({"run", "--alice", "0.6000001,0;0.8,0"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.err.find("warning: --alice"), std::string::npos);
}

TEST(Cli, invalid_state_names_the_flag) {
    auto r = invoke({"run", "--bob", "1,0;1,0"});
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("--bob"), std::string::npos);
    r = invoke({"run", "--alice", "abc"});
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("--alice"), std::string::npos);
}

TEST(Cli, unknown_subcommand_or_flag_fails) {
    EXPECT_NE(invoke({"teleport"}).status, 0);
    EXPECT_NE(invoke({"run", "--bogus"}).status, 0);
    EXPECT_NE(invoke({}).status, 0);
    EXPECT_NE(invoke({"run", "--code", "2"}).status, 0);
}

TEST(Cli, withhold_reports_purities) {
    const auto r = invoke({"run", "--code", "01", "--withhold", "--seed", "4"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("purity_a1="), std::string::npos);
}

TEST(Cli, ghz_subcommand) {
    const auto r = invoke({"ghz", "--ghz-n", "3", "--ghz-m", "2", "--seed", "5"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("n=3 m=2"), std::string::npos);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    EXPECT_NE(invoke({"ghz", "--ghz-n", "9"}).status, 0);
}

TEST(Cli, metrics_row) {
    const auto r = invoke({"metrics"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(std::regex_search(
        r.out, std::regex("Our method +BCQT +1 +1 +Five-qubits +2/5 +0 +5 +1/4")))
        << r.out;
}

TEST(Cli, metrics_from_transcript_file) {
    const auto run = invoke({"run", "--format", "records", "--seed", "9"});
    ASSERT_EQ(run.status, 0);
    // Keep only the transcript events, dropping the trial tag and result.
    std::istringstream in(run.out);
    std::string line;
    std::string events;
    while (std::getline(in, line)) {
        if (line.find(R"("kind":"result")") != std::string::npos) {
            continue;
        }
        auto j = nlohmann::ordered_json::parse(line);
        j.erase("trial");
        events += j.dump() + "\n";
    }
    const auto path = std::filesystem::temp_directory_path() / "bqct_cli_transcript.jsonl";
    std::ofstream(path) << events;
    const auto r = invoke({"metrics", "--transcript", path.string(), "--format",
                           "records"});
    std::filesystem::remove(path);
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find(R"("method":"Our method")"), std::string::npos);
    EXPECT_NE(r.out.find(R"("efficiency":"2/5")"), std::string::npos);
}

TEST(Cli, verify_tables_reports_every_row) {
    const auto r = invoke({"verify-tables"});
    EXPECT_EQ(count_lines(r.out, "collapse-z "), 4);
    EXPECT_EQ(count_lines(r.out, "collapse-x "), 4);
    EXPECT_EQ(count_lines(r.out, "channel "), 4);
    // Three published X-collapse rows disagree with the corrected state.
    EXPECT_EQ(r.status, 1);
}
