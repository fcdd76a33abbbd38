// Copyright 2026 The UlamLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ulamlab/experiment.hpp"

namespace ulamlab {
namespace {

namespace fs = std::filesystem;

ExperimentConfig config(Command cmd, const std::string& group) {
  ExperimentConfig c;
  c.command = cmd;
  c.group = group;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("ulamlab_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Run, VerifyScalarZ2) {
  ExperimentConfig c = config(Command::kVerify, "cyclic:2");
  c.dim = 1;
  c.seed_last = 99;
  const Report r = run(c);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exit_code(), 0);
  const Json& suites = r.results.at("suites");
  EXPECT_EQ(suites.size(), detail::kSuiteCount);
  for (const auto& [name, s] : suites.items()) {
    EXPECT_EQ(s.at("trials"), 100) << name;
    EXPECT_EQ(s.at("passed"), 100) << name;
  }
  EXPECT_TRUE(suites.at("kazhdan").at("worst_margin").is_number());
  EXPECT_GE(suites.at("kazhdan").at("worst_margin").get<double>(), 0.0);
}

TEST(Run, StabilizeS4Regular) {
  ExperimentConfig c = config(Command::kStabilize, "symmetric:4");
  c.theta = 0.02;
  const Report r = run(c);
  ASSERT_TRUE(r.pass);
  const Json& item = r.results.at("items").at(0);
  EXPECT_EQ(item.at("status"), "converged");
  const Json& t = item.at("trace");
  EXPECT_LE(t.at("total_distance").get<double>(), 2.0 * t.at("epsilon0").get<double>());
  EXPECT_LE(t.at("final_defect").get<double>(), 1e-12);
}

TEST(Run, GenAtZeroAngleHasNoDefect) {
  ExperimentConfig c = config(Command::kGen, "dihedral:3");
  c.theta = 0.0;
  const Report r = run(c);
  const Json& d = r.results.at("items").at(0).at("defects");
  EXPECT_EQ(d.at("epsilon").get<double>(), 0.0);
  EXPECT_EQ(d.at("delta").get<double>(), 0.0);
  EXPECT_EQ(r.results.at("items").at(0).at("map").at("values").size(), 6u);
}

TEST(Run, DixmierDefaultTwist) {
  ExperimentConfig c = config(Command::kDixmier, "dihedral:4");
  c.seed_last = 4;
  const Report r = run(c);
  EXPECT_TRUE(r.pass);
  for (const Json& it : r.results.at("items")) EXPECT_LE(it.at("cond").get<double>(), 2.0 + 1e-12);
}

TEST(Run, SweepGrid) {
  ExperimentConfig c = config(Command::kSweep, "cyclic:6");
  c.seed_last = 1;
  c.theta_steps = 3;
  const Report r = run(c);
  EXPECT_TRUE(r.pass);
  const Json& items = r.results.at("items");
  ASSERT_EQ(items.size(), 6u);
  EXPECT_EQ(items[0].at("theta"), 0.0);
  EXPECT_DOUBLE_EQ(items[5].at("theta").get<double>(), 0.03);
}

TEST(Run, CertifiedDivergenceFailsWithCodeFour) {
  ExperimentConfig c = config(Command::kStabilize, "cyclic:6");
  c.theta = 0.02;
  c.max_iter = 1;
  const Report r = run(c);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.results.at("items").at(0).at("status"), "diverged");
  EXPECT_EQ(r.exit_code(), 4);
}

TEST(Run, ConfigValidation) {
  auto field_of = [](ExperimentConfig c) {
    try {
      run(c);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  ExperimentConfig c = config(Command::kStabilize, "cyclic:2");
  c.tol = 0.0;
  EXPECT_EQ(field_of(c), "tol");
  c = config(Command::kStabilize, "cyclic:2");
  c.max_iter = 0;
  EXPECT_EQ(field_of(c), "max_iter");
  c = config(Command::kStabilize, "cyclic:2");
  c.workers = 0;
  EXPECT_EQ(field_of(c), "workers");
  c = config(Command::kStabilize, "cyclic:2");
  c.seed_first = 3;
  EXPECT_EQ(field_of(c), "seeds");
  EXPECT_EQ(field_of(config(Command::kStabilize, "wat:3")), "group");
  EXPECT_THROW(parse_seed_range("5..x"), ConfigError);
  EXPECT_EQ(parse_seed_range("4..9"), (std::pair<std::uint64_t, std::uint64_t>{4, 9}));
  EXPECT_EQ(parse_seed_range("12"), (std::pair<std::uint64_t, std::uint64_t>{12, 12}));
}

TEST(Run, ResultsIgnoreWorkerCount) {
  ExperimentConfig c = config(Command::kStabilize, "dihedral:4");
  c.seed_last = 7;
  const Report one = run(c);
  c.workers = 3;
  const Report three = run(c);
  EXPECT_EQ(one.results, three.results);
  EXPECT_EQ(run(c).results, three.results);
}

TEST(Run, SaltRotatesCorpus) {
  ExperimentConfig c = config(Command::kGen, "cyclic:4");
  const Json plain = run(c).results;
  c.salt = 17;
  const Json salted = run(c).results;
  EXPECT_NE(plain, salted);
  EXPECT_EQ(run(c).results, salted);
}

TEST(ReportWrite, RoundTripAndSchema) {
  ExperimentConfig c = config(Command::kDefects, "cyclic:3");
  c.seed_last = 2;
  const Report r = run(c);
  const fs::path p = temp_file("report.json");
  report_write(r, p.string(), false);
  const Json back = Json::parse(slurp(p));
  EXPECT_EQ(back, r.to_json());
  EXPECT_EQ(back.at("schema_version"), kReportSchema);
  report_write(r, p.string(), false);
  EXPECT_EQ(slurp(p), report_text(r, false));
  fs::remove(p);
  EXPECT_THROW(report_write(r, "/nonexistent-dir/x.json", false), Error);
}

TEST(ReportWrite, NdjsonHasOneLinePerIteration) {
  ExperimentConfig c = config(Command::kStabilize, "cyclic:5");
  c.seed_last = 2;
  const Report r = run(c);
  std::size_t iterations = 0;
  for (const Json& it : r.results.at("items")) iterations += it.at("trace").at("iterations").size();
  std::istringstream lines(report_ndjson(r));
  std::string line;
  std::size_t n = 0, iter_lines = 0;
  while (std::getline(lines, line)) {
    const Json j = Json::parse(line);
    if (n == 0) {
      EXPECT_EQ(j.at("type"), "header");
      EXPECT_EQ(j.at("schema_version"), kReportSchema);
      EXPECT_FALSE(j.at("results").contains("items"));
    } else {
      EXPECT_EQ(j.at("type"), "iteration");
      EXPECT_TRUE(j.contains("epsilon_n"));
      ++iter_lines;
    }
    ++n;
  }
  EXPECT_EQ(iter_lines, iterations);
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(ULAMLAB_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodes) {
  const fs::path out = temp_file("cli.txt");
  EXPECT_EQ(run_cli("stabilize --group cyclic:4 --theta 0.02", out), 0);
  EXPECT_EQ(Json::parse(slurp(out)).at("exit_code"), 0);
  EXPECT_EQ(run_cli("stabilize --group nope:4", out), 2);
  EXPECT_NE(slurp(out).find("group"), std::string::npos);
  EXPECT_EQ(run_cli("stabilize --tol -1", out), 2);
  EXPECT_EQ(run_cli("stabilize --seeds 3..1", out), 2);
  EXPECT_EQ(run_cli("verify --genspec '{\"kind\": \"bogus\"}'", out), 2);
  EXPECT_EQ(run_cli("frobnicate", out), 2);
  EXPECT_EQ(run_cli("stabilize --group freeball:2:3", out), 3);
  EXPECT_EQ(run_cli("stabilize --group cyclic:6 --theta 0.02 --max-iter 1", out), 4);
  fs::remove(out);
}

TEST(Binary, OutputFileNdjsonAndGenspecFile) {
  const fs::path out = temp_file("cli.ndjson");
  const fs::path log = temp_file("cli.log");
  const std::string genspec = std::string(ULAMLAB_SAMPLES_DIR) + "/twisted_rep.json";
  EXPECT_EQ(run_cli("dixmier --group table:" + std::string(ULAMLAB_SAMPLES_DIR) + "/s3_table.json --genspec " +
                        genspec + " --seeds 0..2 --ndjson --out " + out.string(),
                    log),
            0);
  std::istringstream lines(slurp(out));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const Json j = Json::parse(line);
    EXPECT_EQ(j.at("type"), n == 0 ? "header" : "item");
    ++n;
  }
  EXPECT_EQ(n, 4u);
  fs::remove(out);
  fs::remove(log);
}

TEST(Binary, SaltFromEnvironment) {
  const fs::path a = temp_file("salt_a.json"), b = temp_file("salt_b.json");
  ASSERT_EQ(run_cli("gen --group cyclic:3 --out " + a.string(), temp_file("log")), 0);
  ASSERT_EQ(run_cli("gen --group cyclic:3 --out " + b.string(), temp_file("log")), 0);
  EXPECT_EQ(Json::parse(slurp(a)).at("results"), Json::parse(slurp(b)).at("results"));
  ::setenv("ULAMLAB_SEED_SALT", "rotation-1", 1);
  ASSERT_EQ(run_cli("gen --group cyclic:3 --out " + b.string(), temp_file("log")), 0);
  ::unsetenv("ULAMLAB_SEED_SALT");
  EXPECT_NE(Json::parse(slurp(a)).at("results"), Json::parse(slurp(b)).at("results"));
  fs::remove(a);
  fs::remove(b);
  fs::remove(temp_file("log"));
}

}  // namespace
}  // namespace ulamlab
