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

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ulamlab/ulamlab.hpp"

namespace {

ulamlab::GenSpec load_genspec(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return ulamlab::genspec_from_json(ulamlab::Json::parse(text));
    } catch (const ulamlab::Json::exception& e) {
      throw ulamlab::ConfigError("genspec", e.what());
    }
  }
  return ulamlab::genspec_from_json(ulamlab::read_json_file(text));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ulamlab: stability experiments for approximate group representations"};
  app.require_subcommand(1);

  struct Flags {
    std::string group = "cyclic:2";
    std::string genspec;
    double theta = -1.0;
    std::size_t dim = 0;
    double tol = ulamlab::kDefaultTol;
    std::size_t max_iter = ulamlab::kDefaultMaxIter;
    std::string norm = "operator";
    std::string seeds = "0..0";
    std::size_t workers = 1;
    std::string out = "-";
    bool ndjson = false;
    double theta_max = 0.03;
    std::size_t theta_steps = 7;
  } f;

  const char* commands[][2] = {
      {"gen", "Build instances and print them with their defects"},
      {"defects", "Measure defects of the generated maps"},
      {"stabilize", "Run the averaging/repair loop to an exact representation"},
      {"dixmier", "Unitarize similarity-twisted representations"},
      {"verify", "Run every inequality suite over the seed range"},
      {"sweep", "Stabilize perturbed instances over a grid of theta"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--group", f.group, "Group spec, e.g. cyclic:12, symmetric:4, freeball:2:3");
    sub->add_option("--genspec", f.genspec, "Instance recipe as inline JSON or a file path");
    sub->add_option("--theta", f.theta, "Perturbation size in [0, 1]");
    sub->add_option("--dim", f.dim, "Representation dimension (default: regular representation)");
    sub->add_option("--tol", f.tol, "Convergence tolerance")->capture_default_str();
    sub->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
    sub->add_option("--norm", f.norm, "operator | schatten:P[:normalized] | kyfan:K")
        ->capture_default_str();
    sub->add_option("--seeds", f.seeds, "Seed range A..B (inclusive)")->capture_default_str();
    sub->add_option("--workers", f.workers, "Worker threads across seeds")->capture_default_str();
    sub->add_option("--out", f.out, "Output path, '-' for stdout")->capture_default_str();
    sub->add_flag("--ndjson", f.ndjson, "Line-delimited output");
    if (std::string(name) == "sweep") {
      sub->add_option("--theta-max", f.theta_max, "Largest theta on the grid")->capture_default_str();
      sub->add_option("--theta-steps", f.theta_steps, "Grid points")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ulamlab::ExperimentConfig c;
    c.command = ulamlab::parse_command(app.get_subcommands().front()->get_name());
    c.group = f.group;
    if (!f.genspec.empty()) c.genspec = load_genspec(f.genspec);
    if (f.theta >= 0.0) c.theta = f.theta;
    else if (f.theta != -1.0) throw ulamlab::ConfigError("theta", "must lie in [0, 1]");
    if (f.dim > 0) c.dim = f.dim;
    c.tol = f.tol;
    c.max_iter = f.max_iter;
    try {
      c.norm = ulamlab::NormKind::parse(f.norm);
    } catch (const ulamlab::Error& e) {
      throw ulamlab::ConfigError("norm", e.what());
    }
    std::tie(c.seed_first, c.seed_last) = ulamlab::parse_seed_range(f.seeds);
    c.workers = f.workers;
    c.output = f.out;
    c.ndjson = f.ndjson;
    c.salt = ulamlab::salt_from_env();
    c.theta_max = f.theta_max;
    c.theta_steps = f.theta_steps;

    const ulamlab::Report report = ulamlab::run(c);
    ulamlab::report_write(report, c.output, c.ndjson);
    return report.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "ulamlab: " << e.what() << "\n";
    return ulamlab::error_exit_code(e);
  }
}
