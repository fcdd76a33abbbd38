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

#pragma once

// Batch runner behind the command-line tool. A config names a command, a
// group, an instance recipe and a seed range; run() expands the recipe once
// per seed, evaluates the command on every instance and folds the outcomes
// into a Report whose `pass` field is the conjunction of all asserted bounds.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ulamlab/genspec.hpp"
#include "ulamlab/meanforms.hpp"
#include "ulamlab/serialize.hpp"
#include "ulamlab/stabilize.hpp"

namespace ulamlab {

inline constexpr const char* kReportSchema = "ulamlab.report/1";

/// Invalid configuration; names the offending field.
class ConfigError : public ParameterError {
 public:
  ConfigError(std::string field, const std::string& msg)
      : ParameterError("config." + field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Command { kGen, kDefects, kStabilize, kDixmier, kVerify, kSweep };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::kGen: return "gen";
    case Command::kDefects: return "defects";
    case Command::kStabilize: return "stabilize";
    case Command::kDixmier: return "dixmier";
    case Command::kVerify: return "verify";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

inline Command parse_command(const std::string& s) {
  for (Command c : {Command::kGen, Command::kDefects, Command::kStabilize, Command::kDixmier,
                    Command::kVerify, Command::kSweep})
    if (s == command_name(c)) return c;
  throw ConfigError("command", "unknown command '" + s + "'");
}

struct ExperimentConfig {
  Command command = Command::kStabilize;
  std::string group = "cyclic:2";
  std::optional<GenSpec> genspec;
  std::optional<double> theta;
  std::optional<std::size_t> dim;
  double tol = kDefaultTol;
  std::size_t max_iter = kDefaultMaxIter;
  NormKind norm = NormKind::op();
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 0;
  std::size_t workers = 1;
  std::string output;
  bool ndjson = false;
  std::optional<std::uint64_t> salt;
  // sweep grid: theta_steps points spaced evenly over [0, theta_max]
  double theta_max = 0.03;
  std::size_t theta_steps = 7;

  void validate() const {
    if (!(tol > 0.0)) throw ConfigError("tol", "must be > 0");
    if (max_iter < 1) throw ConfigError("max_iter", "must be >= 1");
    if (workers < 1) throw ConfigError("workers", "must be >= 1");
    if (seed_last < seed_first) throw ConfigError("seeds", "range A..B needs A <= B");
    if (theta && !(*theta >= 0.0 && *theta <= 1.0)) throw ConfigError("theta", "must lie in [0, 1]");
    if (dim && *dim < 1) throw ConfigError("dim", "must be >= 1");
    if (!(theta_max >= 0.0 && theta_max <= 1.0)) throw ConfigError("theta_max", "must lie in [0, 1]");
    if (theta_steps < 1) throw ConfigError("theta_steps", "must be >= 1");
  }
};

/// "A..B" (inclusive) or a single seed "A".
inline std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  auto num = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19)
      throw ConfigError("seeds", "expected A..B with non-negative integers, got '" + text + "'");
    return std::stoull(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = num(text);
    return {v, v};
  }
  return {num(text.substr(0, dots)), num(text.substr(dots + 2))};
}

/// ULAMLAB_SEED_SALT, if set and non-empty.
inline std::optional<std::uint64_t> salt_from_env() {
  const char* v = std::getenv("ULAMLAB_SEED_SALT");
  if (!v || !*v) return std::nullopt;
  const std::string s(v);
  if (s.find_first_not_of("0123456789") == std::string::npos && s.size() <= 19)
    return std::stoull(s);
  // Non-numeric salts are hashed byte by byte.
  std::uint64_t h = 0;
  for (unsigned char c : s) h = mix64(h ^ c);
  return h;
}

struct Report {
  Json config;
  Json results;
  Json timings;
  bool pass = true;
  bool diverged_certified = false;

  int exit_code() const {
    if (pass) return 0;
    return diverged_certified ? 4 : 1;
  }

  Json to_json() const {
    return Json{{"schema_version", kReportSchema},
                {"config", config},
                {"results", results},
                {"timings", timings},
                {"pass", pass},
                {"exit_code", exit_code()}};
  }
};

inline Json config_to_json(const ExperimentConfig& c) {
  Json j{{"command", command_name(c.command)},
         {"group", c.group},
         {"genspec", c.genspec ? to_json(*c.genspec) : Json(nullptr)},
         {"theta", c.theta ? Json(*c.theta) : Json(nullptr)},
         {"dim", c.dim ? Json(*c.dim) : Json(nullptr)},
         {"tol", c.tol},
         {"max_iter", c.max_iter},
         {"norm", c.norm.to_string()},
         {"seeds", std::to_string(c.seed_first) + ".." + std::to_string(c.seed_last)},
         {"workers", c.workers},
         {"ndjson", c.ndjson},
         {"salt", c.salt ? Json(*c.salt) : Json(nullptr)},
         {"rng", std::string(kRngName)}};
  if (c.command == Command::kSweep) {
    j["theta_max"] = c.theta_max;
    j["theta_steps"] = c.theta_steps;
  }
  j["defaults"] = Json{{"hermitian_tol", kHermitianTol},
                       {"psd_tol", kPsdTol},
                       {"polar_sigma_min_tol", kPolarSigmaMinTol},
                       {"pd_accept_tol", kPdAcceptTol},
                       {"gram_hermitian_tol", kGramHermitianTol},
                       {"bound_slack", kBoundSlack},
                       {"margin_slack", kMarginSlack},
                       {"form_precondition_tol", kFormPreconditionTol},
                       {"certified_epsilon", kCertifiedEpsilon},
                       {"kazhdan_unitary_tol", kKazhdanUnitaryTol}};
  return j;
}

namespace detail {

inline constexpr double kDefaultTheta = 0.02;
inline constexpr double kDefaultTwistBound = 2.0;

/// Exact unitary base: the regular representation, or a seeded
/// representation of the requested dimension.
inline GenSpec base_recipe(const ExperimentConfig& c) {
  if (!c.dim) return GenSpec::regular();
  GenSpec s;
  s.kind = GenSpec::Kind::kRep;
  s.dim = *c.dim;
  return s;
}

inline GenSpec effective_recipe(const ExperimentConfig& c) {
  if (c.genspec) return *c.genspec;
  if (c.command == Command::kDixmier) return GenSpec::twisted(base_recipe(c), kDefaultTwistBound);
  return GenSpec::perturbed(base_recipe(c), c.theta.value_or(kDefaultTheta));
}

/// Runs f(i) for i in [0, n) on `workers` threads; results land by index so
/// the output order never depends on scheduling. The first exception (by
/// index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t workers, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t k = std::min(workers, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < k; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> flat;
  flat.reserve(n);
  for (auto& o : out) flat.push_back(std::move(*o));
  return flat;
}

struct Outcome {
  Json payload;
  bool pass = true;
  bool diverged_certified = false;
};

inline Json stabilize_entry(const GroupMap& phi, const ExperimentConfig& c, Outcome& o) {
  Json j;
  try {
    Stabilized s = stabilize(phi, c.tol, c.max_iter);
    j["status"] = "converged";
    j["trace"] = to_json(s.trace);
    if (s.trace.certified_regime && !s.trace.kazhdan_ok) o.pass = false;
  } catch (const Diverged& d) {
    j["status"] = "diverged";
    j["trace"] = to_json(d.trace());
    if (d.trace().certified_regime) {
      o.pass = false;
      o.diverged_certified = true;
    }
  }
  return j;
}

// ---- inequality suites -----------------------------------------------------

struct Trial {
  bool pass = true;
  double margin = std::numeric_limits<double>::infinity();

  void add(double m, double slack) {
    margin = std::min(margin, m);
    if (m < -slack) pass = false;
  }
  void require(bool ok) { pass = pass && ok; }
};

inline constexpr const char* kSuites[] = {
    "square_ineq", "stinespring_ineq", "perturbation_bounds", "upd_equivalence",
    "condition_b", "condition_c",      "closeness",           "norm_estimate",
    "kazhdan",     "dixmier"};
inline constexpr std::size_t kSuiteCount = std::size(kSuites);

inline GroupMap map_sum(const GroupMap& a, const GroupMap& b) {
  return GroupMap::generate(a.domain(), [&](Element x) -> CMatrix { return a(x) + b(x); });
}

/// One trial of every suite for one seed.
inline std::vector<Trial> verify_trial(const Domain& domain, std::size_t dim, double theta,
                                       std::uint64_t seed) {
  const FiniteGroup& g = domain.group("verify");
  std::vector<Trial> t(kSuiteCount);
  auto sub = [&](std::uint64_t k) { return derive_seed(seed, k); };
  const GroupMap base = random_unitary_rep(domain, dim, sub(1));
  const GroupMap phi = perturb_unitary(base, theta, sub(2));

  {  // square_ineq on a PSD matrix with spectrum in [0, 2]
    Rng rng(sub(3));
    const CMatrix a = gaussian_matrix(rng, dim, dim);
    CMatrix m = a * a.adjoint();
    m = (2.0 * rng.uniform() / std::max(op_norm(m), 1e-300)) * m;
    const CMatrix one = identity(dim);
    std::vector<NormKind> kinds = {NormKind::schatten(1), NormKind::schatten(2),
                                   NormKind::schatten(std::numeric_limits<double>::infinity())};
    for (std::size_t k = 1; k <= dim; ++k) kinds.push_back(NormKind::ky_fan(k));
    for (const auto& kind : kinds)
      t[0].add(uinorm(one - m * m, kind) - uinorm(one - m, kind), kMarginSlack);
  }
  {  // stinespring_ineq on a compression
    const GroupMap c = compress_rep(base, (dim + 1) / 2, sub(4));
    const CMatrix ce = c(g.identity());
    std::vector<double> left(g.order()), right(g.order());
    for (Element x = 0; x < g.order(); ++x) {
      left[x] = op_norm(ce - c(x) * c(x).adjoint());
      right[x] = op_norm(ce - c(x).adjoint() * c(x));
    }
    for (Element x = 0; x < g.order(); ++x)
      for (Element y = 0; y < g.order(); ++y)
        t[1].add(std::sqrt(left[x] * right[y]) - op_norm(c(g.mul(x, y)) - c(x) * c(y)),
                 kMarginSlack);
  }
  {  // perturbation bounds for phi against a nearby non-unitary map
    const GroupMap psi = map_sum(phi, random_map(domain, dim, theta, sub(5)));
    t[2].add(perturbation_bound_report(phi, psi).worst_slack(), kBoundSlack);
  }
  {  // both directions of the unital positive definite equivalence
    const GroupMap c = compress_scaled(base, (dim + 1) / 2, sub(6), 1.0);
    const double m = mult_defect(c).value;
    const double u = unit_defect(c).value;
    t[3].add(u - m, 1e-9);
    t[3].add(m - u, 1e-9);
    t[3].require(pd_min_eig(c) >= -1e-10);
  }
  {
    const ConditionBReport b = condition_b_report(domain, dim, 1, sub(7));
    t[4].require(b.pass());
    t[4].add(1.0 - b.bound_ratio, kConditionBRatioSlack);
    t[4].add(b.pd_min_eigs.front(), kConditionBPdTol);
  }
  const GroupMap psi = average_pd(phi);
  t[5].add(-condition_c_check(phi, psi), kFormPreconditionTol);
  {
    const MarginReport r = closeness_bound_check(phi, psi);
    t[6].require(r.pass());
    t[6].add(r.worst_margin(), kMarginSlack);
  }
  for (const NormKind& kind : {NormKind::op(), NormKind::schatten(1, true), NormKind::schatten(2, true)}) {
    const MarginReport r = norm_estimate_check(phi, psi, kind);
    t[7].require(r.pass());
    t[7].add(r.worst_margin(), kMarginSlack);
  }
  {
    const KazhdanReport k = kazhdan_step(phi).report;
    t[8].require(k.pass());
    t[8].add(k.sharp_bound - k.unit_defect, 1e-10);
    t[8].add(k.epsilon - k.distance, 1e-10);
  }
  {
    const Twisted tw = similarity_twist(base, kDefaultTwistBound, sub(8));
    const DixmierReport d = dixmier_unitarize(tw.map).report;
    t[9].require(d.pass());
    t[9].add(d.bound - d.distance, 1e-8);
  }
  return t;
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs one experiment. Configuration problems throw ConfigError or another
/// ParameterError; violated preconditions throw PreconditionError (or
/// UnsupportedDomain, SingularInput). Divergence is recorded in the report.
inline Report run(const ExperimentConfig& c) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  c.validate();
  Report rep;
  rep.config = config_to_json(c);

  Domain domain = [&] {
    try {
      return parse_domain(c.group);
    } catch (const ParameterError& e) {
      throw ConfigError("group", e.what());
    }
  }();
  const std::size_t n_seeds = static_cast<std::size_t>(c.seed_last - c.seed_first) + 1;
  auto seed_at = [&](std::size_t i) { return c.seed_first + i; };
  auto ctx_at = [&](std::size_t i) { return SeedContext{seed_at(i), c.salt}; };
  const double setup_ms = detail::ms_since(t_start);
  const auto t_compute = Clock::now();

  using detail::Outcome;
  std::vector<Outcome> outcomes;
  Json summary = Json::object();

  switch (c.command) {
    case Command::kGen:
    case Command::kDefects:
    case Command::kStabilize:
    case Command::kDixmier: {
      const GenSpec recipe = detail::effective_recipe(c);
      rep.config["genspec_effective"] = to_json(recipe);
      outcomes = detail::parallel_map<Outcome>(n_seeds, c.workers, [&](std::size_t i) {
        Outcome o;
        double cond = 1.0;
        const GroupMap phi = build_genspec(recipe, domain, ctx_at(i), &cond);
        o.payload["seed"] = seed_at(i);
        switch (c.command) {
          case Command::kGen:
            o.payload["map"] = group_map_to_json(phi);
            o.payload["defects"] = to_json(defect_report(phi, c.norm));
            break;
          case Command::kDefects:
            o.payload["defects"] = to_json(defect_report(phi, c.norm));
            if (domain.is_group()) o.payload["pd_min_eig"] = real_to_json(pd_min_eig(phi));
            break;
          case Command::kStabilize:
            o.payload.update(detail::stabilize_entry(phi, c, o));
            break;
          default: {
            Unitarized u = dixmier_unitarize(phi);
            o.payload["cond"] = cond;
            o.payload["report"] = to_json(u.report);
            o.pass = u.report.pass();
            break;
          }
        }
        return o;
      });
      break;
    }
    case Command::kVerify: {
      const FiniteGroup& g = domain.group("verify");
      const std::size_t dim = c.dim.value_or(std::min<std::size_t>(g.order(), 8));
      const double theta = c.theta.value_or(detail::kDefaultTheta);
      auto per_seed = detail::parallel_map<std::vector<detail::Trial>>(
          n_seeds, c.workers, [&](std::size_t i) {
            const std::uint64_t s = ctx_at(i).resolve(std::nullopt, 0);
            return detail::verify_trial(domain, dim, theta, s);
          });
      Json suites = Json::object();
      bool all = true;
      for (std::size_t k = 0; k < detail::kSuiteCount; ++k) {
        std::size_t passed = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& trials : per_seed) {
          passed += trials[k].pass ? 1 : 0;
          worst = std::min(worst, trials[k].margin);
        }
        const bool ok = passed == per_seed.size();
        all = all && ok;
        suites[detail::kSuites[k]] = Json{{"trials", per_seed.size()},
                                          {"passed", passed},
                                          {"worst_margin", real_to_json(worst)},
                                          {"pass", ok}};
      }
      summary["dim"] = dim;
      summary["theta"] = theta;
      summary["suites"] = std::move(suites);
      rep.pass = all;
      break;
    }
    case Command::kSweep: {
      const GenSpec base = c.genspec ? *c.genspec : detail::base_recipe(c);
      const std::size_t points = c.theta_steps;
      auto theta_at = [&](std::size_t p) {
        return points == 1 ? c.theta_max
                           : c.theta_max * static_cast<double>(p) / static_cast<double>(points - 1);
      };
      outcomes = detail::parallel_map<Outcome>(points * n_seeds, c.workers, [&](std::size_t idx) {
        const std::size_t p = idx / n_seeds, i = idx % n_seeds;
        Outcome o;
        const GenSpec recipe = GenSpec::perturbed(base, theta_at(p));
        const GroupMap phi = build_genspec(recipe, domain, ctx_at(i));
        o.payload["theta"] = theta_at(p);
        o.payload["seed"] = seed_at(i);
        o.payload.update(detail::stabilize_entry(phi, c, o));
        return o;
      });
      break;
    }
  }

  if (c.command != Command::kVerify) {
    Json items = Json::array();
    std::size_t failed = 0;
    for (auto& o : outcomes) {
      o.payload["pass"] = o.pass;
      rep.pass = rep.pass && o.pass;
      rep.diverged_certified = rep.diverged_certified || o.diverged_certified;
      failed += o.pass ? 0 : 1;
      items.push_back(std::move(o.payload));
    }
    summary["items"] = std::move(items);
    summary["failed"] = failed;
  }
  rep.results = std::move(summary);
  rep.timings = Json{{"setup_ms", setup_ms},
                     {"compute_ms", detail::ms_since(t_compute)},
                     {"total_ms", detail::ms_since(t_start)}};
  return rep;
}

/// Process exit code for an error escaping run(): 2 for configuration
/// problems, 3 for violated preconditions.
inline int error_exit_code(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const NotAGroup*>(&e))
    return 2;
  return 3;
}

/// Line-delimited form: a header object (the report without its item list),
/// then one object per iteration record for stabilize and sweep, or one per
/// item for the other commands.
inline std::string report_ndjson(const Report& r) {
  Json head = r.to_json();
  head["type"] = "header";
  Json items = Json::array();
  if (head["results"].contains("items")) {
    items = std::move(head["results"]["items"]);
    head["results"].erase("items");
  }
  std::string out = head.dump() + "\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    Json& it = items[i];
    if (it.contains("trace")) {
      const Json& its = it["trace"]["iterations"];
      for (std::size_t n = 0; n < its.size(); ++n) {
        Json line{{"type", "iteration"}, {"item", i}, {"seed", it["seed"]}, {"n", n}};
        if (it.contains("theta")) line["theta"] = it["theta"];
        line.update(its[n]);
        out += line.dump() + "\n";
      }
    } else {
      Json line{{"type", "item"}, {"item", i}};
      line.update(it);
      out += line.dump() + "\n";
    }
  }
  return out;
}

inline std::string report_text(const Report& r, bool ndjson) {
  return ndjson ? report_ndjson(r) : r.to_json().dump(2) + "\n";
}

/// Writes the report to `path` ("-" or empty for stdout).
inline void report_write(const Report& r, const std::string& path, bool ndjson) {
  const std::string text = report_text(r, ndjson);
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("report_write: cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("report_write: write to '" + path + "' failed");
}

}  // namespace ulamlab
