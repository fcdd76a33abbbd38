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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Every asserted quantity is recomputed here from plain SVDs, eigensolves and
// explicit sums; library results are only trusted after agreeing with those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "support.hpp"
#include "ulamlab/ulamlab.hpp"

using namespace ulamlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects failures for one criterion; keeps the first few messages.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 5) messages_.push_back(what);
  }
  void le(double value, double bound, const std::string& what) {
    expect(value <= bound, what + ": " + fmt(value) + " > " + fmt(bound));
  }
  void near(double value, double target, double tol, const std::string& what) {
    expect(std::abs(value - target) <= tol,
           what + ": " + fmt(value) + " vs " + fmt(target) + " (tol " + fmt(tol) + ")");
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  const std::vector<std::string>& messages() const { return messages_; }

  static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

int g_failed = 0;

void report(int id, const char* title, const Check& c, const std::string& detail) {
  std::printf("criterion %d %s: %s (%zu checks; %s)\n", id, c.ok() ? "PASS" : "FAIL", title, c.checks(),
              detail.c_str());
  for (const auto& m : c.messages()) std::printf("    %s\n", m.c_str());
  std::fflush(stdout);
  if (!c.ok()) ++g_failed;
}

// ---------------------------------------------------------------------------
// Test-side norm oracles

RVector svals(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

double schatten_normalized(const CMatrix& a, double p) {
  const RVector s = svals(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return std::pow(acc / static_cast<double>(s.size()), 1.0 / p);
}

double iso_oracle(const GroupMap& phi) {
  double worst = 0.0;
  const auto d = static_cast<Eigen::Index>(phi.dim());
  for (const CMatrix& v : phi.values()) worst = std::max(worst, oracle::top_sv(oracle::eye(d) - v.adjoint() * v));
  return worst;
}

double sup_oracle(const GroupMap& phi) {
  double worst = 0.0;
  for (const CMatrix& v : phi.values()) worst = std::max(worst, oracle::top_sv(v));
  return worst;
}

// ---------------------------------------------------------------------------
// Shared corpus: perturbed exact unitary representations

struct Case {
  std::string name;
  GroupMap pi;
  GroupMap phi;
  double theta;
};

std::vector<Case> build_corpus() {
  const Domain groups[] = {Domain(cyclic(2)), Domain(cyclic(12)), Domain(dihedral(4)), Domain(symmetric(4))};
  std::vector<Case> out;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Domain& d = groups[i % 4];
    const std::uint64_t seed = derive_seed(2026, i);
    // Half the trials use a conjugated regular representation (dimension up
    // to 24); the others draw a random unitary representation of dimension 1..24.
    GroupMap pi = (i % 8 < 4) ? conjugated(regular_rep(d), seed)
                              : random_unitary_rep(d, 1 + (i * 7) % 24, seed);
    const double theta = 0.005 + 0.025 * static_cast<double>(i % 6) / 5.0;
    GroupMap phi = perturb_unitary(pi, theta, derive_seed(seed, 1));
    out.push_back({pi.label(), std::move(pi), std::move(phi), theta});
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion1(const std::vector<Case>& corpus, double build_seconds) {
  Check c;
  const auto t0 = Clock::now();
  double pipeline = build_seconds;
  std::size_t max_iter = 0, max_dim = 0;
  double worst_eps0 = 0.0, worst_ratio = 0.0;
  for (const Case& k : corpus) {
    const double eps0 = oracle::mult_defect(k.phi);
    worst_eps0 = std::max(worst_eps0, eps0);
    max_dim = std::max(max_dim, k.phi.dim());
    c.le(eps0, 0.1, k.name + " eps0 in certified regime");
    try {
      const auto ts = Clock::now();
      const Stabilized s = stabilize(k.phi, 1e-12, 30);
      pipeline += seconds_since(ts);
      max_iter = std::max(max_iter, s.trace.iterations.size());
      c.le(static_cast<double>(s.trace.iterations.size()), 30, k.name + " iterations");
      c.le(oracle::mult_defect(s.pi), 1e-12, k.name + " final mult defect");
      c.le(oracle::unit_defect(s.pi), 1e-11, k.name + " final unit defect");
      const double dist = oracle::distance(k.phi, s.pi);
      c.le(dist, 2.0 * eps0 + 1e-9, k.name + " distance to phi");
      worst_ratio = std::max(worst_ratio, dist / eps0);
    } catch (const Diverged& e) {
      c.expect(false, k.name + ": diverged");
    }
  }
  c.le(pipeline, 60.0, "generation + stabilization seconds");
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "100 trials, max dim %zu, max eps0 %.4f, max iterations %zu, max distance/eps0 %.4f, "
                "pipeline %.1f s, oracle checks %.1f s",
                max_dim, worst_eps0, max_iter, worst_ratio, pipeline, seconds_since(t0) + build_seconds - pipeline);
  report(1, "stabilization converges close to the input", c, buf);
}

void criterion2(const std::vector<Case>& corpus) {
  Check c;
  double worst_sharp = std::numeric_limits<double>::infinity();
  for (const Case& k : corpus) {
    const double eps = oracle::mult_defect(k.phi);
    const GroupMap psi = oracle::average(k.phi);
    c.le(oracle::distance(psi, average_pd(k.phi)), 1e-13, k.name + " library average agrees");
    const double unit = oracle::unit_defect(psi);
    c.le(unit, eps * eps + 1e-9, k.name + " unit defect <= eps^2");
    c.le(unit, 2.0 * eps * eps + 1e-9, k.name + " unit defect <= 2 eps^2");
    c.le(oracle::distance(k.phi, psi), eps + 1e-9, k.name + " distance <= eps");
    worst_sharp = std::min(worst_sharp, eps * eps - unit);
  }
  report(2, "averaging is eps^2-unitary and eps-close", c,
         "worst eps^2 - unit_defect margin " + Check::fmt(worst_sharp));
}

void criterion3() {
  Check c;
  const auto t0 = Clock::now();
  const Domain z2(cyclic(2));
  const GroupMap phi = oracle::scalar_map(z2, {1.0, std::exp(Complex(0.0, 0.1))});
  const double eps = 2.0 * std::sin(0.1);
  c.near(mult_defect(phi).value, eps, 1e-12, "epsilon");
  c.near(oracle::mult_defect(phi), eps, 1e-12, "epsilon (oracle)");
  const Averaged a = kazhdan_step(phi);
  c.near(std::abs(a.psi(1)(0, 0) - std::cos(0.1)), 0.0, 1e-12, "psi(1)");
  c.near(oracle::unit_defect(a.psi), std::sin(0.1) * std::sin(0.1), 1e-12, "unit defect of psi");
  c.near(a.report.unital_deviation, 0.0, 1e-12, "psi(e) = 1");
  c.near(pd_min_eig(a.psi), 1.0 - std::cos(0.1), 1e-12, "pd min eig");
  c.near(oracle::gram_min_eig(a.psi), 1.0 - std::cos(0.1), 1e-12, "pd min eig (oracle)");
  const Stabilized s = stabilize(phi);
  c.near(std::abs(s.pi(1)(0, 0) - 1.0), 0.0, 1e-12, "limit is the trivial character");
  c.near(oracle::distance(phi, s.pi), 2.0 * std::sin(0.05), 1e-12, "final distance");
  c.near(s.trace.total_distance, 2.0 * std::sin(0.05), 1e-12, "reported final distance");
  const double secs = seconds_since(t0);
  c.le(secs, 1.0, "runtime seconds");
  report(3, "scalar Z2 closed forms", c, Check::fmt(secs) + " s");
}

void criterion4() {
  Check c;
  const auto t0 = Clock::now();
  const Domain groups[] = {Domain(cyclic(5)),          Domain(cyclic(12)),
                           Domain(dihedral(4)),        Domain(symmetric(3)),
                           Domain(symmetric(4)),       Domain(direct_product(cyclic(2), cyclic(6)))};
  double m_stine = 1e300, m_square = 1e300, m_pert = 1e300, m_upd = 1e300;

  // (a) Stinespring-type inequality on compressions.
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Domain& d = groups[i % 6];
    const std::size_t dim = 1 + i % 8;
    const GroupMap pi = random_unitary_rep(d, dim, derive_seed(41, i));
    const GroupMap cm = compress_rep(pi, 1 + (i / 8) % dim, derive_seed(42, i));
    const FiniteGroup& g = d.group();
    const CMatrix ce = cm(g.identity());
    c.le(oracle::top_sv(ce), 1.0 + 1e-12, "compression contractive at e");
    std::vector<double> left(g.order()), right(g.order());
    for (Element x = 0; x < g.order(); ++x) {
      left[x] = oracle::top_sv(ce - cm(x) * cm(x).adjoint());
      right[x] = oracle::top_sv(ce - cm(x).adjoint() * cm(x));
    }
    for (Element x = 0; x < g.order(); ++x)
      for (Element y = 0; y < g.order(); ++y) {
        const double slack = std::sqrt(left[x] * right[y]) - oracle::top_sv(cm(g.mul(x, y)) - cm(x) * cm(y));
        m_stine = std::min(m_stine, slack);
        if (slack < -1e-10) c.expect(false, "stinespring slack " + Check::fmt(slack));
      }
  }

  // (b) |1 - s| <= |1 - s^2| lifted to unitarily invariant norms, with the
  // norms evaluated from the eigenvalues of the PSD matrix.
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng(derive_seed(43, i));
    const std::size_t dim = 1 + i % 8;
    const CMatrix a = gaussian_matrix(rng, dim, dim);
    CMatrix t = a * a.adjoint();
    t *= (3.0 * rng.uniform()) / std::max(oracle::top_sv(t), 1e-300);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(t);
    std::vector<double> one_minus, one_minus_sq;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double s = std::max(0.0, es.eigenvalues()(k));
      one_minus.push_back(std::abs(1.0 - s));
      one_minus_sq.push_back(std::abs(1.0 - s * s));
    }
    std::sort(one_minus.rbegin(), one_minus.rend());
    std::sort(one_minus_sq.rbegin(), one_minus_sq.rend());
    auto schatten = [](const std::vector<double>& v, double p) {
      if (std::isinf(p)) return v.front();
      double acc = 0.0;
      for (double s : v) acc += std::pow(s, p);
      return std::pow(acc, 1.0 / p);
    };
    auto ky_fan = [](const std::vector<double>& v, std::size_t k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += v[j];
      return acc;
    };
    const CMatrix id = oracle::eye(static_cast<Eigen::Index>(dim));
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const double lhs = schatten(one_minus, p), rhs = schatten(one_minus_sq, p);
      m_square = std::min(m_square, rhs - lhs);
      c.le(lhs, rhs + 1e-10, "square inequality schatten " + Check::fmt(p));
      c.near(uinorm(id - t, NormKind::schatten(p)), lhs, 1e-10, "library schatten norm");
    }
    for (std::size_t k = 1; k <= dim; ++k) {
      const double lhs = ky_fan(one_minus, k), rhs = ky_fan(one_minus_sq, k);
      m_square = std::min(m_square, rhs - lhs);
      c.le(lhs, rhs + 1e-10, "square inequality ky fan " + std::to_string(k));
      c.near(uinorm(id - t, NormKind::ky_fan(k)), lhs, 1e-10, "library ky fan norm");
    }
  }

  // (c) Perturbation bounds: measured defects recomputed here.
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Domain& d = groups[i % 6];
    const std::size_t dim = 1 + i % 8;
    const double theta = 0.2 * static_cast<double>(i % 10 + 1) / 10.0;
    const GroupMap phi = perturb_unitary(random_unitary_rep(d, dim, derive_seed(44, i)), theta, derive_seed(45, i));
    const GroupMap noise = random_map(d, dim, theta, derive_seed(46, i));
    const GroupMap psi =
        GroupMap::generate(d, [&](Element x) -> CMatrix { return phi(x) + noise(x); });
    const PerturbationReport r = perturbation_bound_report(phi, psi);
    const double eta = oracle::distance(phi, psi);
    const double sups = sup_oracle(phi) + sup_oracle(psi);
    c.near(r.eta, eta, 1e-12, "eta");
    const double pred_iso = iso_oracle(phi) + sups * eta;
    const double pred_unit = oracle::unit_defect(phi) + sups * eta;
    const double pred_mult = oracle::mult_defect(phi) + (1.0 + sups) * eta;
    const double slack = std::min({pred_iso - iso_oracle(psi), pred_unit - oracle::unit_defect(psi),
                                   pred_mult - oracle::mult_defect(psi)});
    m_pert = std::min(m_pert, slack);
    c.le(-slack, 1e-10, "perturbation slack");
    c.near(r.worst_slack(), slack, 1e-10, "library slack agrees");
    c.expect(r.all_ok(), "library perturbation report fails");
  }

  // (d) Unital positive definite maps: the two defects agree.
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Domain& d = groups[i % 6];
    const std::size_t dim = 1 + i % 8;
    const GroupMap pi = random_unitary_rep(d, dim, derive_seed(47, i));
    const GroupMap cm = compress_scaled(pi, 1 + (i / 8) % dim, derive_seed(48, i), 1.0);
    const auto sub = static_cast<Eigen::Index>(cm.dim());
    c.le(oracle::top_sv(cm(d.identity()) - oracle::eye(sub)), 1e-12, "compression is unital");
    c.le(-oracle::gram_min_eig(cm), 1e-10, "compression is positive definite");
    const double m = oracle::mult_defect(cm), u = oracle::unit_defect(cm);
    m_upd = std::min(m_upd, 1e-9 - std::abs(m - u));
    c.le(m, u + 1e-9, "mult <= unit");
    c.le(u, m + 1e-9, "unit <= mult");
  }
  const double secs = seconds_since(t0);
  c.le(secs, 120.0, "runtime seconds");
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "min slacks: stinespring %.3g, square %.3g, perturbation %.3g, defect agreement %.3g; %.1f s",
                m_stine, m_square, m_pert, m_upd, secs);
  report(4, "inequality suites, 500 trials each", c, buf);
}

void criterion5() {
  Check c;
  double worst_ratio = 0.0, worst_pd = 1e300, worst_left = 1e300;
  struct Setup {
    Domain domain;
    std::size_t dim;
  };
  const Setup setups[] = {{Domain(cyclic(6)), 1}, {Domain(dihedral(4)), 3}, {Domain(symmetric(3)), 4},
                          {Domain(symmetric(4)), 2}};
  for (std::size_t s = 0; s < 4; ++s) {
    const Setup& st = setups[s];
    const std::uint64_t seed = derive_seed(51, s);
    const ConditionBReport r = condition_b_report(st.domain, st.dim, 50, seed);
    const GroupMap one = GroupMap::constant(st.domain, identity(st.dim));
    // <1, 1> by explicit summation.
    CMatrix f = CMatrix::Zero(static_cast<Eigen::Index>(st.dim), static_cast<Eigen::Index>(st.dim));
    for (const CMatrix& v : one.values()) f += v.adjoint() * v;
    f /= static_cast<double>(st.domain.size());
    c.le(oracle::top_sv(f - oracle::eye(static_cast<Eigen::Index>(st.dim))), 1e-12, "<1,1> = I");
    c.le(r.form_at_one_deviation, 1e-12, "library <1,1> deviation");
    c.le(r.bound_ratio, 1.0 + 1e-10, "bound ratio");
    c.expect(r.pd_min_eigs.size() == 50, "trial count");
    for (std::size_t t = 0; t < r.pd_min_eigs.size(); ++t) {
      const GroupMap phi = random_map(st.domain, st.dim, 1.0, derive_seed(seed, t));
      CMatrix pp = CMatrix::Zero(f.rows(), f.cols());
      for (const CMatrix& v : phi.values()) pp += v.adjoint() * v;
      pp /= static_cast<double>(st.domain.size());
      const double sup = sup_oracle(phi);
      const double ratio = oracle::top_sv(pp) / (sup * sup);
      worst_ratio = std::max(worst_ratio, ratio);
      c.le(ratio, 1.0 + 1e-10, "||<phi,phi>|| <= ||phi||^2");
      // x -> E_y phi(xy)^* phi(y), by explicit summation.
      const FiniteGroup& g = st.domain.group();
      const GroupMap coeff = GroupMap::generate(st.domain, [&](Element x) -> CMatrix {
        CMatrix acc = CMatrix::Zero(f.rows(), f.cols());
        for (Element y = 0; y < g.order(); ++y) acc += phi(g.mul(x, y)).adjoint() * phi(y);
        return acc / static_cast<double>(g.order());
      });
      const double pd = oracle::gram_min_eig(coeff);
      worst_pd = std::min(worst_pd, pd);
      worst_left = std::min(worst_left, r.pd_min_eigs_left[t]);
      c.le(-pd, 1e-9, "coefficient map positive definite");
      c.near(r.pd_min_eigs[t], pd, 1e-9, "library pd min eig agrees");
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "200 maps, max ratio %.6f, min pd eig %.3g (left-translate variant, informational: %.3g)",
                worst_ratio, worst_pd, worst_left);
  report(5, "form characterization of the uniform mean", c, buf);
}

void criterion6(const std::vector<Case>& corpus) {
  Check c;
  double worst_c = 0.0, worst_close = 1e300, worst_norm = 1e300;
  for (const Case& k : corpus) {
    const FiniteGroup& g = k.phi.domain().group();
    const GroupMap psi = oracle::average(k.phi);
    const double w = 1.0 / static_cast<double>(g.order());
    // Residual phi(x)^* psi(x) - E_y phi(x)^* phi(xy) phi(y)^* by hand.
    double residual = 0.0;
    for (Element x = 0; x < g.order(); ++x) {
      CMatrix acc = CMatrix::Zero(psi(0).rows(), psi(0).cols());
      for (Element y = 0; y < g.order(); ++y) acc += k.phi(x).adjoint() * k.phi(g.mul(x, y)) * k.phi(y).adjoint();
      residual = std::max(residual, oracle::top_sv(k.phi(x).adjoint() * psi(x) - w * acc));
    }
    worst_c = std::max(worst_c, residual);
    c.le(residual, 1e-10, k.name + " condition C residual");
    c.le(condition_c_check(k.phi, average_pd(k.phi)), 1e-10, k.name + " library condition C");

    const MarginReport close = closeness_bound_check(k.phi, average_pd(k.phi));
    c.expect(!close.skipped, k.name + " closeness skipped: " + close.reason);
    for (Element x = 0; x < g.order(); ++x) {
      double rhs = 0.0;
      for (Element y = 0; y < g.order(); ++y)
        rhs = std::max(rhs, oracle::top_sv(k.phi(x) * k.phi(y) - k.phi(g.mul(x, y))));
      const double margin = rhs - oracle::top_sv(k.phi(x) - psi(x));
      worst_close = std::min(worst_close, margin);
      c.le(-margin, 1e-10, k.name + " closeness margin");
    }
    c.le(-close.worst_margin(), 1e-10, k.name + " library closeness margin");

    for (double p : {1.0, 2.0}) {
      const MarginReport r = norm_estimate_check(k.phi, average_pd(k.phi), NormKind::schatten(p, true));
      c.expect(!r.skipped, k.name + " norm estimate skipped: " + r.reason);
      c.le(-r.worst_margin(), 1e-10, k.name + " library norm estimate margin");
      for (Element x = 0; x < g.order(); ++x) {
        double rhs = 0.0;
        for (Element y = 0; y < g.order(); ++y)
          rhs += w * schatten_normalized(k.phi(g.mul(x, y)) - k.phi(x) * k.phi(y), p);
        const double margin = rhs - schatten_normalized(k.phi(x) - psi(x), p);
        worst_norm = std::min(worst_norm, margin);
        c.le(-margin, 1e-10, k.name + " norm estimate margin p=" + Check::fmt(p));
      }
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "max residual %.3g, min closeness margin %.3g, min norm-estimate margin %.3g",
                worst_c, worst_close, worst_norm);
  report(6, "coefficient identity and closeness estimates", c, buf);
}

void criterion7() {
  Check c;
  const Domain groups[] = {Domain(cyclic(2)), Domain(cyclic(12)), Domain(dihedral(4)), Domain(symmetric(4))};
  double worst_margin = 1e300;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Domain& d = groups[i % 4];
    const GroupMap pi = random_unitary_rep(d, 1 + i % 8, derive_seed(71, i));
    const Twisted tw = similarity_twist(pi, 2.0, derive_seed(72, i));
    c.le(tw.cond, 2.0 + 1e-12, "cond(V) <= 2");
    const Unitarized u = dixmier_unitarize(tw.map);
    const double sup = sup_oracle(tw.map);
    const double dist = oracle::distance(tw.map, u.pi);
    c.le(oracle::unit_defect(u.pi), 1e-9, "unitary result");
    c.le(oracle::mult_defect(u.pi), 1e-9, "still a representation");
    c.le(dist, sup * (sup * sup - 1.0) + 1e-8, "distance bound");
    worst_margin = std::min(worst_margin, sup * (sup * sup - 1.0) - dist);
  }
  // Hand example: psi(1) = [[0, 2], [1/2, 0]] on Z2.
  CMatrix a(2, 2);
  a << 0.0, 2.0, 0.5, 0.0;
  const GroupMap psi(Domain(cyclic(2)), {oracle::eye(2), a});
  const Unitarized u = dixmier_unitarize(psi);
  CMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  c.le(oracle::top_sv(u.pi(1) - swap), 1e-15, "hand example recovers the swap");
  c.le(oracle::top_sv(u.pi(0) - oracle::eye(2)), 1e-15, "hand example identity");
  c.near(oracle::distance(psi, u.pi), 1.0, 1e-15, "hand example distance");
  c.near(u.report.bound, 6.0, 1e-14, "hand example bound");
  c.expect(u.report.pass(), "hand example report");
  report(7, "unitarization of bounded representations", c,
         "100 twists, min bound margin " + Check::fmt(worst_margin) + "; hand example distance " +
             Check::fmt(u.report.distance) + " <= " + Check::fmt(u.report.bound));
}

void criterion8() {
  Check c;
  long double sum = 0.0L, pn = 2.0L;
  for (int n = 1; n < 64; ++n, pn *= 2.0L) sum += std::pow(0.1L, pn - 1.0L);
  const double series = static_cast<double>(1.0L + sum);
  const BoundCertificate b = bound_certificate(1, 1, 2, 0.1);
  c.near(b.series_constant, series, 1e-9, "series against direct summation");
  c.near(b.series_constant, 1.1010001, 1e-9, "series value");
  long double prod = 1.0L, q = 0.1L;
  for (int n = 0; n < 12; ++n, q *= q) prod *= 1.0L + q;
  const double pc = product_constant(1, 2, 0.1);
  c.near(pc, static_cast<double>(prod), 1e-12, "product against direct evaluation");
  report(8, "bound constants", c,
         "series " + Check::fmt(b.series_constant) + ", product " + Check::fmt(pc));
}

void criterion9() {
  Check c;
  const Domain ball(free_ball(2, 3));
  const GroupMap phi = random_map(ball, 2, 1.0, 9);
  auto unsupported = [&](const char* what, const std::function<void()>& f) {
    try {
      f();
      c.expect(false, std::string(what) + " did not throw");
    } catch (const UnsupportedDomain&) {
      c.expect(true, what);
    } catch (const std::exception& e) {
      c.expect(false, std::string(what) + " threw the wrong error: " + e.what());
    }
  };
  unsupported("mean", [&] { (void)mean(phi); });
  unsupported("average_pd", [&] { (void)average_pd(phi); });
  unsupported("stabilize", [&] { (void)stabilize(phi); });
  const DefectReport r = defect_report(phi);
  c.expect(r.restricted, "defect report restricted");
  // The restricted sup runs exactly over in-ball products.
  const FreeBall& fb = ball.ball();
  double worst = 0.0;
  for (Element x = 0; x < fb.size(); ++x)
    for (Element y = 0; y < fb.size(); ++y) {
      const Element xy = fb.mul(x, y);
      if (xy < fb.size()) worst = std::max(worst, oracle::top_sv(phi(xy) - phi(x) * phi(y)));
    }
  c.near(r.epsilon, worst, 1e-12, "restricted mult defect");
  report(9, "free-group balls are rejected or restricted", c,
         "ball size " + std::to_string(fb.size()) + ", restricted eps " + Check::fmt(r.epsilon));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<Case> corpus = build_corpus();
  const double build_seconds = seconds_since(t0);
  auto guarded = [](int id, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      std::printf("criterion %d FAIL: unexpected error: %s\n", id, e.what());
      ++g_failed;
    }
  };
  guarded(1, [&] { criterion1(corpus, build_seconds); });
  guarded(2, [&] { criterion2(corpus); });
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, [&] { criterion6(corpus); });
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  std::printf("%d of 9 criteria failed; %.1f s\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
