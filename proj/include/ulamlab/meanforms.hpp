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

/// \file meanforms.hpp
/// The uniform invariant mean on a finite group and what is built from it:
/// the averaging x -> E_y phi(xy) phi(y)^*, the M_d-valued form
/// <phi, psi> = E_x phi(x)^* psi(x), and checkers for the resulting
/// closeness and norm estimates.
///
/// Only finite groups carry a mean here. Every entry point throws
/// UnsupportedDomain on a free-group ball.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "ulamlab/generators.hpp"
#include "ulamlab/gmap.hpp"

namespace ulamlab {

/// (1/|G|) sum_x phi(x).
inline CMatrix mean(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group("mean");
  CMatrix acc = zeros(phi.dim());
  for (Element x = 0; x < g.order(); ++x) acc += phi(x);
  return acc / static_cast<double>(g.order());
}

/// max over x of ||mean(y -> phi(xy)) - mean(phi)||.
inline double mean_invariance_residual(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group("mean_invariance_residual");
  const CMatrix base = mean(phi);
  double worst = 0.0;
  for (Element x = 0; x < g.order(); ++x) {
    CMatrix acc = zeros(phi.dim());
    for (Element y = 0; y < g.order(); ++y) acc += phi(g.mul(x, y));
    acc /= static_cast<double>(g.order());
    worst = std::max(worst, op_norm(acc - base));
  }
  return worst;
}

/// psi(x) = E_y phi(xy) phi(y)^*. Positive definite for every bounded phi;
/// unital when phi is unitary-valued.
inline GroupMap average_pd(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group("average_pd");
  const double w = 1.0 / static_cast<double>(g.order());
  std::vector<CMatrix> adj;
  adj.reserve(g.order());
  for (Element y = 0; y < g.order(); ++y) adj.push_back(phi(y).adjoint());
  return GroupMap::generate(
      phi.domain(),
      [&](Element x) {
        CMatrix acc = zeros(phi.dim());
        for (Element y = 0; y < g.order(); ++y) acc.noalias() += phi(g.mul(x, y)) * adj[y];
        return CMatrix(w * acc);
      },
      "avg(" + phi.label() + ")");
}

/// <phi, psi> = E_x phi(x)^* psi(x).
inline CMatrix form(const GroupMap& phi, const GroupMap& psi) {
  check_same_shape(phi, psi, "form");
  const FiniteGroup& g = phi.domain().group("form");
  CMatrix acc = zeros(phi.dim());
  for (Element x = 0; x < g.order(); ++x) acc.noalias() += phi(x).adjoint() * psi(x);
  return acc / static_cast<double>(g.order());
}

/// x -> <lambda(x) phi, phi> = E_y phi(x^{-1} y)^* phi(y).
inline GroupMap left_coefficient(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group("left_coefficient");
  const double w = 1.0 / static_cast<double>(g.order());
  return GroupMap::generate(phi.domain(), [&](Element x) {
    CMatrix acc = zeros(phi.dim());
    for (Element y = 0; y < g.order(); ++y)
      acc.noalias() += phi(g.mul(g.inv(x), y)).adjoint() * phi(y);
    return CMatrix(w * acc);
  });
}

/// x -> <lambda(x^{-1}) phi, phi> = E_y phi(xy)^* phi(y), which is
/// average_pd applied to phi^*.
inline GroupMap inverse_coefficient(const GroupMap& phi) {
  return average_pd(adjoint_map(phi));
}

inline constexpr double kConditionBRatioSlack = 1e-10;
inline constexpr double kConditionBPdTol = 1e-9;

struct ConditionBReport {
  CMatrix form_at_one;
  /// ||<1,1> - I||; the uniform mean gives exactly I.
  double form_at_one_deviation = 0.0;
  /// Smallest eigenvalue of <1,1>: nonzero form, Hermitian PSD.
  double form_at_one_min_eig = 0.0;
  /// max over trials of ||<phi,phi>|| / ||phi||^2 (kappa realized by the form).
  double bound_ratio = 0.0;
  /// pd_min_eig of x -> <lambda(x^{-1}) phi, phi>, one per trial.
  std::vector<double> pd_min_eigs;
  /// pd_min_eig of x -> <lambda(x) phi, phi>, one per trial. Informational:
  /// its Gram is the block transpose of the one above, so it agrees for
  /// dim 1 but may be indefinite for matrix-valued phi.
  std::vector<double> pd_min_eigs_left;

  bool pass() const {
    if (form_at_one_deviation > 1e-12) return false;
    if (bound_ratio > 1.0 + kConditionBRatioSlack) return false;
    for (double v : pd_min_eigs)
      if (v < -kConditionBPdTol) return false;
    return true;
  }
};

/// Samples `trials` seeded maps with sup norm 1 and measures the three
/// clauses of the form characterization for the uniform mean.
inline ConditionBReport condition_b_report(const Domain& domain, std::size_t dim,
                                           std::size_t trials, std::uint64_t seed) {
  domain.group("condition_b_report");
  if (trials < 1) throw ParameterError("condition_b_report: trials must be >= 1");
  if (dim < 1) throw ParameterError("condition_b_report: dim must be >= 1");
  ConditionBReport r;
  const GroupMap one = GroupMap::constant(domain, identity(dim));
  r.form_at_one = form(one, one);
  r.form_at_one_deviation = op_norm(r.form_at_one - identity(dim));
  r.form_at_one_min_eig = herm_min_eig(r.form_at_one);
  for (std::size_t t = 0; t < trials; ++t) {
    const GroupMap phi = random_map(domain, dim, 1.0, derive_seed(seed, t));
    const double sup = sup_norm(phi);
    const double ratio = op_norm(form(phi, phi)) / (sup * sup);
    r.bound_ratio = std::max(r.bound_ratio, ratio);
    r.pd_min_eigs.push_back(pd_min_eig(inverse_coefficient(phi)));
    r.pd_min_eigs_left.push_back(pd_min_eig(left_coefficient(phi)));
  }
  return r;
}

/// max over x of ||phi(x)^* psi(x) - E_y phi(x)^* phi(xy) phi(y)^*||. At
/// finite dimension, vanishing of this matrix residual is equivalent to the
/// identity holding against every normal functional.
inline double condition_c_check(const GroupMap& phi, const GroupMap& psi) {
  check_same_shape(phi, psi, "condition_c_check");
  const FiniteGroup& g = phi.domain().group("condition_c_check");
  const double w = 1.0 / static_cast<double>(g.order());
  double worst = 0.0;
  for (Element x = 0; x < g.order(); ++x) {
    CMatrix avg = zeros(phi.dim());
    for (Element y = 0; y < g.order(); ++y) avg.noalias() += phi(g.mul(x, y)) * phi(y).adjoint();
    const CMatrix lhs = phi(x).adjoint() * psi(x);
    const CMatrix rhs = phi(x).adjoint() * (w * avg);
    worst = std::max(worst, op_norm(lhs - rhs));
  }
  return worst;
}

inline constexpr double kFormPreconditionTol = 1e-10;
inline constexpr double kMarginSlack = 1e-10;

/// Per-element comparison lhs(x) <= rhs(x) + 1e-10.
struct MarginReport {
  bool skipped = false;
  std::string reason;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margins;  ///< rhs - lhs

  double worst_margin() const {
    return margins.empty() ? 0.0 : *std::min_element(margins.begin(), margins.end());
  }
  bool pass() const { return !skipped && worst_margin() >= -kMarginSlack; }
};

namespace detail {

inline bool check_form_preconditions(const GroupMap& phi, const GroupMap& psi, MarginReport& r) {
  const double u = unit_defect(phi).value;
  if (u > kFormPreconditionTol) {
    r.skipped = true;
    r.reason = "phi is not unitary-valued (unit_defect " + std::to_string(u) + ")";
    return false;
  }
  const double c = condition_c_check(phi, psi);
  if (c > kFormPreconditionTol) {
    r.skipped = true;
    r.reason = "condition (C) residual " + std::to_string(c) + " exceeds 1e-10";
    return false;
  }
  return true;
}

}  // namespace detail

/// For unitary phi and psi satisfying condition (C): ||phi(x) - psi(x)|| <=
/// max_y ||phi(x) phi(y) - phi(xy)|| for every x.
inline MarginReport closeness_bound_check(const GroupMap& phi, const GroupMap& psi) {
  check_same_shape(phi, psi, "closeness_bound_check");
  const FiniteGroup& g = phi.domain().group("closeness_bound_check");
  MarginReport r;
  if (!detail::check_form_preconditions(phi, psi, r)) return r;
  for (Element x = 0; x < g.order(); ++x) {
    const double lhs = op_norm(phi(x) - psi(x));
    double rhs = 0.0;
    for (Element y = 0; y < g.order(); ++y)
      rhs = std::max(rhs, op_norm(phi(x) * phi(y) - phi(g.mul(x, y))));
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.margins.push_back(rhs - lhs);
  }
  return r;
}

/// Unitarily invariant version with a mean on the right:
/// ||phi(x) - psi(x)|| <= E_y ||phi(xy) - phi(x) phi(y)||.
///
/// Schatten kinds must be trace-normalized (the finite-factor setting).
inline MarginReport norm_estimate_check(const GroupMap& phi, const GroupMap& psi,
                                        const NormKind& kind) {
  check_same_shape(phi, psi, "norm_estimate_check");
  const FiniteGroup& g = phi.domain().group("norm_estimate_check");
  kind.validate(phi.dim());
  MarginReport r;
  if (kind.tag == NormKind::Tag::kSchatten && !kind.trace_normalized) {
    r.skipped = true;
    r.reason = "schatten norms must be trace-normalized";
    return r;
  }
  if (!detail::check_form_preconditions(phi, psi, r)) return r;
  const double w = 1.0 / static_cast<double>(g.order());
  for (Element x = 0; x < g.order(); ++x) {
    const double lhs = uinorm(phi(x) - psi(x), kind);
    double rhs = 0.0;
    for (Element y = 0; y < g.order(); ++y)
      rhs += w * uinorm(phi(g.mul(x, y)) - phi(x) * phi(y), kind);
    r.lhs.push_back(lhs);
    r.rhs.push_back(rhs);
    r.margins.push_back(rhs - lhs);
  }
  return r;
}

}  // namespace ulamlab
