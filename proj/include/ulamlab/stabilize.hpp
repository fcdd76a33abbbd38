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

/// \file stabilize.hpp
/// Constructive stabilization of almost-representations.
///
///   polar_repair       phi(x) -> unitary polar factor of phi(x)
///   kazhdan_step       phi -> E_y phi(xy) phi(y)^*   (unitary input)
///   stabilize          iterate repair o average until multiplicative
///   dixmier_unitarize  psi -> S psi S^{-1}, S = (E_x psi(x)^* psi(x))^{1/2}
///
/// Each step returns a report holding the measured quantities next to the
/// bounds they are certified against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ulamlab/gmap.hpp"
#include "ulamlab/meanforms.hpp"

namespace ulamlab {

// ---------------------------------------------------------------------------
// Bound constants

/// Series constant (1 + kappa1^{-1/(p-1)} sum_{n>=1} delta^{p^n - 1}) kappa2
/// bounding ||phi - pi|| / epsilon along an iteration with
/// epsilon_n = kappa1 epsilon_{n-1}^p and steps <= kappa2 epsilon_n.
struct BoundCertificate {
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double p = 2.0;
  double delta = 0.5;
  double series_constant = 1.0;
  std::size_t truncation_terms = 0;
  double truncation_error_bound = 0.0;
};

inline BoundCertificate bound_certificate(double kappa1, double kappa2, double p, double delta) {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
    throw ParameterError("bound_certificate: kappa1 and kappa2 must be > 0");
  if (!(p > 1.0)) throw ParameterError("bound_certificate: p must be > 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("bound_certificate: delta must lie in (0, 1)");
  BoundCertificate c{kappa1, kappa2, p, delta, 0.0, 0, 0.0};
  const double log_delta = std::log(delta);
  const double prefactor = std::pow(kappa1, -1.0 / (p - 1.0)) * kappa2;
  // Term n is delta^(p^n - 1); consecutive ratios delta^(p^n (p - 1)) shrink,
  // so the tail after term N is at most t_{N+1} / (1 - r_{N+1}).
  double sum = 0.0;
  double pn = p;  // p^n
  for (std::size_t n = 1;; ++n) {
    const double term = std::exp((pn - 1.0) * log_delta);
    sum += term;
    c.truncation_terms = n;
    const double next = std::exp((pn * p - 1.0) * log_delta);
    const double ratio = std::exp(pn * p * (p - 1.0) * log_delta);
    const double tail = next / (1.0 - ratio);
    c.truncation_error_bound = prefactor * tail;
    if (next < 1e-16 * sum && c.truncation_error_bound <= 1e-14) break;
    pn *= p;
    if (n > 10'000'000) throw ParameterError("bound_certificate: series converges too slowly");
  }
  c.series_constant = (1.0 + std::pow(kappa1, -1.0 / (p - 1.0)) * sum) * kappa2;
  return c;
}

/// prod_{n>=0} (1 + c delta^(p^n)), truncated once the next factor is within
/// 1e-16 of 1.
inline double product_constant(double c, double p, double delta) {
  if (!(c >= 0.0)) throw ParameterError("product_constant: c must be >= 0");
  if (!(p > 1.0)) throw ParameterError("product_constant: p must be > 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("product_constant: delta must lie in (0, 1)");
  const double log_delta = std::log(delta);
  double prod = 1.0;
  double pn = 1.0;
  for (std::size_t n = 0;; ++n) {
    const double factor = c * std::exp(pn * log_delta);
    if (factor < 1e-16) break;
    prod *= 1.0 + factor;
    pn *= p;
    if (n > 10'000'000) throw ParameterError("product_constant: product converges too slowly");
  }
  return prod;
}

// ---------------------------------------------------------------------------
// Polar repair

inline constexpr double kRepairDeltaCeiling = 1.0 - 1e-9;

struct RepairReport {
  double epsilon = 0.0;         ///< mult_defect of the input
  double delta = 0.0;           ///< unit_defect of the input
  double distance = 0.0;        ///< ||phi - psi||
  double psi_unit_defect = 0.0;
  double psi_mult_defect = 0.0;
  double mult_bound = 0.0;      ///< epsilon + 4 delta
  bool unitary_ok = false;      ///< psi_unit_defect <= 1e-11
  bool distance_ok = false;     ///< distance <= delta + 1e-10
  bool mult_ok = false;         ///< psi_mult_defect <= epsilon + 4 delta + 1e-9
  /// psi(x) is built from phi(x) alone (its polar factor), so psi(x) lies in
  /// the von Neumann algebra generated by phi(x). Structural, not measured.
  bool built_from_phi_alone = true;

  bool pass() const { return unitary_ok && distance_ok && mult_ok; }
};

struct Repaired {
  GroupMap psi;
  RepairReport report;
};

/// Replaces every phi(x) by the unitary factor of its polar decomposition.
/// Needs unit_defect(phi) < 1.
inline Repaired polar_repair(const GroupMap& phi) {
  RepairReport r;
  r.delta = unit_defect(phi).value;
  if (r.delta >= kRepairDeltaCeiling)
    throw NotRepairable(r.delta, "polar_repair: unitarity defect " + std::to_string(r.delta) +
                                     " is not below 1");
  r.epsilon = mult_defect(phi).value;
  GroupMap psi = GroupMap::generate(
      phi.domain(), [&](Element x) { return polar(phi(x)).u; }, "repair(" + phi.label() + ")");
  r.distance = distance(phi, psi);
  r.psi_unit_defect = unit_defect(psi).value;
  r.psi_mult_defect = mult_defect(psi).value;
  r.mult_bound = r.epsilon + 4.0 * r.delta;
  r.unitary_ok = r.psi_unit_defect <= 1e-11;
  r.distance_ok = r.distance <= r.delta + 1e-10;
  r.mult_ok = r.psi_mult_defect <= r.mult_bound + 1e-9;
  return {std::move(psi), r};
}

// ---------------------------------------------------------------------------
// Kazhdan averaging step

inline constexpr double kKazhdanUnitaryTol = 1e-9;

struct KazhdanReport {
  double epsilon = 0.0;          ///< mult_defect of the input
  double unital_deviation = 0.0; ///< ||psi(e) - I||
  double pd_min_eig = 0.0;
  double distance = 0.0;         ///< ||phi - psi||
  double unit_defect = 0.0;      ///< of psi
  double sharp_bound = 0.0;      ///< epsilon^2
  double crude_bound = 0.0;      ///< 2 epsilon^2
  bool unital_ok = false;
  bool pd_ok = false;
  bool distance_ok = false;
  bool sharp_ok = false;
  bool crude_ok = false;

  bool pass() const { return unital_ok && pd_ok && distance_ok && sharp_ok && crude_ok; }
};

struct Averaged {
  GroupMap psi;
  KazhdanReport report;
};

/// psi = average_pd(phi) for unitary-valued phi, with its certificates:
/// unital, positive definite, epsilon-close and epsilon^2-unitary.
inline Averaged kazhdan_step(const GroupMap& phi) {
  phi.domain().group("kazhdan_step");
  const double u = unit_defect(phi).value;
  if (u > kKazhdanUnitaryTol)
    throw PreconditionError("kazhdan_step: input is not unitary-valued (unit_defect " +
                            std::to_string(u) + ")");
  KazhdanReport r;
  r.epsilon = mult_defect(phi).value;
  GroupMap psi = average_pd(phi);
  r.unital_deviation = op_norm(psi(phi.domain().identity()) - identity(phi.dim()));
  r.pd_min_eig = pd_min_eig(psi);
  r.distance = distance(phi, psi);
  r.unit_defect = unit_defect(psi).value;
  r.sharp_bound = r.epsilon * r.epsilon;
  r.crude_bound = 2.0 * r.epsilon * r.epsilon;
  r.unital_ok = r.unital_deviation <= 1e-11;
  r.pd_ok = r.pd_min_eig >= -1e-9;
  r.distance_ok = r.distance <= r.epsilon + 1e-10;
  r.sharp_ok = r.unit_defect <= r.sharp_bound + 1e-10;
  r.crude_ok = r.unit_defect <= r.crude_bound + 1e-10;
  return {std::move(psi), r};
}

// ---------------------------------------------------------------------------
// Stabilization loop

/// Largest starting defect for which the 2 epsilon_0 distance certificate
/// is asserted; the loop contracts while epsilon < 0.2.
inline constexpr double kCertifiedEpsilon = 0.1;

struct IterationRecord {
  double epsilon_n = 0.0;      ///< mult_defect(phi_n)
  double delta_n = 0.0;        ///< unit_defect of the averaged phi_n
  double step_distance = 0.0;  ///< ||phi_n - phi_{n+1}||
};

struct StabilizationTrace {
  std::vector<IterationRecord> iterations;
  double epsilon0 = 0.0;
  double total_distance = 0.0;  ///< ||phi - pi||
  double final_defect = 0.0;    ///< mult_defect(pi)
  bool converged = false;
  bool certified_regime = false;  ///< epsilon0 <= 0.1
  double kazhdan_bound = 0.0;     ///< 2 epsilon0
  bool kazhdan_ok = false;        ///< total_distance <= 2 epsilon0 + 1e-9
  /// Largest epsilon_{n+1} / epsilon_n^2 and step / epsilon_n seen, over
  /// steps with epsilon_n >= 1e-6 (below that roundoff dominates).
  double measured_kappa1 = 0.0;
  double measured_kappa2 = 0.0;
  /// Pipeline constants kappa1 = 5, kappa2 = 1 + epsilon0, p = 2,
  /// delta = 5 epsilon0; present when delta lies in (0, 1).
  std::optional<BoundCertificate> theory;
  double series_bound = 0.0;  ///< theory->series_constant * epsilon0
};

/// Non-convergence within max_iter. Carries the trace for diagnosis.
class Diverged : public Error {
 public:
  explicit Diverged(StabilizationTrace trace)
      : Error("stabilize: no convergence after " + std::to_string(trace.iterations.size()) +
              " iterations (epsilon " + std::to_string(trace.final_defect) + ")"),
        trace_(std::move(trace)) {}

  const StabilizationTrace& trace() const { return trace_; }

 private:
  StabilizationTrace trace_;
};

struct Stabilized {
  GroupMap pi;
  StabilizationTrace trace;
};

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 50;

/// Iterates phi_{n+1} = polar_repair(kazhdan_step(phi_n)) from a
/// unitary-valued phi until mult_defect(phi_n) < tol. The returned trace has
/// one record per map measured, the last being the converged one.
inline Stabilized stabilize(const GroupMap& phi, double tol = kDefaultTol,
                            std::size_t max_iter = kDefaultMaxIter) {
  phi.domain().group("stabilize");
  if (!(tol > 0.0)) throw ParameterError("stabilize: tol must be > 0");
  if (max_iter < 1) throw ParameterError("stabilize: max_iter must be >= 1");
  const double u = unit_defect(phi).value;
  if (u > kKazhdanUnitaryTol)
    throw PreconditionError("stabilize: input is not unitary-valued (unit_defect " +
                            std::to_string(u) + ")");

  StabilizationTrace t;
  t.epsilon0 = mult_defect(phi).value;
  t.certified_regime = t.epsilon0 <= kCertifiedEpsilon;
  t.kazhdan_bound = 2.0 * t.epsilon0;
  if (t.epsilon0 > 0.0 && 5.0 * t.epsilon0 < 1.0) {
    t.theory = bound_certificate(5.0, 1.0 + t.epsilon0, 2.0, 5.0 * t.epsilon0);
    t.series_bound = t.theory->series_constant * t.epsilon0;
  }

  GroupMap current = phi;
  double eps = t.epsilon0;
  for (std::size_t n = 0; n < max_iter; ++n) {
    IterationRecord rec;
    rec.epsilon_n = eps;
    if (eps < tol) {
      t.iterations.push_back(rec);
      t.converged = true;
      break;
    }
    if (n + 1 == max_iter) {
      t.iterations.push_back(rec);
      break;
    }
    Averaged avg = kazhdan_step(current);
    rec.delta_n = avg.report.unit_defect;
    if (rec.delta_n >= kRepairDeltaCeiling) {
      t.iterations.push_back(rec);
      break;
    }
    Repaired rep = polar_repair(avg.psi);
    rec.step_distance = distance(current, rep.psi);
    const double next_eps = rep.report.psi_mult_defect;
    if (eps >= 1e-6) {
      t.measured_kappa1 = std::max(t.measured_kappa1, next_eps / (eps * eps));
      t.measured_kappa2 = std::max(t.measured_kappa2, rec.step_distance / eps);
    }
    t.iterations.push_back(rec);
    current = std::move(rep.psi);
    eps = next_eps;
  }
  t.final_defect = eps;
  t.total_distance = distance(phi, current);
  t.kazhdan_ok = t.total_distance <= t.kazhdan_bound + 1e-9;
  if (!t.converged) throw Diverged(std::move(t));
  return {current.with_label("stabilized(" + phi.label() + ")"), std::move(t)};
}

// ---------------------------------------------------------------------------
// Dixmier unitarization

struct DixmierReport {
  double input_mult_defect = 0.0;
  double psi_sup = 0.0;
  double unit_defect = 0.0;  ///< of pi
  double distance = 0.0;     ///< ||psi - pi||
  double bound = 0.0;        ///< ||psi|| (||psi||^2 - 1)
  bool unitary_ok = false;   ///< unit_defect <= 1e-9
  bool distance_ok = false;  ///< distance <= bound + 1e-8
  CMatrix averaged_gram;     ///< T = E_x psi(x)^* psi(x)
  CMatrix conjugator;        ///< S = T^{1/2}

  bool pass() const { return unitary_ok && distance_ok; }
};

struct Unitarized {
  GroupMap pi;
  DixmierReport report;
};

/// pi(x) = S psi(x) S^{-1} with S = (E_x psi(x)^* psi(x))^{1/2}, for an exact
/// representation psi with invertible values.
inline Unitarized dixmier_unitarize(const GroupMap& psi) {
  const FiniteGroup& g = psi.domain().group("dixmier_unitarize");
  DixmierReport r;
  r.input_mult_defect = mult_defect(psi).value;
  if (r.input_mult_defect > 1e-9)
    throw PreconditionError("dixmier_unitarize: input is not a representation (mult_defect " +
                            std::to_string(r.input_mult_defect) + ")");
  CMatrix t = zeros(psi.dim());
  for (Element x = 0; x < g.order(); ++x) t.noalias() += psi(x).adjoint() * psi(x);
  t /= static_cast<double>(g.order());
  t = (0.5 * (t + t.adjoint())).eval();
  const RVector sv = singular_values(t);
  if (sv(sv.size() - 1) < kPolarSigmaMinTol)
    throw SingularInput("dixmier_unitarize: averaged Gram operator is singular");
  const CMatrix s = psd_sqrt(t);
  const CMatrix s_inv = s.inverse();
  GroupMap pi = GroupMap::generate(
      psi.domain(), [&](Element x) -> CMatrix { return s * psi(x) * s_inv; },
      "dixmier(" + psi.label() + ")");
  r.psi_sup = sup_norm(psi);
  r.unit_defect = unit_defect(pi).value;
  r.distance = distance(psi, pi);
  r.bound = r.psi_sup * (r.psi_sup * r.psi_sup - 1.0);
  r.unitary_ok = r.unit_defect <= 1e-9;
  r.distance_ok = r.distance <= r.bound + 1e-8;
  r.averaged_gram = std::move(t);
  r.conjugator = s;
  return {std::move(pi), std::move(r)};
}

}  // namespace ulamlab
