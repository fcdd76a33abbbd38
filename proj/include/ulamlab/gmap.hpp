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

/// \file gmap.hpp
/// Maps from a group (or a free-group ball) into M_d(C), and their defects:
/// multiplicativity, unitarity, isometry, sup norm, distance and positive
/// definiteness.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ulamlab/groups.hpp"
#include "ulamlab/linalg.hpp"

namespace ulamlab {

/// The domain of a GroupMap: either a finite group or a free-group ball.
/// Shared and immutable.
class Domain {
 public:
  Domain(FiniteGroup g) : group_(std::make_shared<const FiniteGroup>(std::move(g))) {}
  Domain(FreeBall b) : ball_(std::make_shared<const FreeBall>(std::move(b))) {}
  Domain(std::shared_ptr<const FiniteGroup> g) : group_(std::move(g)) {}
  Domain(std::shared_ptr<const FreeBall> b) : ball_(std::move(b)) {}

  bool is_group() const { return group_ != nullptr; }
  bool is_ball() const { return ball_ != nullptr; }

  /// Throws UnsupportedDomain for balls.
  const FiniteGroup& group(const char* what = "operation") const {
    if (!group_)
      throw UnsupportedDomain(std::string(what) + ": needs a finite group (an invariant mean); " +
                              ball_->label() + " has none");
    return *group_;
  }

  const FreeBall& ball() const {
    if (!ball_) throw UnsupportedDomain("domain is not a free-group ball");
    return *ball_;
  }

  std::size_t size() const { return group_ ? group_->order() : ball_->size(); }
  Element identity() const { return group_ ? group_->identity() : ball_->identity(); }
  Element inv(Element a) const { return group_ ? group_->inv(a) : ball_->inv(a); }
  std::string label() const { return group_ ? group_->label() : ball_->label(); }

  /// Calls f(x, y, xy) on every pair with a defined product: all of G x G on
  /// a finite group, the recorded pairs on a ball.
  template <typename F>
  void for_each_pair(F&& f) const {
    if (group_) {
      const std::size_t n = group_->order();
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) f(x, y, group_->mul(x, y));
    } else {
      for (const auto& p : ball_->pairs()) f(p.x, p.y, p.xy);
    }
  }

  friend bool operator==(const Domain& a, const Domain& b) {
    if (a.group_ && b.group_) return a.group_ == b.group_ || *a.group_ == *b.group_;
    if (a.ball_ && b.ball_)
      return a.ball_ == b.ball_ ||
             (a.ball_->rank() == b.ball_->rank() && a.ball_->radius() == b.ball_->radius());
    return false;
  }

 private:
  std::shared_ptr<const FiniteGroup> group_;
  std::shared_ptr<const FreeBall> ball_;
};

/// A map x -> phi(x) in M_d(C), one matrix per domain element.
class GroupMap {
 public:
  GroupMap(Domain domain, std::vector<CMatrix> values, std::string label = {})
      : domain_(std::move(domain)), values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() != domain_.size())
      throw ShapeError("GroupMap: " + std::to_string(values_.size()) + " values for " +
                       std::to_string(domain_.size()) + " elements");
    for (const auto& v : values_) check_square_finite(v, "GroupMap");
    dim_ = static_cast<std::size_t>(values_.front().rows());
    for (const auto& v : values_)
      if (static_cast<std::size_t>(v.rows()) != dim_)
        throw ShapeError("GroupMap: values of mixed dimension");
  }

  /// x -> f(x) for every element.
  template <typename F>
  static GroupMap generate(Domain domain, F&& f, std::string label = {}) {
    std::vector<CMatrix> values;
    values.reserve(domain.size());
    for (Element x = 0; x < domain.size(); ++x) values.push_back(f(x));
    return GroupMap(std::move(domain), std::move(values), std::move(label));
  }

  /// Constant map x -> c.
  static GroupMap constant(Domain domain, const CMatrix& c, std::string label = {}) {
    return generate(std::move(domain), [&](Element) { return c; }, std::move(label));
  }

  const Domain& domain() const { return domain_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  const CMatrix& operator()(Element x) const { return values_[x]; }
  const std::vector<CMatrix>& values() const { return values_; }
  const std::string& label() const { return label_; }

  GroupMap with_label(std::string label) const {
    GroupMap m = *this;
    m.label_ = std::move(label);
    return m;
  }

 private:
  Domain domain_;
  std::vector<CMatrix> values_;
  std::size_t dim_ = 0;
  std::string label_;
};

inline void check_same_shape(const GroupMap& a, const GroupMap& b, const char* what) {
  if (a.dim() != b.dim())
    throw ShapeError(std::string(what) + ": dimensions differ (" + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()) + ")");
  if (!(a.domain() == b.domain()))
    throw ShapeError(std::string(what) + ": domains differ (" + a.domain().label() + " vs " +
                     b.domain().label() + ")");
}

struct PairWitness {
  double value = 0.0;
  Element x = 0;
  Element y = 0;
};

struct ElementWitness {
  double value = 0.0;
  Element x = 0;
};

/// max over admissible (x, y) of ||phi(xy) - phi(x) phi(y)||.
inline PairWitness mult_defect(const GroupMap& phi, const NormKind& kind = NormKind::op()) {
  kind.validate(phi.dim());
  PairWitness w{-1.0, 0, 0};
  phi.domain().for_each_pair([&](Element x, Element y, Element xy) {
    const double v = uinorm(phi(xy) - phi(x) * phi(y), kind);
    if (v > w.value) w = {v, x, y};
  });
  if (w.value < 0.0) w = {0.0, phi.domain().identity(), phi.domain().identity()};
  return w;
}

/// max over x of max(||I - phi(x) phi(x)^*||, ||I - phi(x)^* phi(x)||).
inline ElementWitness unit_defect(const GroupMap& phi) {
  ElementWitness w{-1.0, 0};
  for (Element x = 0; x < phi.size(); ++x) {
    const double v = unitarity_defect(phi(x));
    if (v > w.value) w = {v, x};
  }
  return w;
}

/// max over x of ||I - phi(x)^* phi(x)||.
inline double iso_defect(const GroupMap& phi) {
  double v = 0.0;
  for (Element x = 0; x < phi.size(); ++x) v = std::max(v, isometry_defect(phi(x)));
  return v;
}

/// sup over x of ||phi(x)||.
inline double sup_norm(const GroupMap& phi) {
  double v = 0.0;
  for (Element x = 0; x < phi.size(); ++x) v = std::max(v, op_norm(phi(x)));
  return v;
}

/// max over x of ||phi(x) - psi(x)||.
inline double distance(const GroupMap& phi, const GroupMap& psi,
                       const NormKind& kind = NormKind::op()) {
  check_same_shape(phi, psi, "distance");
  kind.validate(phi.dim());
  double v = 0.0;
  for (Element x = 0; x < phi.size(); ++x) v = std::max(v, uinorm(phi(x) - psi(x), kind));
  return v;
}

inline GroupMap adjoint_map(const GroupMap& phi) {
  return GroupMap::generate(
      phi.domain(), [&](Element x) -> CMatrix { return phi(x).adjoint(); },
      phi.label().empty() ? std::string{} : phi.label() + "*");
}

inline constexpr double kGramHermitianTol = 1e-8;
inline constexpr double kPdAcceptTol = 1e-10;

/// The (n d) x (n d) block matrix with block (i, j) = phi(x_i^{-1} x_j) over
/// the whole group.
inline CMatrix pd_gram(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group("pd_min_eig");
  const auto n = static_cast<Eigen::Index>(g.order());
  const auto d = static_cast<Eigen::Index>(phi.dim());
  CMatrix gram(n * d, n * d);
  for (Element i = 0; i < g.order(); ++i)
    for (Element j = 0; j < g.order(); ++j)
      gram.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
          phi(g.mul(g.inv(i), j));
  return gram;
}

/// Smallest eigenvalue of the positive-definiteness Gram matrix. A Gram
/// matrix that is not Hermitian within 1e-8 cannot be PSD; -infinity is
/// returned for it.
inline double pd_min_eig(const GroupMap& phi) {
  const CMatrix gram = pd_gram(phi);
  if (hermitian_residual(gram) > kGramHermitianTol)
    return -std::numeric_limits<double>::infinity();
  return herm_min_eig(gram, kGramHermitianTol);
}

inline bool is_positive_definite(const GroupMap& phi, double tol = kPdAcceptTol) {
  return pd_min_eig(phi) >= -tol;
}

/// Every defect of a map, measured in one pass, with witnesses.
struct DefectReport {
  double epsilon = 0.0;
  double delta = 0.0;
  double iso_delta = 0.0;
  double sup_norm = 0.0;
  NormKind norm_kind;
  std::pair<Element, Element> witness_pair{0, 0};
  Element witness_element = 0;
  /// Set on free-group balls: the sup runs over in-ball pairs only.
  bool restricted = false;
};

inline DefectReport defect_report(const GroupMap& phi, const NormKind& kind = NormKind::op()) {
  DefectReport r;
  const auto m = mult_defect(phi, kind);
  const auto u = unit_defect(phi);
  r.epsilon = m.value;
  r.witness_pair = {m.x, m.y};
  r.delta = u.value;
  r.witness_element = u.x;
  r.iso_delta = iso_defect(phi);
  r.sup_norm = sup_norm(phi);
  r.norm_kind = kind;
  r.restricted = phi.domain().is_ball();
  return r;
}

inline constexpr double kBoundSlack = 1e-10;

/// Measured defects of psi against the bounds predicted from phi and
/// eta = ||phi - psi|| by the perturbation estimates.
struct PerturbationReport {
  double eta = 0.0;
  double phi_sup = 0.0;
  double psi_sup = 0.0;
  double measured_iso = 0.0;
  double measured_unit = 0.0;
  double measured_mult = 0.0;
  double predicted_iso = 0.0;
  double predicted_unit = 0.0;
  double predicted_mult = 0.0;
  bool iso_ok = false;
  bool unit_ok = false;
  bool mult_ok = false;

  bool all_ok() const { return iso_ok && unit_ok && mult_ok; }
  double worst_slack() const {
    return std::min({predicted_iso - measured_iso, predicted_unit - measured_unit,
                     predicted_mult - measured_mult});
  }
};

inline PerturbationReport perturbation_bound_report(const GroupMap& phi, const GroupMap& psi) {
  check_same_shape(phi, psi, "perturbation_bound_report");
  PerturbationReport r;
  r.eta = distance(phi, psi);
  r.phi_sup = sup_norm(phi);
  r.psi_sup = sup_norm(psi);
  r.measured_iso = iso_defect(psi);
  r.measured_unit = unit_defect(psi).value;
  r.measured_mult = mult_defect(psi).value;
  r.predicted_iso = iso_defect(phi) + (r.phi_sup + r.psi_sup) * r.eta;
  r.predicted_unit = unit_defect(phi).value + (r.phi_sup + r.psi_sup) * r.eta;
  r.predicted_mult = mult_defect(phi).value + (1.0 + r.phi_sup + r.psi_sup) * r.eta;
  r.iso_ok = r.measured_iso <= r.predicted_iso + kBoundSlack;
  r.unit_ok = r.measured_unit <= r.predicted_unit + kBoundSlack;
  r.mult_ok = r.measured_mult <= r.predicted_mult + kBoundSlack;
  return r;
}

}  // namespace ulamlab
