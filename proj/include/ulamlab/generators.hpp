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

/// \file generators.hpp
/// Reproducible instance factories: exact unitary representations, controlled
/// perturbations, compressions U^* pi U, similarity twists and random bounded
/// maps. Every factory is a pure function of its arguments and seed.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ulamlab/gmap.hpp"
#include "ulamlab/rng.hpp"

namespace ulamlab {

inline constexpr double kUnitaryInputTol = 1e-10;

namespace detail {

inline void require_unitary(const GroupMap& pi, const char* what, double tol = kUnitaryInputTol) {
  const double u = unit_defect(pi).value;
  if (u > tol)
    throw PreconditionError(std::string(what) + ": base map is not unitary-valued (unit_defect " +
                            std::to_string(u) + ")");
}

}  // namespace detail

/// d x d matrix of i.i.d. standard complex Gaussians (real and imaginary
/// parts each N(0, 1/2)).
inline CMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  CMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const double s = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(i, j) = Complex(s * re, s * im);
    }
  return a;
}

/// Hermitian A + A^* rescaled to operator norm exactly `norm`.
inline CMatrix random_hermitian(Rng& rng, std::size_t dim, double norm) {
  const CMatrix a = gaussian_matrix(rng, dim, dim);
  CMatrix h = a + a.adjoint();
  const double n = op_norm(h);
  if (n == 0.0 || norm == 0.0) return zeros(dim);
  return (norm / n) * h;
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phase fix).
inline CMatrix random_unitary(Rng& rng, std::size_t dim) {
  const CMatrix a = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

/// dim x cols matrix with orthonormal columns.
inline CMatrix random_isometry(Rng& rng, std::size_t dim, std::size_t cols) {
  const CMatrix u = random_unitary(rng, dim);
  return u.leftCols(static_cast<Eigen::Index>(cols));
}

/// Left regular representation: pi(x) e_y = e_{xy}.
inline GroupMap regular_rep(const Domain& domain) {
  const FiniteGroup& g = domain.group("regular_rep");
  if (g.order() > 256)
    throw ParameterError("regular_rep: order " + std::to_string(g.order()) +
                         " exceeds the dimension cap 256");
  const auto n = static_cast<Eigen::Index>(g.order());
  return GroupMap::generate(
      domain,
      [&](Element x) {
        CMatrix m = CMatrix::Zero(n, n);
        for (Element y = 0; y < g.order(); ++y)
          m(static_cast<Eigen::Index>(g.mul(x, y)), static_cast<Eigen::Index>(y)) = 1.0;
        return m;
      },
      "regular(" + g.label() + ")");
}

/// x -> I_dim.
inline GroupMap trivial_rep(const Domain& domain, std::size_t dim = 1) {
  return GroupMap::constant(domain, identity(dim), "trivial(" + domain.label() + ")");
}

/// One-dimensional j -> exp(2 pi i j k / n) on the standard Z_n table.
inline GroupMap character_rep(const Domain& domain, long k) {
  const FiniteGroup& g = domain.group("character_rep");
  if (!g.is_standard_cyclic())
    throw ParameterError("character_rep: " + g.label() + " is not the cyclic table Z_n");
  const auto n = static_cast<long>(g.order());
  const long kk = ((k % n) + n) % n;
  return GroupMap::generate(
      domain,
      [&](Element j) {
        CMatrix m(1, 1);
        // Reduce j k mod n first so the phase is exact at quarter turns.
        const long r = (static_cast<long>(j) * kk) % n;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
        if (4 * r == n)
          m(0, 0) = Complex(0.0, 1.0);
        else if (2 * r == n)
          m(0, 0) = Complex(-1.0, 0.0);
        else if (4 * r == 3 * n)
          m(0, 0) = Complex(0.0, -1.0);
        else
          m(0, 0) = std::polar(1.0, angle);
        return m;
      },
      "character(" + g.label() + "," + std::to_string(k) + ")");
}

/// Block-diagonal direct sum over a common domain.
inline GroupMap direct_sum(std::span<const GroupMap> parts) {
  if (parts.empty()) throw ParameterError("direct_sum: no summands");
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (!(p.domain() == parts[0].domain()))
      throw ShapeError("direct_sum: summands live on different domains");
    total += p.dim();
  }
  std::string label = "sum(";
  for (std::size_t i = 0; i < parts.size(); ++i)
    label += (i ? "," : "") + parts[i].label();
  label += ")";
  return GroupMap::generate(
      parts[0].domain(),
      [&](Element x) {
        CMatrix m = zeros(total);
        Eigen::Index off = 0;
        for (const auto& p : parts) {
          const auto d = static_cast<Eigen::Index>(p.dim());
          m.block(off, off, d, d) = p(x);
          off += d;
        }
        return m;
      },
      label);
}

/// x -> w pi(x) w^*.
inline GroupMap conjugate_by(const GroupMap& pi, const CMatrix& w) {
  if (static_cast<std::size_t>(w.rows()) != pi.dim() || w.rows() != w.cols())
    throw ShapeError("conjugate_by: conjugator has the wrong shape");
  return GroupMap::generate(
      pi.domain(), [&](Element x) -> CMatrix { return w * pi(x) * w.adjoint(); }, pi.label());
}

/// x -> W pi(x) W^* with W a seeded Haar unitary.
inline GroupMap conjugated(const GroupMap& pi, std::uint64_t seed) {
  Rng rng(seed);
  return conjugate_by(pi, random_unitary(rng, pi.dim()))
      .with_label("conj(" + pi.label() + "," + std::to_string(seed) + ")");
}

/// An exact unitary representation of any dimension on a finite group:
/// copies of the regular representation topped up with one-dimensional
/// summands (random characters on Z_n, the trivial one otherwise), then
/// conjugated by a seeded Haar unitary.
inline GroupMap random_unitary_rep(const Domain& domain, std::size_t dim, std::uint64_t seed) {
  const FiniteGroup& g = domain.group("random_unitary_rep");
  if (dim < 1) throw ParameterError("random_unitary_rep: dim must be >= 1");
  Rng rng(seed);
  Rng pick = rng.split(1);
  std::vector<GroupMap> parts;
  std::size_t left = dim;
  const bool cyclic_table = g.is_standard_cyclic();
  while (left >= g.order() && g.order() > 1 && g.order() <= 256) {
    parts.push_back(regular_rep(domain));
    left -= g.order();
  }
  for (; left > 0; --left) {
    if (cyclic_table)
      parts.push_back(character_rep(domain, static_cast<long>(pick.next_u64() % g.order())));
    else
      parts.push_back(trivial_rep(domain, 1));
  }
  const GroupMap sum = direct_sum(parts);
  Rng conj = rng.split(2);
  return conjugate_by(sum, random_unitary(conj, dim))
      .with_label("rep(" + g.label() + ",d=" + std::to_string(dim) + ",seed=" +
                  std::to_string(seed) + ")");
}

/// phi(x) = pi(x) exp(i H_x) with explicit Hermitian generators (H_e should
/// be zero for a unital result).
inline GroupMap perturb_with(const GroupMap& pi, std::span<const CMatrix> generators) {
  if (generators.size() != pi.size())
    throw ShapeError("perturb_with: need one generator per element");
  return GroupMap::generate(
      pi.domain(), [&](Element x) -> CMatrix { return pi(x) * unitary_exp(generators[x]); },
      pi.label());
}

/// phi(x) = pi(x) exp(i H_x), ||H_x|| = theta for x != e and H_e = 0.
inline GroupMap perturb_unitary(const GroupMap& pi, double theta, std::uint64_t seed) {
  if (!(theta >= 0.0) || theta > 1.0)
    throw ParameterError("perturb_unitary: theta must lie in [0, 1]");
  detail::require_unitary(pi, "perturb_unitary");
  const Rng root(seed);
  std::vector<CMatrix> gens;
  gens.reserve(pi.size());
  const Element e = pi.domain().identity();
  for (Element x = 0; x < pi.size(); ++x) {
    if (x == e) {
      gens.push_back(zeros(pi.dim()));
    } else {
      Rng rng = root.split(x);
      gens.push_back(random_hermitian(rng, pi.dim(), theta));
    }
  }
  return perturb_with(pi, gens).with_label("perturbed(" + pi.label() + "," +
                                           std::to_string(theta) + "," + std::to_string(seed) +
                                           ")");
}

/// x -> U^* pi(x) U for an explicit dim x sub_dim contraction U.
inline GroupMap compress_with(const GroupMap& pi, const CMatrix& u) {
  if (static_cast<std::size_t>(u.rows()) != pi.dim() || u.cols() < 1 || u.cols() > u.rows())
    throw ShapeError("compress_with: U must be dim x sub_dim with 1 <= sub_dim <= dim");
  return GroupMap::generate(
      pi.domain(), [&](Element x) -> CMatrix { return u.adjoint() * pi(x) * u; }, pi.label());
}

/// Compression by a seeded isometry scaled by `scale` in (0, 1]; scale 1
/// gives a unital map.
inline GroupMap compress_scaled(const GroupMap& pi, std::size_t sub_dim, std::uint64_t seed,
                                double scale) {
  if (sub_dim < 1 || sub_dim > pi.dim())
    throw ShapeError("compress_rep: sub_dim " + std::to_string(sub_dim) + " outside [1, " +
                     std::to_string(pi.dim()) + "]");
  if (!(scale > 0.0 && scale <= 1.0))
    throw ParameterError("compress_rep: scale must lie in (0, 1]");
  detail::require_unitary(pi, "compress_rep");
  Rng rng(seed);
  const CMatrix w = random_isometry(rng, pi.dim(), sub_dim);
  return compress_with(pi, scale * w)
      .with_label("compressed(" + pi.label() + "," + std::to_string(sub_dim) + "," +
                  std::to_string(seed) + ")");
}

/// x -> U^* pi(x) U with U a seeded random contraction: an isometry scaled by
/// a factor drawn uniformly from (0, 1].
inline GroupMap compress_rep(const GroupMap& pi, std::size_t sub_dim, std::uint64_t seed) {
  Rng rng = Rng(seed).split(0x5ca1e);
  return compress_scaled(pi, sub_dim, seed, rng.uniform_open0());
}

struct Twisted {
  GroupMap map;
  double cond = 1.0;  ///< condition number of the conjugator V
};

/// x -> V pi(x) V^{-1} for an explicit invertible V.
inline Twisted twist_with(const GroupMap& pi, const CMatrix& v) {
  if (static_cast<std::size_t>(v.rows()) != pi.dim() || v.rows() != v.cols())
    throw ShapeError("similarity_twist: V has the wrong shape");
  const RVector s = singular_values(v);
  if (s(s.size() - 1) <= 0.0) throw SingularInput("similarity_twist: V is singular");
  const CMatrix vinv = v.inverse();
  Twisted out{GroupMap::generate(
                  pi.domain(), [&](Element x) -> CMatrix { return v * pi(x) * vinv; }, pi.label()),
              s(0) / s(s.size() - 1)};
  return out;
}

/// Seeded V = W1 diag(s) W2 with log s_i uniform in [-log(bound)/2,
/// log(bound)/2], so cond(V) <= bound.
inline Twisted similarity_twist(const GroupMap& pi, double bound, std::uint64_t seed) {
  if (!(bound >= 1.0)) throw ParameterError("similarity_twist: bound must be >= 1");
  detail::require_unitary(pi, "similarity_twist");
  if (pi.domain().is_group() && mult_defect(pi).value > 1e-9)
    throw PreconditionError("similarity_twist: base map is not a representation");
  Rng rng(seed);
  Rng left = rng.split(1), right = rng.split(2), spread = rng.split(3);
  const std::size_t d = pi.dim();
  const CMatrix w1 = random_unitary(left, d);
  const CMatrix w2 = random_unitary(right, d);
  Eigen::VectorXcd s(static_cast<Eigen::Index>(d));
  const double half = 0.5 * std::log(bound);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    s(i) = std::exp((2.0 * spread.uniform() - 1.0) * half);
  Twisted t = twist_with(pi, w1 * s.asDiagonal() * w2);
  t.map = t.map.with_label("twisted(" + pi.label() + "," + std::to_string(bound) + "," +
                           std::to_string(seed) + ")");
  return t;
}

/// Seeded map with i.i.d. complex Gaussian entries, rescaled so that
/// sup_norm equals `sup` (zero map for sup = 0).
inline GroupMap random_map(const Domain& domain, std::size_t dim, double sup, std::uint64_t seed) {
  if (!(sup >= 0.0)) throw ParameterError("random_map: sup must be >= 0");
  if (dim < 1) throw ParameterError("random_map: dim must be >= 1");
  const Rng root(seed);
  std::vector<CMatrix> values;
  values.reserve(domain.size());
  double top = 0.0;
  for (Element x = 0; x < domain.size(); ++x) {
    Rng rng = root.split(x);
    values.push_back(gaussian_matrix(rng, dim, dim));
    top = std::max(top, op_norm(values.back()));
  }
  const double scale = (top > 0.0 && sup > 0.0) ? sup / top : 0.0;
  for (auto& v : values) v *= scale;
  return GroupMap(domain, std::move(values),
                  "random(" + domain.label() + "," + std::to_string(seed) + ")");
}

}  // namespace ulamlab
