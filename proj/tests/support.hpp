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

// Test-side reference computations. These deliberately avoid the library's
// own norm and defect routines: every quantity is rebuilt from a plain SVD or
// eigensolve and explicit loops.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

#include "ulamlab/gmap.hpp"

namespace ulamlab::oracle {

inline double top_sv(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

inline CMatrix eye(Eigen::Index d) { return CMatrix::Identity(d, d); }

/// Scalar map on Z_n (or any domain) from a list of complex values.
inline GroupMap scalar_map(const Domain& d, std::vector<Complex> v) {
  std::vector<CMatrix> m;
  for (Complex z : v) m.push_back(CMatrix::Constant(1, 1, z));
  return GroupMap(d, std::move(m));
}

inline double mult_defect(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group();
  double worst = 0.0;
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      worst = std::max(worst, top_sv(phi(g.mul(x, y)) - phi(x) * phi(y)));
  return worst;
}

inline double unit_defect(const GroupMap& phi) {
  const auto d = static_cast<Eigen::Index>(phi.dim());
  double worst = 0.0;
  for (const CMatrix& v : phi.values())
    worst = std::max({worst, top_sv(eye(d) - v * v.adjoint()), top_sv(eye(d) - v.adjoint() * v)});
  return worst;
}

inline double distance(const GroupMap& a, const GroupMap& b) {
  double worst = 0.0;
  for (Element x = 0; x < a.size(); ++x) worst = std::max(worst, top_sv(a(x) - b(x)));
  return worst;
}

/// Smallest eigenvalue of the block Gram (phi(x_i^-1 x_j)), assembled by
/// hand and symmetrized.
inline double gram_min_eig(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group();
  const auto d = static_cast<Eigen::Index>(phi.dim());
  const auto n = static_cast<Eigen::Index>(g.order());
  CMatrix big(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      big.block(i * d, j * d, d, d) = phi(g.mul(g.inv(static_cast<Element>(i)), static_cast<Element>(j)));
  const CMatrix h = 0.5 * (big + big.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// psi(x) = (1/n) sum_y phi(xy) phi(y)^*, by explicit summation.
inline GroupMap average(const GroupMap& phi) {
  const FiniteGroup& g = phi.domain().group();
  std::vector<CMatrix> out;
  for (Element x = 0; x < g.order(); ++x) {
    CMatrix acc = CMatrix::Zero(phi(0).rows(), phi(0).cols());
    for (Element y = 0; y < g.order(); ++y) acc += phi(g.mul(x, y)) * phi(y).adjoint();
    out.push_back(acc / static_cast<double>(g.order()));
  }
  return GroupMap(phi.domain(), std::move(out));
}

}  // namespace ulamlab::oracle
