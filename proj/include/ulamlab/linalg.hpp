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

/// \file linalg.hpp
/// Dense complex linear algebra on M_d(C): unitarily invariant norms, the
/// polar decomposition, Hermitian eigenvalues and the matrix functions the
/// rest of the library is built on. Everything is a full dense decomposition;
/// dimensions are small (<= 256).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ulamlab/errors.hpp"

namespace ulamlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPolarSigmaMinTol = 1e-8;

inline CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim),
                           static_cast<Eigen::Index>(dim));
}

inline CMatrix zeros(std::size_t dim) {
  return CMatrix::Zero(static_cast<Eigen::Index>(dim),
                       static_cast<Eigen::Index>(dim));
}

inline bool all_finite(const CMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
        return false;
  return true;
}

/// Throws ShapeError unless `a` is a non-empty square matrix with finite
/// entries.
inline void check_square_finite(const CMatrix& a, const char* what) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (!all_finite(a))
    throw ShapeError(std::string(what) + ": non-finite entry");
}

/// Tag for a unitarily invariant norm.
///
/// Schatten p may be +infinity (equal to the operator norm). The
/// trace_normalized flag weighs singular values by 1/dim before aggregation;
/// it only affects Schatten kinds.
struct NormKind {
  enum class Tag { kOperator, kSchatten, kKyFan };

  Tag tag = Tag::kOperator;
  double p = 1.0;
  std::size_t k = 1;
  bool trace_normalized = false;

  static NormKind op() { return {}; }
  static NormKind schatten(double p, bool normalized = false) {
    return {Tag::kSchatten, p, 1, normalized};
  }
  static NormKind ky_fan(std::size_t k) { return {Tag::kKyFan, 1.0, k, false}; }

  /// Throws ParameterError if the kind cannot be evaluated at `dim`.
  void validate(std::size_t dim) const {
    switch (tag) {
      case Tag::kOperator:
        return;
      case Tag::kSchatten:
        if (!(p >= 1.0))
          throw ParameterError("schatten norm needs p >= 1, got " + std::to_string(p));
        return;
      case Tag::kKyFan:
        if (k < 1 || k > dim)
          throw ParameterError("ky_fan norm needs 1 <= k <= " + std::to_string(dim) +
                               ", got " + std::to_string(k));
        return;
    }
  }

  /// "operator", "schatten:2", "schatten:2:normalized", "schatten:inf",
  /// "kyfan:3".
  std::string to_string() const {
    switch (tag) {
      case Tag::kOperator:
        return "operator";
      case Tag::kSchatten: {
        std::string s = "schatten:";
        if (std::isinf(p)) {
          s += "inf";
        } else {
          std::string num = std::to_string(p);
          num.erase(num.find_last_not_of('0') + 1);
          if (!num.empty() && num.back() == '.') num.pop_back();
          s += num;
        }
        if (trace_normalized) s += ":normalized";
        return s;
      }
      case Tag::kKyFan:
        return "kyfan:" + std::to_string(k);
    }
    return "operator";
  }

  static NormKind parse(const std::string& text) {
    if (text == "operator" || text == "op") return op();
    auto fields = std::vector<std::string>{};
    std::size_t start = 0;
    while (true) {
      auto pos = text.find(':', start);
      fields.push_back(text.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    try {
      if (fields[0] == "schatten" && (fields.size() == 2 || fields.size() == 3)) {
        bool normalized = false;
        if (fields.size() == 3) {
          if (fields[2] != "normalized")
            throw ParameterError("unknown schatten modifier '" + fields[2] + "'");
          normalized = true;
        }
        double p = (fields[1] == "inf") ? std::numeric_limits<double>::infinity()
                                        : std::stod(fields[1]);
        auto kind = schatten(p, normalized);
        if (!(p >= 1.0)) throw ParameterError("schatten norm needs p >= 1");
        return kind;
      }
      if (fields[0] == "kyfan" && fields.size() == 2) {
        long k = std::stol(fields[1]);
        if (k < 1) throw ParameterError("ky_fan norm needs k >= 1");
        return ky_fan(static_cast<std::size_t>(k));
      }
    } catch (const std::logic_error&) {
      throw ParameterError("malformed norm '" + text + "'");
    }
    throw ParameterError("unknown norm '" + text + "'");
  }

  friend bool operator==(const NormKind&, const NormKind&) = default;
};

/// Singular values in decreasing order.
inline RVector singular_values(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues();
}

/// Largest singular value, taken as sqrt(lambda_max(a^* a)).
inline double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  CMatrix gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  double top = eig.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

/// Symmetric-gauge value of the singular values of `a`.
inline double uinorm(const CMatrix& a, const NormKind& kind) {
  const auto dim = static_cast<std::size_t>(a.rows());
  kind.validate(dim);
  switch (kind.tag) {
    case NormKind::Tag::kOperator:
      return op_norm(a);
    case NormKind::Tag::kSchatten: {
      if (std::isinf(kind.p)) return op_norm(a);
      const RVector s = singular_values(a);
      const double w = kind.trace_normalized ? 1.0 / static_cast<double>(dim) : 1.0;
      // Factor out the largest value so high powers do not underflow.
      const double top = s.size() > 0 ? s(0) : 0.0;
      if (top == 0.0) return 0.0;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < s.size(); ++i) acc += w * std::pow(s(i) / top, kind.p);
      return top * std::pow(acc, 1.0 / kind.p);
    }
    case NormKind::Tag::kKyFan: {
      const RVector s = singular_values(a);
      double acc = 0.0;
      for (std::size_t i = 0; i < kind.k; ++i) acc += s(static_cast<Eigen::Index>(i));
      return acc;
    }
  }
  return op_norm(a);
}

struct Polar {
  CMatrix u;  ///< unitary factor
  CMatrix p;  ///< positive part |a|
};

/// a = u * p with u unitary and p = (a^* a)^{1/2}.
///
/// Throws SingularInput when the smallest singular value is below
/// `sigma_min_tol`: the unitary factor is then not determined by `a`.
inline Polar polar(const CMatrix& a, double sigma_min_tol = kPolarSigmaMinTol) {
  check_square_finite(a, "polar");
  if (!(sigma_min_tol > 0.0)) throw ParameterError("polar: sigma_min_tol must be > 0");
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin < sigma_min_tol)
    throw SingularInput("polar: smallest singular value " + std::to_string(smin) +
                        " below cutoff " + std::to_string(sigma_min_tol));
  const CMatrix& w = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  Polar out;
  out.u = w * v.adjoint();
  out.p = v * s.cast<Complex>().asDiagonal() * v.adjoint();
  out.p = (0.5 * (out.p + out.p.adjoint())).eval();
  return out;
}

/// ||h - h^*|| in operator norm. The Frobenius norm bounds it from above and
/// settles the common case without an eigensolve.
inline double hermitian_residual(const CMatrix& h) {
  const CMatrix skew = h - h.adjoint();
  const double fro = skew.norm();
  if (fro <= kHermitianTol) return fro;
  return op_norm(skew);
}

namespace detail {

inline CMatrix symmetrized(const CMatrix& h, double tol, const char* what) {
  check_square_finite(h, what);
  const double r = hermitian_residual(h);
  if (r > tol)
    throw ShapeError(std::string(what) + ": input is not Hermitian (||h - h*|| = " +
                     std::to_string(r) + ")");
  return 0.5 * (h + h.adjoint());
}

}  // namespace detail

/// Smallest eigenvalue of (h + h^*)/2. `h` must be Hermitian within `herm_tol`.
inline double herm_min_eig(const CMatrix& h, double herm_tol = kHermitianTol) {
  const CMatrix s = detail::symmetrized(h, herm_tol, "herm_min_eig");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-psd_tol, 0) are clamped to zero.
inline CMatrix psd_sqrt(const CMatrix& h, double psd_tol = kPsdTol) {
  const CMatrix s = detail::symmetrized(h, kHermitianTol, "psd_sqrt");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(s);
  RVector lambda = eig.eigenvalues();
  if (lambda(0) < -psd_tol)
    throw NotPSD("psd_sqrt: eigenvalue " + std::to_string(lambda(0)) + " below -" +
                 std::to_string(psd_tol));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  const CMatrix& v = eig.eigenvectors();
  CMatrix r = v * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  return 0.5 * (r + r.adjoint());
}

/// exp(i h) for Hermitian h, via the spectral decomposition.
inline CMatrix unitary_exp(const CMatrix& h) {
  const CMatrix s = detail::symmetrized(h, kHermitianTol, "unitary_exp");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(s);
  const RVector& lambda = eig.eigenvalues();
  Eigen::VectorXcd phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phases(i) = std::polar(1.0, lambda(i));
  const CMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// max(||I - a a^*||, ||I - a^* a||) in operator norm.
inline double unitarity_defect(const CMatrix& a) {
  const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
  return std::max(op_norm(id - a * a.adjoint()), op_norm(id - a.adjoint() * a));
}

/// ||I - a^* a|| in operator norm.
inline double isometry_defect(const CMatrix& a) {
  const CMatrix id = CMatrix::Identity(a.rows(), a.cols());
  return op_norm(id - a.adjoint() * a);
}

}  // namespace ulamlab
