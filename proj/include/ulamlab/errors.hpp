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

#include <stdexcept>
#include <string>

namespace ulamlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range or malformed argument (group order, norm parameter, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Dimension / domain mismatch, or a matrix that is not of the required form.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Smallest singular value below the admissible cutoff.
class SingularInput : public Error {
 public:
  using Error::Error;
};

/// Hermitian input with an eigenvalue below the PSD tolerance.
class NotPSD : public Error {
 public:
  using Error::Error;
};

/// A multiplication table failing a group axiom.
class NotAGroup : public Error {
 public:
  enum class Reason { kShape, kLatin, kIdentity, kAssociativity };

  NotAGroup(Reason reason, const std::string& what)
      : Error(what), reason_(reason) {}

  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Operation needs an invariant mean, which a free-group ball does not have.
class UnsupportedDomain : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a construction does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Polar repair requested on a map whose unitarity defect is not below 1.
class NotRepairable : public PreconditionError {
 public:
  NotRepairable(double delta, const std::string& what)
      : PreconditionError(what), delta_(delta) {}

  double delta() const { return delta_; }

 private:
  double delta_;
};

}  // namespace ulamlab
