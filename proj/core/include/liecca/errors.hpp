// Copyright 2026 The liecca Authors
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

#ifndef LIECCA_ERRORS_HPP
#define LIECCA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liecca {

/// Base class for all liecca exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values built over different block structures were combined.
class StructureMismatch : public Error {
 public:
  using Error::Error;
};

/// An SO(3) logarithm was requested within tolerance of the rotation
/// angle pi, where the principal branch is not unique.
class AngleAtCut : public Error {
 public:
  using Error::Error;
};

/// A generator that must be unit-norm was not.
class UnitNormViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before meeting tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double final_step)
      : Error(what), final_step_(final_step) {}
  /// Step norm (or residual) at the last iteration.
  double final_step() const { return final_step_; }

 private:
  double final_step_;
};

/// Input data has no usable rank for the requested decomposition.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// Paired lists with different lengths.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace liecca

#endif  // LIECCA_ERRORS_HPP
