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
//
// Scalar rotation kernels for SO(2) and SO(3): exponential/logarithmic maps,
// angle extraction, wrapping, and re-orthonormalization. These are the
// building blocks the block-product group type is assembled from.

#ifndef LIECCA_ROTATIONS_HPP
#define LIECCA_ROTATIONS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "liecca/errors.hpp"

namespace liecca::rot {

/// Rotation angles this close to pi are treated as sitting on the SO(3)
/// logarithm cut, where the principal branch is not unique.
inline constexpr double kCutTolerance = 1e-6;

/// Below this angle the closed-form log/exp coefficients switch to their
/// Taylor expansions to avoid 0/0.
inline constexpr double kSmallAngle = 1e-4;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r = std::numbers::pi;
  return r;
}

/// Planar rotation by `angle` radians.
inline Eigen::Matrix2d so2_exp(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

/// Rotation angle of a planar rotation, in (-pi, pi].
inline double so2_log(const Eigen::Matrix2d& r) {
  double a = std::atan2(r(1, 0), r(0, 0));
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  return a;
}

/// Skew-symmetric matrix of a 3-vector: hat(w) * x = w x x.
inline Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0.0, -w.z(), w.y(),  //
      w.z(), 0.0, -w.x(),   //
      -w.y(), w.x(), 0.0;
  return s;
}

/// Rodrigues formula, written as R = I + A*hat(w) + B*hat(w)^2 with
/// A = sin(t)/t and B = (1-cos(t))/t^2, so that w need not be normalized
/// and t -> 0 is handled by the series limits.
inline Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w) {
  const double t2 = w.squaredNorm();
  const double t = std::sqrt(t2);
  double a, b;
  if (t < kSmallAngle) {
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / t2;
  }
  const Eigen::Matrix3d s = hat(w);
  return Eigen::Matrix3d::Identity() + a * s + b * (s * s);
}

/// Rotation angle of R in [0, pi], read off the trace.
inline double so3_angle(const Eigen::Matrix3d& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

/// Inverse of so3_exp on the principal branch. Throws AngleAtCut when the
/// rotation angle is within kCutTolerance of pi.
inline Eigen::Vector3d so3_log(const Eigen::Matrix3d& r) {
  const double theta = so3_angle(r);
  if (theta > std::numbers::pi - kCutTolerance) {
    throw AngleAtCut("so3_log: rotation angle " + std::to_string(theta) +
                     " within tolerance of pi; principal branch undefined");
  }
  double f;  // theta / (2 sin theta)
  if (theta < kSmallAngle) {
    f = 0.5 + theta * theta / 12.0;
  } else {
    f = theta / (2.0 * std::sin(theta));
  }
  return f * Eigen::Vector3d(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0),
                             r(1, 0) - r(0, 1));
}

/// Nearest rotation in the Frobenius sense (polar factor via SVD), used to
/// pull blocks back onto the manifold after accumulated drift.
template <typename Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
project_rotation(const Eigen::MatrixBase<Derived>& b) {
  using Mat =
      Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat u = svd.matrixU();
    u.col(u.cols() - 1) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace liecca::rot

#endif  // LIECCA_ROTATIONS_HPP
