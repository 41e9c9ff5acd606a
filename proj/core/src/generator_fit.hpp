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
// Internal generator optimization shared by the intrinsic-PCA component
// fits and the canonical-pair fits: projected gradient descent on the unit
// sphere with central-difference gradients and backtracking, alternating
// with per-point geodesic-parameter recomputation.

#ifndef LIECCA_GENERATOR_FIT_HPP
#define LIECCA_GENERATOR_FIT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "geodesic_profile.hpp"
#include "liecca/group.hpp"
#include "liecca/pca.hpp"
#include "liecca/stats.hpp"

namespace liecca::detail {

struct SphereDescentParams {
  double fd_step = 1e-5;
  double ls_start = 0.1;
  int ls_max_halvings = 40;
};

inline SphereDescentParams sphere_params(const IpcaOptions& o) {
  return {o.fd_step, o.line_search_start, o.line_search_max_halvings};
}

/// Flips the vector when its first coordinate with |x| > 1e-12 is negative.
/// Returns true when a flip happened.
inline bool canonicalize_sign(Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) {
        v = -v;
        return true;
      }
      return false;
    }
  }
  return false;
}

/// One projected-gradient descent step on the unit sphere.
///
/// `f` is evaluated on arbitrary-norm vectors; the Euclidean
/// central-difference gradient is projected onto the tangent space, the
/// step is backtracked from `ls_start` until a strict decrease, and the
/// iterate is renormalized. Returns the accepted (vector, value), or
/// nullopt when no decrease could be found (converged at a local minimum).
template <typename F>
std::optional<std::pair<Eigen::VectorXd, double>> sphere_descent_step(
    F&& f, const Eigen::VectorXd& v, double f_v,
    const SphereDescentParams& p) {
  const Eigen::Index d = v.size();
  Eigen::VectorXd grad(d);
  Eigen::VectorXd probe = v;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double vj = v[j];
    probe[j] = vj + p.fd_step;
    const double fp = f(probe);
    probe[j] = vj - p.fd_step;
    const double fm = f(probe);
    probe[j] = vj;
    grad[j] = (fp - fm) / (2.0 * p.fd_step);
  }
  Eigen::VectorXd tangent = grad - grad.dot(v) * v;
  const double tnorm = tangent.norm();
  if (!(tnorm > 1e-14)) return std::nullopt;

  double alpha = p.ls_start;
  for (int h = 0; h < p.ls_max_halvings; ++h) {
    Eigen::VectorXd cand = (v - alpha * tangent).normalized();
    const double fc = f(cand);
    if (fc < f_v) return std::make_pair(std::move(cand), fc);
    alpha *= 0.5;
  }
  return std::nullopt;
}

struct ProjectAllResult {
  std::vector<double> times;
  double loss = 0.0;
};

/// Projects every point onto {exp(t v)} and sums the squared residuals.
inline ProjectAllResult project_all(std::span<const GroupElement> points,
                                    const AlgebraVector& v, double t_bound) {
  ProjectAllResult out;
  out.times.reserve(points.size());
  for (const GroupElement& x : points) {
    const SubgroupDistanceProfile profile(x, v);
    const LineMinimum m = minimize_on_interval(
        [&profile](double t, bool* valid) {
          return profile.squared_distance(t, valid);
        },
        -t_bound, t_bound, kProjectionGridNodes, 1e-8);
    if (!m.valid) {
      throw AngleAtCut("project_all: every grid node hit the logarithm cut");
    }
    out.times.push_back(m.t);
    out.loss += m.value;
  }
  return out;
}

struct GeneratorFit {
  Eigen::VectorXd v;  // unit norm, not sign-canonicalized
  std::vector<double> times;
  double loss = 0.0;
  std::vector<double> trace;
  bool converged = false;
};

/// Descends the projection-residual objective
///   L(v) = sum_i min_t D^2(x_i, exp(t v)),  ||v|| = 1,
/// from one starting direction. Each outer iteration takes one sphere step
/// against the fixed-times surrogate and then recomputes all projection
/// parameters; iteration stops at relative loss change below `tol`, a
/// failed line search, or `max_iter`.
inline GeneratorFit fit_projection_generator(
    std::span<const GroupElement> points, const FixedTimesLoss& fixed_loss,
    const Eigen::VectorXd& v0, double t_bound, const SphereDescentParams& sp,
    double tol, int max_iter) {
  GeneratorFit fit;
  fit.v = v0.normalized();
  const GroupStructure& s = points[0].structure();

  ProjectAllResult proj = project_all(points, AlgebraVector(s, fit.v), t_bound);
  fit.times = std::move(proj.times);
  fit.loss = proj.loss;
  fit.trace.push_back(fit.loss);

  for (int iter = 0; iter < max_iter; ++iter) {
    auto objective = [&](const Eigen::VectorXd& w) {
      return fixed_loss.eval(w, fit.times);
    };
    auto step = sphere_descent_step(objective, fit.v, fit.loss, sp);
    if (!step) {
      fit.converged = true;
      break;
    }
    fit.v = step->first;
    proj = project_all(points, AlgebraVector(s, fit.v), t_bound);
    const double prev = fit.loss;
    fit.times = std::move(proj.times);
    fit.loss = proj.loss;
    fit.trace.push_back(fit.loss);
    if (std::abs(prev - fit.loss) <= tol * std::max(prev, 1e-30)) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

/// Multi-start wrapper: the top Euclidean-PCA direction of the points'
/// log-coordinates plus `multistart - 1` seeded random unit directions;
/// keeps the lowest final loss.
inline GeneratorFit fit_best_generator(std::span<const GroupElement> points,
                                       double t_bound, const IpcaOptions& opts,
                                       std::mt19937_64& rng) {
  const GroupStructure& s = points[0].structure();
  const int d = s.algebra_dim();
  const FixedTimesLoss fixed_loss(points);

  std::vector<Eigen::VectorXd> starts;
  {
    std::vector<Eigen::VectorXd> coords;
    coords.reserve(points.size());
    for (const GroupElement& x : points) coords.push_back(log_map(x).coords());
    EuclideanPcaResult pca = fit_euclidean_pca(coords, 1);
    if (!pca.directions.empty()) {
      starts.push_back(pca.directions[0]);
    } else {
      starts.push_back(Eigen::VectorXd::Unit(d, 0));
    }
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  while (static_cast<int>(starts.size()) < std::max(1, opts.multistart)) {
    Eigen::VectorXd r(d);
    for (int j = 0; j < d; ++j) r[j] = normal(rng);
    if (r.norm() < 1e-12) continue;
    starts.push_back(r.normalized());
  }

  const SphereDescentParams sp = sphere_params(opts);
  std::optional<GeneratorFit> best;
  for (const Eigen::VectorXd& v0 : starts) {
    GeneratorFit fit = fit_projection_generator(points, fixed_loss, v0,
                                                t_bound, sp, opts.tol,
                                                opts.max_iter);
    if (!best || fit.loss < best->loss) best = std::move(fit);
  }
  return *best;
}

/// Removes a fitted geodesic component by left-composition with the
/// inverse projection: x_i <- exp(t_i v)^-1 * x_i.
inline std::vector<GroupElement> residualize_left(
    std::span<const GroupElement> points, const AlgebraVector& v,
    std::span<const double> times) {
  if (points.size() != times.size()) {
    throw LengthMismatch("residualize: point/time length mismatch");
  }
  std::vector<GroupElement> out;
  out.reserve(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    out.push_back(compose(inverse(exp_map(v.scaled(times[i]))), points[i]));
  }
  return out;
}

}  // namespace liecca::detail

#endif  // LIECCA_GENERATOR_FIT_HPP
