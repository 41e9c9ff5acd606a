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

#include "liecca/cca.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "generator_fit.hpp"
#include "liecca/stats.hpp"

namespace liecca {

namespace {

constexpr double kDegenerateSpread = 1e-10;
constexpr double kDegenerateTimeVariance = 1e-12;

double spread_of(std::span<const GroupElement> points) {
  double total = 0.0;
  for (const GroupElement& p : points) total += log_map(p).coords().squaredNorm();
  return total;
}

std::vector<GroupElement> exp_elements(const GroupStructure& s,
                                       const Eigen::VectorXd& generator,
                                       std::span<const double> times) {
  std::vector<GroupElement> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(exp_map(AlgebraVector(s, t * generator)));
  }
  return out;
}

void check_paired_views(std::span<const GroupElement> x,
                        std::span<const GroupElement> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("paired views differ in length");
  }
  if (x.empty()) throw Error("empty paired views");
  if (x[0].structure() != y[0].structure()) {
    throw StructureMismatch("paired views live on different structures");
  }
}

// Joint objective at fixed generators and times. The coupling term reuses
// the fixed-times evaluator with exp(s_i u) as reference points, which is
// algebraically the same distance.
double joint_loss(const detail::FixedTimesLoss& x_loss,
                  const detail::FixedTimesLoss& y_loss,
                  const GroupStructure& s, const Eigen::VectorXd& v,
                  const Eigen::VectorXd& u, std::span<const double> t,
                  std::span<const double> st) {
  const std::vector<GroupElement> z = exp_elements(s, u, st);
  const detail::FixedTimesLoss coupling(z);
  return x_loss.eval(v, t) + y_loss.eval(u, st) + coupling.eval(v, t);
}

PairFit degenerate_pair(const GroupStructure& s, size_t n, double spread) {
  const Eigen::VectorXd e0 = Eigen::VectorXd::Unit(s.algebra_dim(), 0);
  PairFit fit{CanonicalPair{AlgebraVector(s, e0), AlgebraVector(s, e0),
                            TimeRegression{0.0, 0.0, 0.0, true}, spread},
              TimePairs{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)},
              {spread},
              true,
              true};
  return fit;
}

// Alternating fit of one canonical pair on centered views.
PairFit fit_pair_core(std::span<const GroupElement> x_centered,
                      std::span<const GroupElement> y_centered,
                      const IccaOptions& options, std::mt19937_64& rng) {
  const GroupStructure& s = x_centered[0].structure();
  const double t_bound =
      options.t_bound > 0.0 ? options.t_bound : default_t_bound(s);
  const detail::SphereDescentParams sp = detail::sphere_params(options.sphere);

  const double spread = spread_of(x_centered) + spread_of(y_centered);
  if (spread < kDegenerateSpread) {
    return degenerate_pair(s, x_centered.size(), spread);
  }

  // Initialization stage: each generator from its view's projection
  // objective, times from pure projection.
  detail::GeneratorFit fx =
      detail::fit_best_generator(x_centered, t_bound, options.sphere, rng);
  detail::GeneratorFit fy =
      detail::fit_best_generator(y_centered, t_bound, options.sphere, rng);
  Eigen::VectorXd v = std::move(fx.v);
  Eigen::VectorXd u = std::move(fy.v);
  std::vector<double> t = std::move(fx.times);
  std::vector<double> st = std::move(fy.times);

  const detail::FixedTimesLoss x_loss(x_centered);
  const detail::FixedTimesLoss y_loss(y_centered);

  PairFit fit{CanonicalPair{AlgebraVector(s, v), AlgebraVector(s, u),
                            TimeRegression{}, 0.0},
              TimePairs{}, {}, false, false};
  double loss = joint_loss(x_loss, y_loss, s, v, u, t, st);
  fit.trace.push_back(loss);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    // Generator substeps against the fixed times, one view at a time; the
    // coupling term rides along as extra reference points.
    {
      const std::vector<GroupElement> z = exp_elements(s, u, st);
      const detail::FixedTimesLoss coupling(z);
      auto objective = [&](const Eigen::VectorXd& w) {
        return x_loss.eval(w, t) + coupling.eval(w, t);
      };
      if (auto step = detail::sphere_descent_step(objective, v, objective(v), sp)) {
        v = step->first;
      }
    }
    {
      const std::vector<GroupElement> w_pts = exp_elements(s, v, t);
      const detail::FixedTimesLoss coupling(w_pts);
      auto objective = [&](const Eigen::VectorXd& w) {
        return y_loss.eval(w, st) + coupling.eval(w, st);
      };
      if (auto step = detail::sphere_descent_step(objective, u, objective(u), sp)) {
        u = step->first;
      }
    }

    // Time updates.
    if (options.mode == IccaMode::Paper) {
      t = detail::project_all(x_centered, AlgebraVector(s, v), t_bound).times;
      st = detail::project_all(y_centered, AlgebraVector(s, u), t_bound).times;
    } else {
      const AlgebraVector va(s, v);
      const AlgebraVector ua(s, u);
      const std::vector<GroupElement> z = exp_elements(s, u, st);
      for (size_t i = 0; i < x_centered.size(); ++i) {
        const detail::SubgroupDistanceProfile px(x_centered[i], va);
        const detail::SubgroupDistanceProfile pz(z[i], va);
        auto objective = [&](double tt, bool* valid) {
          bool v1 = true, v2 = true;
          const double val =
              px.squared_distance(tt, &v1) + pz.squared_distance(tt, &v2);
          if (valid) *valid = v1 && v2;
          return val;
        };
        const detail::LineMinimum m = detail::minimize_on_interval(
            objective, -t_bound, t_bound, kProjectionGridNodes, 1e-8);
        // Accept only non-increases so the recorded trace stays monotone.
        if (m.valid && m.value <= objective(t[i], nullptr)) t[i] = m.t;
      }
      const std::vector<GroupElement> w_pts = exp_elements(s, v, t);
      for (size_t i = 0; i < y_centered.size(); ++i) {
        const detail::SubgroupDistanceProfile py(y_centered[i], ua);
        const detail::SubgroupDistanceProfile pw(w_pts[i], ua);
        auto objective = [&](double ss, bool* valid) {
          bool v1 = true, v2 = true;
          const double val =
              py.squared_distance(ss, &v1) + pw.squared_distance(ss, &v2);
          if (valid) *valid = v1 && v2;
          return val;
        };
        const detail::LineMinimum m = detail::minimize_on_interval(
            objective, -t_bound, t_bound, kProjectionGridNodes, 1e-8);
        if (m.valid && m.value <= objective(st[i], nullptr)) st[i] = m.t;
      }
    }

    const double new_loss = joint_loss(x_loss, y_loss, s, v, u, t, st);
    fit.trace.push_back(new_loss);
    const bool done =
        std::abs(loss - new_loss) <= options.tol * std::max(loss, 1e-30);
    loss = new_loss;
    if (done) {
      fit.converged = true;
      break;
    }
  }

  // Sign canonicalization: v by its first significant coordinate (times
  // flip along), then u so the regression slope is nonnegative.
  if (detail::canonicalize_sign(v)) {
    for (double& ti : t) ti = -ti;
  }
  TimeRegression reg = fit_time_regression(TimePairs{t, st});
  bool flip_u = false;
  if (reg.degenerate) {
    Eigen::VectorXd probe = u;
    flip_u = detail::canonicalize_sign(probe);
  } else {
    flip_u = reg.slope < 0.0;
  }
  if (flip_u) {
    u = -u;
    for (double& si : st) si = -si;
    reg = fit_time_regression(TimePairs{t, st});
  }

  fit.pair = CanonicalPair{AlgebraVector(s, v), AlgebraVector(s, u), reg, loss};
  fit.times = TimePairs{std::move(t), std::move(st)};
  return fit;
}

}  // namespace

std::string to_string(IccaMode mode) {
  return mode == IccaMode::Paper ? "paper" : "joint";
}

IccaMode icca_mode_from_string(const std::string& name) {
  if (name == "paper") return IccaMode::Paper;
  if (name == "joint") return IccaMode::Joint;
  throw Error("unknown ICCA mode '" + name + "' (expected paper|joint)");
}

TimeRegression fit_time_regression(const TimePairs& times) {
  const size_t n = times.t_star.size();
  if (times.s_star.size() != n) {
    throw LengthMismatch("fit_time_regression: t*/s* length mismatch");
  }
  if (n < 2) throw Error("fit_time_regression: need at least 2 samples");

  double mean_t = 0.0, mean_s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_t += times.t_star[i];
    mean_s += times.s_star[i];
  }
  mean_t /= static_cast<double>(n);
  mean_s /= static_cast<double>(n);

  double stt = 0.0, sts = 0.0, sss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dt = times.t_star[i] - mean_t;
    const double ds = times.s_star[i] - mean_s;
    stt += dt * dt;
    sts += dt * ds;
    sss += ds * ds;
  }

  TimeRegression reg;
  if (stt / static_cast<double>(n) <= kDegenerateTimeVariance) {
    reg.slope = 0.0;
    reg.intercept = mean_s;
    reg.r_squared = 0.0;
    reg.degenerate = true;
    return reg;
  }
  reg.slope = sts / stt;
  reg.intercept = mean_s - reg.slope * mean_t;
  double ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r =
        times.s_star[i] - (reg.slope * times.t_star[i] + reg.intercept);
    ss_res += r * r;
  }
  if (sss <= 1e-300) {
    reg.r_squared = ss_res <= 1e-300 ? 1.0 : 0.0;
  } else {
    reg.r_squared = 1.0 - ss_res / sss;
  }
  return reg;
}

std::pair<double, TimePairs> icca_pair_loss(
    std::span<const GroupElement> x_centered,
    std::span<const GroupElement> y_centered, const AlgebraVector& v,
    const AlgebraVector& u, double t_bound) {
  check_paired_views(x_centered, y_centered);
  if (std::abs(v.norm() - 1.0) > 1e-9 || std::abs(u.norm() - 1.0) > 1e-9) {
    throw UnitNormViolation("icca_pair_loss: generators must be unit norm");
  }
  const GroupStructure& s = x_centered[0].structure();
  if (t_bound == 0.0) t_bound = default_t_bound(s);

  detail::ProjectAllResult px = detail::project_all(x_centered, v, t_bound);
  detail::ProjectAllResult py = detail::project_all(y_centered, u, t_bound);
  const std::vector<GroupElement> z = exp_elements(s, u.coords(), py.times);
  const detail::FixedTimesLoss coupling(z);
  const double loss = px.loss + py.loss + coupling.eval(v.coords(), px.times);
  return {loss, TimePairs{std::move(px.times), std::move(py.times)}};
}

std::vector<GroupElement> residualize(std::span<const GroupElement> points,
                                      const AlgebraVector& v,
                                      std::span<const double> times) {
  return detail::residualize_left(points, v, times);
}

PairFit fit_first_pair(std::span<const GroupElement> x,
                       std::span<const GroupElement> y,
                       const IccaOptions& options) {
  check_paired_views(x, y);
  if (x.size() < 3) throw Error("fit_first_pair: need at least 3 pairs");

  const GroupElement mu_x_inv = inverse(intrinsic_mean(x));
  const GroupElement mu_y_inv = inverse(intrinsic_mean(y));
  std::vector<GroupElement> xc, yc;
  xc.reserve(x.size());
  yc.reserve(y.size());
  for (const GroupElement& p : x) xc.push_back(compose(mu_x_inv, p));
  for (const GroupElement& p : y) yc.push_back(compose(mu_y_inv, p));

  std::mt19937_64 rng(options.sphere.seed);
  return fit_pair_core(xc, yc, options, rng);
}

IccaFit fit_icca(std::span<const GroupElement> x,
                 std::span<const GroupElement> y, int k,
                 const IccaOptions& options) {
  check_paired_views(x, y);
  if (x.size() < 3) throw Error("fit_icca: need at least 3 pairs");
  const GroupStructure& s = x[0].structure();
  if (k < 1 || k > s.algebra_dim()) throw Error("fit_icca: bad pair count");

  GroupElement mu_x = intrinsic_mean(x);
  GroupElement mu_y = intrinsic_mean(y);
  const GroupElement mu_x_inv = inverse(mu_x);
  const GroupElement mu_y_inv = inverse(mu_y);
  std::vector<GroupElement> xc, yc;
  xc.reserve(x.size());
  yc.reserve(y.size());
  for (const GroupElement& p : x) xc.push_back(compose(mu_x_inv, p));
  for (const GroupElement& p : y) yc.push_back(compose(mu_y_inv, p));

  std::mt19937_64 rng(options.sphere.seed);
  IccaFit fit{IccaModel{std::move(mu_x), std::move(mu_y), s, {}, {},
                        options.mode, {}, {}, false},
              {}};
  for (int pair_idx = 0; pair_idx < k; ++pair_idx) {
    if (spread_of(xc) + spread_of(yc) < kDegenerateSpread) {
      fit.model.early_stopped = true;
      break;
    }
    PairFit pf = fit_pair_core(xc, yc, options, rng);
    if (pair_idx + 1 < k && !pf.degenerate) {
      xc = residualize(xc, pf.pair.v, pf.times.t_star);
      yc = residualize(yc, pf.pair.u, pf.times.s_star);
    }
    fit.model.pairs.push_back(pf.pair);
    fit.model.loss_traces.push_back(std::move(pf.trace));
    fit.model.pair_converged.push_back(pf.converged);
    fit.model.pair_degenerate.push_back(pf.degenerate);
    fit.pair_times.push_back(std::move(pf.times));
  }
  return fit;
}

GroupElement reconstruct(const GroupElement& x, const IccaModel& model) {
  if (x.structure() != model.structure) {
    throw StructureMismatch("reconstruct: input structure differs from model");
  }
  const GroupStructure& s = model.structure;
  const double t_bound = default_t_bound(s);
  GroupElement xc = compose(inverse(model.mu_x), x);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(s.algebra_dim());
  for (const CanonicalPair& pair : model.pairs) {
    const ProjectionResult proj = project_to_subgroup(xc, pair.v, t_bound);
    const double s_hat =
        pair.regression.slope * proj.t_star + pair.regression.intercept;
    total += s_hat * pair.u.coords();
    xc = compose(inverse(exp_map(pair.v.scaled(proj.t_star))), xc);
  }
  return compose(model.mu_y, exp_map(AlgebraVector(s, std::move(total))));
}

double mse_intrinsic(std::span<const GroupElement> a,
                     std::span<const GroupElement> b) {
  if (a.size() != b.size()) throw LengthMismatch("mse_intrinsic: length mismatch");
  if (a.empty()) throw Error("mse_intrinsic: empty lists");
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = riemannian_distance(a[i], b[i]);
    total += d * d;
  }
  return total / static_cast<double>(a.size());
}

double mse_ambient(std::span<const GroupElement> a,
                   std::span<const GroupElement> b) {
  if (a.size() != b.size()) throw LengthMismatch("mse_ambient: length mismatch");
  if (a.empty()) throw Error("mse_ambient: empty lists");
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    total += (a[i].embedding() - b[i].embedding()).squaredNorm();
  }
  return total / (static_cast<double>(a.size()) *
                  static_cast<double>(a[0].embedding().size()));
}

double mse_ambient(const std::vector<Eigen::VectorXd>& predictions,
                   std::span<const GroupElement> reference) {
  if (predictions.size() != reference.size()) {
    throw LengthMismatch("mse_ambient: length mismatch");
  }
  if (predictions.empty()) throw Error("mse_ambient: empty lists");
  double total = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    total += (predictions[i] - reference[i].embedding()).squaredNorm();
  }
  return total / (static_cast<double>(predictions.size()) *
                  static_cast<double>(predictions[0].size()));
}

namespace {

// Inverse square root of a symmetric positive definite matrix via
// eigendecomposition.
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(std::string("fit_euclidean_cca: eigendecomposition failed for ") +
                what);
  }
  if (solver.eigenvalues().minCoeff() <= 0.0) {
    throw DegenerateData(std::string("fit_euclidean_cca: ") + what +
                         " rank-deficient after regularization");
  }
  return solver.eigenvectors() *
         solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         solver.eigenvectors().transpose();
}

}  // namespace

EuclideanCcaModel fit_euclidean_cca(const std::vector<Eigen::VectorXd>& x,
                                    const std::vector<Eigen::VectorXd>& y,
                                    int k, double ridge) {
  if (x.size() != y.size()) throw LengthMismatch("fit_euclidean_cca: length mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw Error("fit_euclidean_cca: need at least 2 pairs");
  const Eigen::Index dx = x[0].size();
  const Eigen::Index dy = y[0].size();
  if (k < 1 || k > std::min(dx, dy)) throw Error("fit_euclidean_cca: bad k");

  EuclideanCcaModel model;
  model.mean_x = Eigen::VectorXd::Zero(dx);
  model.mean_y = Eigen::VectorXd::Zero(dy);
  for (int i = 0; i < n; ++i) {
    model.mean_x += x[static_cast<size_t>(i)];
    model.mean_y += y[static_cast<size_t>(i)];
  }
  model.mean_x /= n;
  model.mean_y /= n;

  Eigen::MatrixXd xc(n, dx), yc(n, dy);
  for (int i = 0; i < n; ++i) {
    xc.row(i) = (x[static_cast<size_t>(i)] - model.mean_x).transpose();
    yc.row(i) = (y[static_cast<size_t>(i)] - model.mean_y).transpose();
  }
  const double denom = static_cast<double>(n - 1);
  const Eigen::MatrixXd sxx = xc.transpose() * xc / denom +
                              ridge * Eigen::MatrixXd::Identity(dx, dx);
  const Eigen::MatrixXd syy = yc.transpose() * yc / denom +
                              ridge * Eigen::MatrixXd::Identity(dy, dy);
  const Eigen::MatrixXd sxy = xc.transpose() * yc / denom;

  const Eigen::MatrixXd wx = inv_sqrt_spd(sxx, "view-1 covariance");
  const Eigen::MatrixXd wy = inv_sqrt_spd(syy, "view-2 covariance");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(wx * sxy * wy,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd a = wx * svd.matrixU().col(c);
    Eigen::VectorXd b = wy * svd.matrixV().col(c);
    // Keep the pair's covariance nonnegative under sign canonicalization.
    if (detail::canonicalize_sign(a)) b = -b;

    TimePairs scores;
    scores.t_star.resize(static_cast<size_t>(n));
    scores.s_star.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      scores.t_star[static_cast<size_t>(i)] = xc.row(i).dot(a);
      scores.s_star[static_cast<size_t>(i)] = yc.row(i).dot(b);
    }
    const TimeRegression reg = fit_time_regression(scores);

    Eigen::VectorXd loading = Eigen::VectorXd::Zero(dy);
    double shat_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double shat =
          reg.slope * scores.t_star[static_cast<size_t>(i)] + reg.intercept;
      loading += shat * yc.row(i).transpose();
      shat_sq += shat * shat;
    }
    if (shat_sq > 1e-300) {
      loading /= shat_sq;
    } else {
      loading.setZero();
    }

    model.x_directions.push_back(std::move(a));
    model.y_directions.push_back(std::move(b));
    model.correlations.push_back(
        std::clamp(svd.singularValues()[c], 0.0, 1.0));
    model.score_regressions.push_back(reg);
    model.loadings.push_back(std::move(loading));
  }
  return model;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& x_embedding,
                            const EuclideanCcaModel& model) {
  if (x_embedding.size() != model.mean_x.size()) {
    throw StructureMismatch("reconstruct: embedding size differs from model");
  }
  Eigen::VectorXd y = model.mean_y;
  for (size_t c = 0; c < model.x_directions.size(); ++c) {
    const double t = model.x_directions[c].dot(x_embedding - model.mean_x);
    const double shat = model.score_regressions[c].slope * t +
                        model.score_regressions[c].intercept;
    y += shat * model.loadings[c];
  }
  return y;
}

}  // namespace liecca
