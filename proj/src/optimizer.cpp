/*
 * Copyright 2026 the sempath authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sempath/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sempath {

namespace {

constexpr double kMinStep = 1e-13;
constexpr int kMaxBacktracks = 60;

void apply_floor(Eigen::VectorXd& theta, const std::vector<int>& floor_indices, double floor) {
  for (int i : floor_indices) {
    if (theta(i) < floor) theta(i) = floor;
  }
}

// One prox-gradient map application: z = theta - step * grad, prox on the
// penalized coordinates with the step folded into the threshold, floor on
// variance coordinates.
Eigen::VectorXd prox_gradient_map(const Eigen::VectorXd& theta, const Eigen::VectorXd& grad,
                                  double step, const PenaltyConfig& pen,
                                  const SmoothObjective& objective, double floor) {
  Eigen::VectorXd out = theta - step * grad;
  if (pen.kind != PenaltyKind::None) {
    double t_eff = step * pen.lambda;
    for (int id : pen.pars_pen) {
      out(id - 1) = prox(out(id - 1), t_eff, pen, id);
    }
  }
  apply_floor(out, objective.floor_indices, floor);
  return out;
}

}  // namespace

Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& h_inv, const Eigen::VectorXd& s_vec,
                            const Eigen::VectorXd& y_vec) {
  double sy = s_vec.dot(y_vec);
  double cutoff = 1e-10 * s_vec.norm() * y_vec.norm();
  if (!(sy > cutoff) || !(sy > 0.0)) return h_inv;

  double rho = 1.0 / sy;
  const Eigen::Index n = h_inv.rows();
  Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s_vec * y_vec.transpose();
  Eigen::MatrixXd updated = left * h_inv * left.transpose() + rho * s_vec * s_vec.transpose();
  return (updated + updated.transpose()) / 2.0;
}

FitResult fit_penalized(const SmoothObjective& objective, const PenaltyConfig& pen,
                        const OptimizerConfig& opt, const Eigen::VectorXd& theta0) {
  const int q = objective.dim;
  pen.validate(q);

  FitResult result;
  result.lambda = pen.lambda;
  result.theta = theta0;
  apply_floor(result.theta, objective.floor_indices, opt.variance_floor);

  const OptimMethod method = opt.resolve_method(q);

  double f_smooth;
  Eigen::VectorXd grad(q);
  if (!objective.value_and_grad(result.theta, f_smooth, grad)) {
    result.conv = 99;
    result.f_ml = std::numeric_limits<double>::quiet_NaN();
    result.f_regsem = result.f_ml;
    return result;
  }
  double f_total = f_smooth + penalty_value(result.theta, pen);
  if (opt.record_trace) {
    result.objective_trace.push_back(f_total);
    result.theta_trace.push_back(result.theta);
  }

  Eigen::MatrixXd h_inv;
  if (method == OptimMethod::QuasiNewtonProx) {
    h_inv = Eigen::MatrixXd::Identity(q, q);
  }

  Eigen::VectorXd direction(q), trial(q), grad_new(q);
  bool any_accepted = false;
  bool stop = false;
  bool h_is_identity = true;
  int exit_conv = 1;  // overwritten on convergence
  int iter = 0;

  for (; iter < opt.max_iter && !stop; ++iter) {
    direction = method == OptimMethod::QuasiNewtonProx ? (h_inv * grad).eval() : grad;

    double step = opt.step_init;
    bool accepted = false;
    bool saw_feasible_trial = false;
    double f_trial_total = f_total;
    double f_trial_smooth = f_smooth;

    for (int bt = 0; bt < kMaxBacktracks && step > kMinStep; ++bt, step *= opt.backtrack_factor) {
      trial = result.theta - step * direction;
      if (pen.kind != PenaltyKind::None) {
        double t_eff = step * pen.lambda;
        for (int id : pen.pars_pen) {
          trial(id - 1) = prox(trial(id - 1), t_eff, pen, id);
        }
      }
      apply_floor(trial, objective.floor_indices, opt.variance_floor);

      auto fv = objective.value(trial);
      if (!fv) continue;
      saw_feasible_trial = true;
      double candidate = *fv + penalty_value(trial, pen);
      double decrease = opt.armijo_c / (2.0 * step) * (trial - result.theta).squaredNorm();
      if (candidate <= f_total - decrease) {
        f_trial_smooth = *fv;
        f_trial_total = candidate;
        accepted = true;
        break;
      }
    }

    if (!accepted) {
      if (method == OptimMethod::QuasiNewtonProx && !h_is_identity) {
        h_inv.setIdentity();  // retry with a plain gradient direction
        h_is_identity = true;
        continue;
      }
      if (!any_accepted && !saw_feasible_trial) {
        exit_conv = 99;
      }
      break;
    }

    double max_change = (trial - result.theta).lpNorm<Eigen::Infinity>();
    double rel_obj = (f_total - f_trial_total) / std::max(1.0, std::abs(f_total));

    if (!objective.value_and_grad(trial, f_trial_smooth, grad_new)) {
      break;  // should not happen at a point value() accepted
    }
    if (method == OptimMethod::QuasiNewtonProx) {
      h_inv = bfgs_update(h_inv, trial - result.theta, grad_new - grad);
      h_is_identity = false;
    }

    result.theta = trial;
    f_total = f_trial_total;
    f_smooth = f_trial_smooth;
    grad = grad_new;
    result.final_step = step;
    any_accepted = true;
    if (opt.record_trace) {
      result.objective_trace.push_back(f_total);
      result.theta_trace.push_back(result.theta);
    }

    if (max_change < opt.tol && rel_obj < opt.tol) {
      // Certify the algorithmic fixed point: one more prox-gradient map
      // application at the accepted step must stay within tol.
      Eigen::VectorXd probe =
          prox_gradient_map(result.theta, grad, step, pen, objective, opt.variance_floor);
      if ((probe - result.theta).lpNorm<Eigen::Infinity>() < opt.tol) {
        exit_conv = 0;
        stop = true;
      }
    }
  }

  result.iterations = iter;
  result.f_ml = f_smooth;
  result.f_regsem = f_total;
  result.conv = exit_conv;

  if (result.conv == 1) {
    // Stalled line search can mean we are already at a fixed point.
    Eigen::VectorXd probe = prox_gradient_map(result.theta, grad, result.final_step, pen,
                                              objective, opt.variance_floor);
    if ((probe - result.theta).lpNorm<Eigen::Infinity>() < opt.tol) result.conv = 0;
  }
  return result;
}

SmoothObjective make_sem_objective(RamLikelihood& lik) {
  SmoothObjective obj;
  obj.dim = lik.ram().q();
  for (int id : lik.ram().variance_param_ids()) obj.floor_indices.push_back(id - 1);
  obj.value = [&lik](const Eigen::VectorXd& theta) { return lik.value(theta); };
  obj.value_and_grad = [&lik](const Eigen::VectorXd& theta, double& f, Eigen::VectorXd& g) {
    return lik.value_and_grad(theta, f, g);
  };
  return obj;
}

FitResult fit_sem(const RamModel& ram, const SampleMoments& data, const PenaltyConfig& pen,
                  const OptimizerConfig& opt, std::optional<Eigen::VectorXd> theta0) {
  RamLikelihood lik(ram, data);
  SmoothObjective obj = make_sem_objective(lik);
  Eigen::VectorXd start = theta0 ? *theta0 : ram.default_start(lik.data());
  return fit_penalized(obj, pen, opt, start);
}

FitResult multi_start_fit(const RamModel& ram, const SampleMoments& data,
                          const PenaltyConfig& pen, const OptimizerConfig& opt) {
  RamLikelihood lik(ram, data);
  SmoothObjective obj = make_sem_objective(lik);
  Eigen::VectorXd base = ram.default_start(lik.data());

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);

  std::optional<FitResult> best;            // best converged
  std::optional<FitResult> best_incumbent;  // best regardless of conv
  int n_starts = std::max(1, opt.n_starts);
  for (int s = 0; s < n_starts; ++s) {
    Eigen::VectorXd start = base;
    if (s > 0) {
      for (int i = 0; i < start.size(); ++i) start(i) *= 1.0 + jitter(rng);
    }
    FitResult fit = fit_penalized(obj, pen, opt, start);
    auto better = [](const FitResult& a, const std::optional<FitResult>& b) {
      if (!b) return true;
      if (std::isnan(b->f_regsem)) return !std::isnan(a.f_regsem);
      return a.f_regsem < b->f_regsem;
    };
    if (fit.conv == 0 && better(fit, best)) best = fit;
    if (better(fit, best_incumbent)) best_incumbent = fit;
  }
  if (best) return *best;
  FitResult out = *best_incumbent;
  if (out.conv == 0) out.conv = 1;
  return out;
}

}  // namespace sempath
