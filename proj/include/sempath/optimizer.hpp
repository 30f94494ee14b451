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

#ifndef SEMPATH_OPTIMIZER_HPP
#define SEMPATH_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sempath/data.hpp"
#include "sempath/penalties.hpp"
#include "sempath/ram.hpp"

namespace sempath {

enum class OptimMethod { GradientProx, QuasiNewtonProx };

struct OptimizerConfig {
  std::optional<OptimMethod> method;  // unset: QuasiNewtonProx when q > 30
  int max_iter = 5000;
  double tol = 1e-5;          // max parameter change AND relative objective change
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int n_starts = 1;
  double variance_floor = 1e-4;
  std::uint64_t seed = 1;
  bool record_trace = false;

  OptimMethod resolve_method(int q) const {
    return method ? *method : (q > 30 ? OptimMethod::QuasiNewtonProx
                                      : OptimMethod::GradientProx);
  }
};

/// Pluggable smooth loss so the proximal loop can be tested against
/// closed-form problems. value returns nullopt on infeasible points.
struct SmoothObjective {
  int dim = 0;
  std::function<std::optional<double>(const Eigen::VectorXd&)> value;
  std::function<bool(const Eigen::VectorXd&, double&, Eigen::VectorXd&)> value_and_grad;
  std::vector<int> floor_indices;  // 0-based theta indices kept >= variance_floor
};

// conv: 0 converged, 1 iteration cap / failed line search, 99 infeasible
// everywhere.
struct FitResult {
  Eigen::VectorXd theta;
  double f_ml = 0.0;       // smooth part at theta
  double f_regsem = 0.0;   // f_ml + penalty_value(theta)
  int conv = 1;
  int iterations = 0;
  double lambda = 0.0;
  std::map<std::string, double> fit_indices;
  double final_step = 1.0;             // last accepted backtracking step
  std::vector<double> objective_trace; // per accepted iterate (record_trace)
  std::vector<Eigen::VectorXd> theta_trace;
};

/// Two-step proximal descent: gradient (or BFGS-scaled) step, then
/// elementwise prox with the step folded into the threshold. Non-penalized
/// coordinates take the plain step. Backtracking enforces monotone descent.
FitResult fit_penalized(const SmoothObjective& objective, const PenaltyConfig& pen,
                        const OptimizerConfig& opt, const Eigen::VectorXd& theta0);

/// BFGS inverse-Hessian update; returns h_inv unchanged when s'y is not
/// positive enough. Output is symmetrized.
Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& h_inv, const Eigen::VectorXd& s_vec,
                            const Eigen::VectorXd& y_vec);

SmoothObjective make_sem_objective(RamLikelihood& lik);

FitResult fit_sem(const RamModel& ram, const SampleMoments& data, const PenaltyConfig& pen,
                  const OptimizerConfig& opt,
                  std::optional<Eigen::VectorXd> theta0 = std::nullopt);

/// n_starts runs from jittered defaults (components scaled by U(0.5, 1.5),
/// first start unjittered); best converged f_regsem wins.
FitResult multi_start_fit(const RamModel& ram, const SampleMoments& data,
                          const PenaltyConfig& pen, const OptimizerConfig& opt);

}  // namespace sempath

#endif  // SEMPATH_OPTIMIZER_HPP
