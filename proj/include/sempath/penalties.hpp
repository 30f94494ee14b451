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

#ifndef SEMPATH_PENALTIES_HPP
#define SEMPATH_PENALTIES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sempath {

enum class PenaltyKind { None, Lasso, Ridge, ElasticNet, AdaptiveLasso, Scad, Mcp };

const char* penalty_name(PenaltyKind kind);
PenaltyKind penalty_from_name(const std::string& name);  // throws std::invalid_argument

struct PenaltyConfig {
  PenaltyKind kind = PenaltyKind::None;
  double lambda = 0.0;
  double alpha = 0.5;   // elastic net mix
  double gamma = 3.7;   // SCAD/MCP concavity
  std::vector<int> pars_pen;   // 1-based param ids
  std::vector<double> weights; // adaptive lasso, aligned with pars_pen

  /// Throws std::invalid_argument on lambda < 0, alpha outside [0,1],
  /// SCAD gamma <= 2, MCP gamma <= 0, or missing/misaligned alasso weights.
  void validate(int q = 0) const;

  double weight_for(int param_id) const;  // 1.0 unless adaptive lasso
};

/// Per-parameter penalty at the config's own lambda:
///   lasso  lambda|x|            ridge  lambda x^2
///   enet   lambda[(1-a)x^2 + a|x|]
///   alasso lambda w |x|
///   SCAD   lambda|x|                            for |x| <= lambda
///          (2 g lambda|x| - x^2 - lambda^2)/(2(g-1))   for lambda < |x| <= g lambda
///          lambda^2 (g+1)/2                     beyond
///   MCP    lambda|x| - x^2/(2g) for |x| <= g lambda, else g lambda^2 / 2
double penalty_unit_value(PenaltyKind kind, double x, double lambda, double alpha,
                          double gamma, double weight = 1.0);

/// Sum of penalty_unit_value over cfg.pars_pen.
double penalty_value(const Eigen::VectorXd& theta, const PenaltyConfig& cfg);

/// Scalar proximal update with t as the effective lambda (step folded in):
/// exact minimizer of (1/2)(x - z)^2 + pen_{t,alpha,gamma}(x).
double prox_scalar(double z, double t, PenaltyKind kind, double alpha, double gamma);

/// Config-aware prox; adaptive lasso scales t by the parameter's weight.
double prox(double z, double t, const PenaltyConfig& cfg, int param_id);

inline constexpr double kAlassoWeightCap = 1e6;
inline constexpr double kAlassoWeightEps = 1e-9;

/// w_j = 1/|theta_ml_j|, capped at kAlassoWeightCap for |theta| < eps.
std::vector<double> alasso_weights(const Eigen::VectorXd& theta_ml,
                                   const std::vector<int>& pars_pen);

}  // namespace sempath

#endif  // SEMPATH_PENALTIES_HPP
