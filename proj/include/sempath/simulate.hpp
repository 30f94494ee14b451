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

#ifndef SEMPATH_SIMULATE_HPP
#define SEMPATH_SIMULATE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sempath/selection.hpp"

namespace sempath {

// Linear growth design: 4 equally spaced time points, 10 iid standard-normal
// covariates. Intercept and slope each load 1.0 on c1 and 0.2 on c2; the
// other 16 regressions are exactly zero. Residual variances: time points 1.0,
// intercept 1.0, slope 0.25; intercept-slope covariance 0; all means 0.
struct GrowthDesign {
  static constexpr int kTimePoints = 4;
  static constexpr int kCovariates = 10;
  static constexpr int kColumns = kTimePoints + kCovariates;
  static constexpr double kLargeEffect = 1.0;
  static constexpr double kSmallEffect = 0.2;
  static constexpr double kResidualVar = 1.0;
  static constexpr double kInterceptVar = 1.0;
  static constexpr double kSlopeVar = 0.25;
};

/// Column order x1..x4, c1..c10.
const std::vector<std::string>& growth_columns();

Eigen::MatrixXd simulate_growth(int n, std::uint64_t seed);

/// One standard-normal factor, y_j = loading_j * f + eps_j. Residual
/// standard deviations default to 1; pass resid_sd for heterogeneous
/// indicators. Columns y1..y<k>.
Eigen::MatrixXd simulate_cfa(int n, const Eigen::VectorXd& loadings, std::uint64_t seed,
                             const Eigen::VectorXd& resid_sd = Eigen::VectorXd());

std::vector<std::string> cfa_columns(int n_indicators);

/// Growth model text (fixed loadings 1,1,1,1 and 0,1,2,3; free covariate
/// regressions; free intercept-slope covariance). Compile with growth mode.
std::string growth_model_text();

/// One-factor CFA with all loadings free (NA* on the first) and factor
/// variance fixed to 1.
std::string cfa_model_text(int n_indicators);

/// Growth spec with the exogenous covariate block (variances + pairwise
/// covariances) held fixed at the sample values, so covariates cost no
/// parameters — the treatment the replication study uses.
ModelSpec growth_spec_fixed_x(const SampleMoments& moments);

/// 1-based ids of the 20 covariate regressions in build_ram numbering.
std::vector<int> growth_regression_ids(const RamModel& ram);

struct SimDesign {
  enum class Kind { GrowthCovariates, OneFactorCfa };
  Kind kind = Kind::GrowthCovariates;
  int n = 80;
  int n_reps = 1;
  std::uint64_t seed = 1;
};

struct MethodOutcome {
  PenaltyKind method = PenaltyKind::None;  // None = plain ML (Wald p < .05)
  int n_converged = 0;
  long fp_count = 0;  // true zero flagged nonzero
  long tn_count = 0;
  long fn_count = 0;  // true nonzero flagged zero
  long tp_count = 0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  double convergence_rate = 0.0;
};

struct ReplicationReport {
  int n = 0;
  int n_reps = 0;
  std::vector<MethodOutcome> methods;

  std::string to_csv() const;
  std::string to_table() const;  // human-readable rates-by-method grid
};

/// Per replication: simulate, fit every method's path, select by BIC,
/// classify the 20 covariate regressions (ML by Wald z at .05; penalties by
/// exact zero). Rates aggregate over converged replications. Replications
/// run concurrently on up to `threads` threads; results are seed-deterministic
/// regardless of thread count.
ReplicationReport replication_study(const SimDesign& design,
                                    const std::vector<PenaltyKind>& methods,
                                    const PathConfig& path, const OptimizerConfig& opt,
                                    int threads = 1);

/// Wald standard errors from the inverse observed information
/// ((N/2) x Hessian of F_ML, Hessian by central differences of the analytic
/// gradient). Empty on a non-invertible information matrix.
std::optional<Eigen::VectorXd> wald_standard_errors(const RamModel& ram,
                                                    const Eigen::VectorXd& theta_ml,
                                                    const SampleMoments& data);

/// Parallelism cap: min(requested, SEMPATH_THREADS env, hardware).
int resolve_threads(int requested);

}  // namespace sempath

#endif  // SEMPATH_SIMULATE_HPP
