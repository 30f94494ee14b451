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

#ifndef SEMPATH_SELECTION_HPP
#define SEMPATH_SELECTION_HPP

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sempath/optimizer.hpp"

namespace sempath {

enum class FitMetric { Bic, Rmsea };

FitMetric metric_from_name(const std::string& name);
const char* metric_name(FitMetric m);

struct PathConfig {
  int n_lambda = 1;
  double jump = 0.05;
  double lambda_start = 0.0;
  FitMetric metric = FitMetric::Bic;
  std::vector<std::string> fit_ret = {"rmsea", "bic"};
  const SampleMoments* holdout = nullptr;  // adds holdout_* columns
  bool warm_start = true;                  // sequential; false allows parallel fits
  int threads = 1;                         // used when warm_start is false

  double lambda_at(int k) const { return lambda_start + k * jump; }
};

struct PathRow {
  double lambda = 0.0;
  int conv = 1;
  double f_ml = 0.0;
  double f_regsem = 0.0;
  int iterations = 0;
  int effective_df = 0;
  std::map<std::string, double> indices;
};

struct PathResult {
  std::vector<PathRow> fits;        // lambda ascending
  Eigen::MatrixXd parameters;       // n_lambda x q
  std::optional<int> final_index;   // metric argmin over conv == 0 rows
  Eigen::VectorXd final_pars;

  bool converged_any() const { return final_index.has_value(); }
};

inline constexpr double kZeroTol = 1e-8;

/// Nonzero free parameters (prox writes exact zeros; the tolerance only
/// guards float dust).
int effective_df(const Eigen::VectorXd& theta, const RamModel& ram,
                 double zero_tol = kZeroTol);

/// N * f_ml + ln(N) * k. No saturated-model constant, so values are
/// comparable in differences across one path, not in levels across software.
double bic(double f_ml, long n, int k);

/// chi2 = (N-1) f_ml by default (use_n switches the factor to N);
/// sqrt(max(chi2 - df, 0) / (df * factor)); 0 when df <= 0.
double rmsea(double f_ml, long n, int df_model, bool use_n = false);

/// Moment count minus effective free parameters:
/// p(p+1)/2 (+ p when means are modeled) - k.
int model_df(const RamModel& ram, int k);

std::map<std::string, double> compute_indices(const std::vector<std::string>& fit_ret,
                                              double f_ml, long n, int k,
                                              const RamModel& ram);

/// Fit the lambda grid in ascending order (warm starts reuse the previous
/// solution), compute requested indices per fit, and select the metric
/// argmin among converged rows. Adaptive-lasso weights are derived from a
/// lambda = 0 MLE fit when the template does not carry them.
PathResult run_path(const RamModel& ram, const SampleMoments& data,
                    const PenaltyConfig& pen_template, const PathConfig& path,
                    const OptimizerConfig& opt);

/// f_ml and indices at fixed theta against holdout moments (no refitting).
/// Throws DataError on a variable-order mismatch.
std::map<std::string, double> holdout_eval(const RamModel& ram, const Eigen::VectorXd& theta,
                                           const SampleMoments& holdout);

}  // namespace sempath

#endif  // SEMPATH_SELECTION_HPP
