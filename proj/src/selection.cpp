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

#include "sempath/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace sempath {

FitMetric metric_from_name(const std::string& name) {
  std::string low;
  for (char c : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (low == "bic") return FitMetric::Bic;
  if (low == "rmsea") return FitMetric::Rmsea;
  throw std::invalid_argument("unknown metric '" + name + "'");
}

const char* metric_name(FitMetric m) { return m == FitMetric::Bic ? "bic" : "rmsea"; }

int effective_df(const Eigen::VectorXd& theta, const RamModel& ram, double zero_tol) {
  int k = 0;
  for (int i = 0; i < ram.q(); ++i) {
    if (std::abs(theta(i)) > zero_tol) ++k;
  }
  return k;
}

double bic(double f_ml, long n, int k) {
  return static_cast<double>(n) * f_ml + std::log(static_cast<double>(n)) * k;
}

double rmsea(double f_ml, long n, int df_model, bool use_n) {
  if (df_model <= 0) return 0.0;
  double factor = static_cast<double>(use_n ? n : n - 1);
  double chi2 = factor * f_ml;
  double num = std::max(chi2 - df_model, 0.0);
  return std::sqrt(num / (static_cast<double>(df_model) * factor));
}

int model_df(const RamModel& ram, int k) {
  int moments = ram.p_obs * (ram.p_obs + 1) / 2;
  if (ram.has_means) moments += ram.p_obs;
  return moments - k;
}

std::map<std::string, double> compute_indices(const std::vector<std::string>& fit_ret,
                                              double f_ml, long n, int k, const RamModel& ram) {
  std::map<std::string, double> out;
  for (const auto& name : fit_ret) {
    if (name == "bic") {
      out["bic"] = bic(f_ml, n, k);
    } else if (name == "rmsea") {
      out["rmsea"] = rmsea(f_ml, n, model_df(ram, k));
    } else {
      throw std::invalid_argument("unknown fit index '" + name + "'");
    }
  }
  out["fml"] = f_ml;
  out["effective_df"] = k;
  out["df"] = model_df(ram, k);
  return out;
}

std::map<std::string, double> holdout_eval(const RamModel& ram, const Eigen::VectorXd& theta,
                                           const SampleMoments& holdout) {
  std::vector<std::string> model_vars(ram.full_names.begin(),
                                      ram.full_names.begin() + ram.p_obs);
  SampleMoments sub = holdout.subset(model_vars);  // throws on mismatch
  double f_ml = ml_discrepancy_or_throw(ram, theta, sub);
  int k = effective_df(theta, ram);
  std::map<std::string, double> out;
  out["fml"] = f_ml;
  out["bic"] = bic(f_ml, sub.n, k);
  out["rmsea"] = rmsea(f_ml, sub.n, model_df(ram, k));
  return out;
}

PathResult run_path(const RamModel& ram, const SampleMoments& data,
                    const PenaltyConfig& pen_template, const PathConfig& path,
                    const OptimizerConfig& opt) {
  if (path.n_lambda < 1) throw std::invalid_argument("n_lambda must be >= 1");
  if (path.jump <= 0.0) throw std::invalid_argument("jump must be > 0");
  if (path.lambda_start < 0.0) throw std::invalid_argument("lambda_start must be >= 0");

  PenaltyConfig pen = pen_template;

  // Adaptive-lasso weights come from the unpenalized MLE when not supplied.
  if (pen.kind == PenaltyKind::AdaptiveLasso && pen.weights.empty()) {
    PenaltyConfig none;
    FitResult mle = fit_sem(ram, data, none, opt);
    if (mle.conv != 0) {
      throw ModelError(
          "adaptive lasso needs a converged MLE for its weights and the MLE fit "
          "did not converge (conv=" +
          std::to_string(mle.conv) + ")");
    }
    pen.weights = alasso_weights(mle.theta, pen.pars_pen);
  }

  const int q = ram.q();
  PathResult result;
  result.fits.resize(path.n_lambda);
  result.parameters = Eigen::MatrixXd::Zero(path.n_lambda, q);

  std::vector<FitResult> fits(path.n_lambda);

  auto run_one = [&](int k, std::optional<Eigen::VectorXd> start) {
    PenaltyConfig pk = pen;
    pk.lambda = path.lambda_at(k);
    fits[k] = fit_sem(ram, data, pk, opt, std::move(start));
  };

  if (path.warm_start || path.n_lambda == 1 || path.threads <= 1) {
    std::optional<Eigen::VectorXd> carry;
    for (int k = 0; k < path.n_lambda; ++k) {
      run_one(k, path.warm_start ? carry : std::nullopt);
      if (path.warm_start && fits[k].theta.size() == q && fits[k].theta.allFinite()) {
        carry = fits[k].theta;
      }
    }
  } else {
    int n_threads = std::min(path.threads, path.n_lambda);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int tix = 0; tix < n_threads; ++tix) {
      pool.emplace_back([&]() {
        for (int k = next.fetch_add(1); k < path.n_lambda; k = next.fetch_add(1)) {
          run_one(k, std::nullopt);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (int k = 0; k < path.n_lambda; ++k) {
    const FitResult& fit = fits[k];
    PathRow& row = result.fits[k];
    row.lambda = path.lambda_at(k);
    row.conv = fit.conv;
    row.f_ml = fit.f_ml;
    row.f_regsem = fit.f_regsem;
    row.iterations = fit.iterations;
    if (fit.theta.size() == q) {
      result.parameters.row(k) = fit.theta.transpose();
      row.effective_df = effective_df(fit.theta, ram);
      if (fit.conv != 99 && std::isfinite(fit.f_ml)) {
        row.indices = compute_indices(path.fit_ret, fit.f_ml, data.n, row.effective_df, ram);
        if (path.holdout) {
          for (const auto& [name, value] : holdout_eval(ram, fit.theta, *path.holdout)) {
            row.indices["holdout_" + name] = value;
          }
        }
      }
    }
  }

  const std::string metric_key = metric_name(path.metric);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < path.n_lambda; ++k) {
    const PathRow& row = result.fits[k];
    if (row.conv != 0) continue;
    auto it = row.indices.find(metric_key);
    if (it == row.indices.end() || !std::isfinite(it->second)) continue;
    if (it->second < best) {
      best = it->second;
      result.final_index = k;
    }
  }
  if (result.final_index) {
    result.final_pars = result.parameters.row(*result.final_index).transpose();
  }
  return result;
}

}  // namespace sempath
