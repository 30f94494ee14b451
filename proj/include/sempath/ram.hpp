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

#ifndef SEMPATH_RAM_HPP
#define SEMPATH_RAM_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sempath/data.hpp"
#include "sempath/model_syntax.hpp"

namespace sempath {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RamMatrix { A, S, M };

struct ParamInfo {
  int id = 0;          // dense, 1-based
  RamMatrix mat = RamMatrix::A;
  int row = 0;         // full-variable index (observed block first, then latents)
  int col = 0;         // for M: col == row
  std::string label;   // from Labelled coefficients, else empty
  std::string name;    // "src -> dst", "a ~~ b", "v ~ 1"
  bool is_variance = false;  // S diagonal
};

/// RAM translation of a ModelSpec. Full-variable order is the observed
/// variables in `var_order` followed by the latents in definition order, so
/// the filter matrix is always [I 0]. A(i,j) holds the directed path j -> i.
struct RamModel {
  int p_obs = 0;
  int n_latent = 0;
  int t = 0;
  bool has_means = false;

  std::vector<std::string> full_names;  // size t
  Eigen::MatrixXd fixed_a;              // t x t, fixed entries (0 elsewhere)
  Eigen::MatrixXd fixed_s;
  Eigen::VectorXd fixed_m;              // size t (unused unless has_means)
  std::vector<ParamInfo> params;        // ids 1..q

  int q() const { return static_cast<int>(params.size()); }
  Eigen::MatrixXd filter() const;       // p_obs x t
  const ParamInfo& param(int id) const { return params.at(id - 1); }

  /// 1-based ids of free A cells (directed paths): the default penalty set.
  std::vector<int> directed_param_ids() const;
  /// 1-based ids of S-diagonal params (variance_floor targets).
  std::vector<int> variance_param_ids() const;
  /// Resolve a label to its param ids (a label may tag several cells).
  std::vector<int> ids_for_label(const std::string& label) const;

  void materialize(const Eigen::VectorXd& theta, Eigen::MatrixXd& a,
                   Eigen::MatrixXd& s, Eigen::VectorXd& m) const;

  /// Default start: 0.5 for directed paths, half the sample variance for
  /// observed residuals, half the mean sample variance for latent variances,
  /// 0 for covariances and means.
  Eigen::VectorXd default_start(const SampleMoments& data) const;
};

/// Compile a spec against the data's variable order. Adds the conventions
/// the syntax leaves implicit: unstated residual variances become Free S
/// cells, and in growth mode observed intercepts are Fixed(0) with latent
/// means Free. Parameter numbering follows spec order (loadings, then
/// regressions, then stated (co)variances, then auto-added variances, then
/// means) and does not depend on var_order.
RamModel build_ram(const ModelSpec& spec, const std::vector<std::string>& var_order);

struct ImpliedMoments {
  Eigen::MatrixXd sigma;                // exactly symmetric
  std::optional<Eigen::VectorXd> mu;
};

/// Sigma = F (I-A)^-1 S (I-A)^-T F^T, mu = F (I-A)^-1 M. nullopt when
/// (I - A) is numerically singular.
std::optional<ImpliedMoments> implied_moments(const RamModel& ram,
                                              const Eigen::VectorXd& theta);

/// Bound evaluator for the ML discrepancy and its analytic gradient.
/// F_ML = ln|Sigma| + tr(C Sigma^-1) - ln|C| - p (+ mean quadratic form).
/// Reusable workspace; not thread-safe across concurrent calls on one
/// instance (make one per thread).
class RamLikelihood {
 public:
  RamLikelihood(const RamModel& ram, const SampleMoments& data);

  /// nullopt when (I-A) is singular or Sigma is not positive definite.
  std::optional<double> value(const Eigen::VectorXd& theta);
  /// False on infeasible theta; otherwise fills f and grad.
  bool value_and_grad(const Eigen::VectorXd& theta, double& f, Eigen::VectorXd& grad);

  const RamModel& ram() const { return ram_; }
  const SampleMoments& data() const { return data_; }

 private:
  bool factorize(const Eigen::VectorXd& theta);

  RamModel ram_;
  SampleMoments data_;
  double log_det_c_ = 0.0;

  // workspace
  Eigen::MatrixXd a_, s_, b_, v_, sigma_, sigma_inv_, w_, g_full_, m_sym_, p_mat_;
  Eigen::VectorXd m_, mu_, delta_, r_, u_, m_t_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

double ml_discrepancy_or_throw(const RamModel& ram, const Eigen::VectorXd& theta,
                               const SampleMoments& data);
std::optional<double> ml_discrepancy(const RamModel& ram, const Eigen::VectorXd& theta,
                                     const SampleMoments& data);
std::optional<Eigen::VectorXd> ml_gradient(const RamModel& ram, const Eigen::VectorXd& theta,
                                           const SampleMoments& data);

/// Printable report of A, S, F (and M): param ids in free cells, constants
/// elsewhere.
std::string extract_matrices(const RamModel& ram);

}  // namespace sempath

#endif  // SEMPATH_RAM_HPP
