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

#ifndef SEMPATH_DATA_HPP
#define SEMPATH_DATA_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sempath {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SampleMoments {
  Eigen::MatrixXd cov;                 // p x p, symmetric positive definite
  std::optional<Eigen::VectorXd> mean; // present for raw-data input
  long n = 0;                          // sample size
  std::vector<std::string> var_names;  // column order matches cov
  long n_dropped = 0;                  // rows removed by listwise deletion

  int nvar() const { return static_cast<int>(cov.rows()); }

  /// Moments restricted to `names` (in that order). Throws DataError on a
  /// name not present.
  SampleMoments subset(const std::vector<std::string>& names) const;
};

/// Covariance (default: ML divisor N; use_n_minus_one switches to N-1) and
/// means from raw rows. Throws on n < 2 or a non-PD covariance.
SampleMoments moments_from_rows(const Eigen::MatrixXd& rows,
                                std::vector<std::string> names,
                                bool use_n_minus_one = false);

SampleMoments moments_from_cov(const Eigen::MatrixXd& cov,
                               std::optional<Eigen::VectorXd> mean, long n,
                               std::vector<std::string> names);

/// CSV loader. Header row of variable names, then either raw numeric rows
/// (empty/NA cells trigger listwise deletion of the row), or — when a
/// leading `# n=<N>` comment is present — a p x p covariance matrix with an
/// optional `# means=v1,v2,...` comment.
SampleMoments load_csv(const std::string& path, bool use_n_minus_one = false);

void throw_if_not_pd(const Eigen::MatrixXd& m, const std::string& what);

}  // namespace sempath

#endif  // SEMPATH_DATA_HPP
