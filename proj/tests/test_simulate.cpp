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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sempath/simulate.hpp"

using namespace sempath;

TEST_CASE("covariates are iid standard normal at Monte-Carlo scale") {
  Eigen::MatrixXd rows = simulate_growth(1000000, 8);
  SampleMoments m = moments_from_rows(rows, growth_columns());
  Eigen::MatrixXd c_block = m.cov.bottomRightCorner(10, 10);
  CHECK((c_block - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 5e-3);
  CHECK(m.mean->cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("null covariates have no effect, growth identities hold") {
  Eigen::MatrixXd rows = simulate_growth(1000000, 9);
  SampleMoments m = moments_from_rows(rows, growth_columns());

  // cov(x1, c3) = cov(i, c3) = 0 for a true-zero effect
  int x1 = 0, c3 = 4 + 2;
  CHECK(std::abs(m.cov(x1, c3)) < 5e-3);

  // E[x4 - x1] = 3 E[s] = 0, and cov(x4 - x1, c1) = 3 * 1
  double mean_diff = (*m.mean)(3) - (*m.mean)(0);
  CHECK(std::abs(mean_diff) < 1.5e-2);
  int c1 = 4;
  double cov_diff = m.cov(3, c1) - m.cov(0, c1);
  CHECK(cov_diff == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("cfa: zero-loading indicator is uncorrelated, covariance matches the analytic form") {
  Eigen::VectorXd loadings(7);
  loadings << 0.6, 0.8, 1.0, 0.7, 0.9, 0.0, 0.0;
  Eigen::MatrixXd rows = simulate_cfa(1000000, loadings, 10);
  SampleMoments m = moments_from_rows(rows, cfa_columns(7));

  Eigen::MatrixXd analytic = loadings * loadings.transpose();
  analytic.diagonal().array() += 1.0;
  CHECK((m.cov - analytic).cwiseAbs().maxCoeff() < 5e-3);
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(m.cov(5, j)) < 5e-3);
    CHECK(std::abs(m.cov(6, j)) < 5e-3);
  }
}

TEST_CASE("cfa with heterogeneous residuals matches its analytic covariance") {
  Eigen::VectorXd loadings(4);
  loadings << 0.6, 1.0, 0.0, 0.0;
  Eigen::VectorXd resid_sd(4);
  resid_sd << 0.5, 0.5, 2.0, 2.0;
  Eigen::MatrixXd rows = simulate_cfa(1000000, loadings, 11, resid_sd);
  SampleMoments m = moments_from_rows(rows, cfa_columns(4));

  Eigen::MatrixXd analytic = loadings * loadings.transpose();
  analytic.diagonal() += resid_sd.cwiseProduct(resid_sd);
  Eigen::MatrixXd scale = analytic.cwiseAbs().cwiseMax(Eigen::MatrixXd::Constant(4, 4, 1.0));
  CHECK(((m.cov - analytic).cwiseAbs().cwiseQuotient(scale)).maxCoeff() < 5e-3);
}

TEST_CASE("seeded generation is deterministic") {
  Eigen::MatrixXd a = simulate_growth(500, 77);
  Eigen::MatrixXd b = simulate_growth(500, 77);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd c = simulate_growth(500, 78);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);

  Eigen::VectorXd loadings = Eigen::VectorXd::Constant(4, 0.7);
  Eigen::MatrixXd d = simulate_cfa(300, loadings, 5);
  Eigen::MatrixXd e = simulate_cfa(300, loadings, 5);
  CHECK((d - e).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fixed-x growth spec compiles to the 29-parameter model") {
  Eigen::MatrixXd rows = simulate_growth(80, 2);
  SampleMoments m = moments_from_rows(rows, growth_columns());
  ModelSpec spec = growth_spec_fixed_x(m);
  RamModel ram = build_ram(spec, growth_columns());
  CHECK(ram.q() == 29);
  CHECK(growth_regression_ids(ram).size() == 20);
  // covariate block is fixed at the sample values
  int c1 = 4;
  CHECK(ram.fixed_s(c1, c1) == m.cov(c1, c1));
  CHECK(ram.fixed_s(c1, c1 + 3) == m.cov(c1, c1 + 3));
}

TEST_CASE("wald standard errors flag the true effects at N = 1000") {
  Eigen::MatrixXd rows = simulate_growth(1000, 21);
  SampleMoments m = moments_from_rows(rows, growth_columns());
  ModelSpec spec = growth_spec_fixed_x(m);
  RamModel ram = build_ram(spec, growth_columns());

  PenaltyConfig none;
  OptimizerConfig opt;
  FitResult mle = fit_sem(ram, m, none, opt);
  REQUIRE(mle.conv == 0);
  auto se = wald_standard_errors(ram, mle.theta, m);
  REQUIRE(se.has_value());

  for (const auto& p : ram.params) {
    if (p.name == "c1 -> i" || p.name == "c1 -> s") {
      CHECK(std::abs(mle.theta(p.id - 1) / (*se)(p.id - 1)) > 1.96);
    }
  }
}

TEST_CASE("replication bookkeeping: 16 zeros and 4 nonzeros per replication") {
  SimDesign design;
  design.n = 200;
  design.n_reps = 3;
  design.seed = 11;
  PathConfig path;
  path.n_lambda = 10;
  path.jump = 0.1;
  OptimizerConfig opt;
  ReplicationReport report =
      replication_study(design, {PenaltyKind::None, PenaltyKind::Lasso}, path, opt, 2);

  REQUIRE(report.methods.size() == 2);
  for (const auto& m : report.methods) {
    CHECK(m.fp_count + m.tn_count == 16L * m.n_converged);
    CHECK(m.fn_count + m.tp_count == 4L * m.n_converged);
    CHECK(m.fp_rate >= 0.0);
    CHECK(m.fp_rate <= 1.0);
    CHECK(m.fn_rate >= 0.0);
    CHECK(m.fn_rate <= 1.0);
  }
}

TEST_CASE("replication report is reproducible under a fixed seed and any thread count") {
  SimDesign design;
  design.n = 80;
  design.n_reps = 4;
  design.seed = 424242;
  PathConfig path;
  path.n_lambda = 8;
  path.jump = 0.1;
  OptimizerConfig opt;
  auto a = replication_study(design, {PenaltyKind::Lasso}, path, opt, 1);
  auto b = replication_study(design, {PenaltyKind::Lasso}, path, opt, 2);
  CHECK(a.methods[0].fp_count == b.methods[0].fp_count);
  CHECK(a.methods[0].fn_count == b.methods[0].fn_count);
  CHECK(a.methods[0].n_converged == b.methods[0].n_converged);
  CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("report serializes to csv and a table") {
  SimDesign design;
  design.n = 100;
  design.n_reps = 2;
  design.seed = 3;
  PathConfig path;
  path.n_lambda = 5;
  path.jump = 0.1;
  OptimizerConfig opt;
  ReplicationReport report = replication_study(design, {PenaltyKind::None}, path, opt, 1);
  std::string csv = report.to_csv();
  CHECK(csv.find("false_positive_rate") != std::string::npos);
  CHECK(csv.find("ml") != std::string::npos);
  std::string table = report.to_table();
  CHECK(table.find("False positives") != std::string::npos);
  CHECK(table.find("N = 100") != std::string::npos);
}
