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
#include "sempath/selection.hpp"
#include "sempath/simulate.hpp"

using namespace sempath;

namespace {

SampleMoments cfa_data(int n, unsigned seed) {
  Eigen::VectorXd loadings(7);
  loadings << 0.6, 0.8, 1.0, 0.7, 0.9, 0.0, 0.0;
  return moments_from_rows(simulate_cfa(n, loadings, seed), cfa_columns(7));
}

RamModel cfa_ram() { return build_ram(parse_model(cfa_model_text(7)), cfa_columns(7)); }

PenaltyConfig lasso_loadings() {
  PenaltyConfig pen;
  pen.kind = PenaltyKind::Lasso;
  for (int i = 1; i <= 7; ++i) pen.pars_pen.push_back(i);
  return pen;
}

}  // namespace

TEST_CASE("effective df counts nonzero free parameters") {
  RamModel ram = cfa_ram();
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(14, 0.5);
  CHECK(effective_df(theta, ram) == 14);
  theta(5) = 0.0;
  theta(6) = 0.0;
  CHECK(effective_df(theta, ram) == 12);
  theta.head(7).setZero();
  CHECK(effective_df(theta, ram) == 7);
  theta(0) = 1e-9;  // below zero_tol: float dust, not a parameter
  CHECK(effective_df(theta, ram) == 7);
}

TEST_CASE("bic arithmetic") {
  CHECK(bic(0.0, 250, 0) == 0.0);
  double base = bic(0.3, 250, 6);
  CHECK(bic(0.3, 250, 12) == doctest::Approx(base + std::log(250.0) * 6).epsilon(1e-12));
}

TEST_CASE("rmsea arithmetic") {
  CHECK(rmsea(0.0, 250, 10) == 0.0);
  // chi2 = 2 * df with df = 10, N = 101
  double f_ml = 20.0 / 100.0;
  CHECK(rmsea(f_ml, 101, 10) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rmsea(0.5, 250, 0) == 0.0);
}

TEST_CASE("model df bookkeeping") {
  RamModel ram = cfa_ram();
  CHECK(model_df(ram, 14) == 7 * 8 / 2 - 14);
  RamModel growth = build_ram(parse_model(growth_model_text(), true), growth_columns());
  int moments = 14 * 15 / 2 + 14;
  CHECK(model_df(growth, growth.q()) == moments - growth.q());
}

TEST_CASE("path over the default grid: 23 lambdas from 0 to 1.1") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 7);  // fixture with chi2 > df, so rmsea moves
  PathConfig path;
  path.n_lambda = 23;
  path.jump = 0.05;
  OptimizerConfig opt;
  PathResult result = run_path(ram, data, lasso_loadings(), path, opt);

  REQUIRE(result.fits.size() == 23);
  CHECK(result.fits.front().lambda == 0.0);
  CHECK(result.fits.back().lambda == doctest::Approx(1.1));
  int n_converged = 0;
  for (const auto& row : result.fits) {
    if (row.conv == 0) ++n_converged;
  }
  CHECK(n_converged == 23);
  REQUIRE(result.final_index.has_value());

  // selection re-scan: the final row minimizes the metric among conv == 0
  double best = result.fits[*result.final_index].indices.at("bic");
  for (const auto& row : result.fits) {
    if (row.conv == 0) CHECK(best <= row.indices.at("bic") + 1e-12);
  }

  // BIC improves while F_ML worsens once the true zeros are pruned
  const PathRow& first = result.fits.front();
  const PathRow& chosen = result.fits[*result.final_index];
  CHECK(*result.final_index > 0);
  CHECK(chosen.f_ml > first.f_ml);
  CHECK(chosen.indices.at("bic") < first.indices.at("bic"));
  CHECK(chosen.indices.at("rmsea") < first.indices.at("rmsea"));

  // U shape: interior argmin
  CHECK(*result.final_index < 22);

  // the zero-tol loadings are exact zeros at the selected model
  CHECK(result.final_pars(5) == 0.0);
  CHECK(result.final_pars(6) == 0.0);
}

TEST_CASE("single lambda = 0 grid is one MLE row") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 1002);
  PathConfig path;
  PenaltyConfig none;
  OptimizerConfig opt;
  PathResult result = run_path(ram, data, none, path, opt);
  REQUIRE(result.fits.size() == 1);
  CHECK(result.fits[0].lambda == 0.0);
  CHECK(result.fits[0].conv == 0);
  CHECK(result.fits[0].effective_df == 14);
}

TEST_CASE("warm and cold starts land in the same basin") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 1003);
  PathConfig warm;
  warm.n_lambda = 12;
  warm.jump = 0.05;
  PathConfig cold = warm;
  cold.warm_start = false;
  cold.threads = 2;
  OptimizerConfig opt;
  PathResult a = run_path(ram, data, lasso_loadings(), warm, opt);
  PathResult b = run_path(ram, data, lasso_loadings(), cold, opt);
  for (int k = 0; k < 12; ++k) {
    CHECK(std::abs(a.fits[k].f_regsem - b.fits[k].f_regsem) < 1e-3);
  }
}

TEST_CASE("adaptive lasso derives weights from the MLE and errors without one") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 1004);
  PenaltyConfig pen;
  pen.kind = PenaltyKind::AdaptiveLasso;
  for (int i = 1; i <= 7; ++i) pen.pars_pen.push_back(i);
  PathConfig path;
  path.n_lambda = 10;
  path.jump = 0.02;
  OptimizerConfig opt;
  PathResult result = run_path(ram, data, pen, path, opt);
  REQUIRE(result.final_index.has_value());
  CHECK(result.final_pars(5) == 0.0);
  CHECK(result.final_pars(6) == 0.0);

  OptimizerConfig starved = opt;
  starved.max_iter = 1;
  starved.tol = 1e-16;
  CHECK_THROWS_AS(run_path(ram, data, pen, path, starved), ModelError);
}

TEST_CASE("a path where nothing converges carries the table but no final model") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 1005);
  PathConfig path;
  path.n_lambda = 3;
  path.jump = 0.05;
  OptimizerConfig opt;
  opt.max_iter = 1;
  opt.tol = 1e-16;
  PathResult result = run_path(ram, data, lasso_loadings(), path, opt);
  CHECK(result.fits.size() == 3);
  CHECK_FALSE(result.final_index.has_value());
  for (const auto& row : result.fits) CHECK(row.conv == 1);
}

TEST_CASE("holdout evaluation") {
  RamModel ram = cfa_ram();
  SampleMoments data = cfa_data(250, 1006);
  PathConfig path;
  path.n_lambda = 23;
  path.jump = 0.05;
  OptimizerConfig opt;
  PathResult result = run_path(ram, data, lasso_loadings(), path, opt);
  REQUIRE(result.final_index.has_value());

  // identical moments: identical f_ml
  auto same = holdout_eval(ram, result.final_pars, data);
  CHECK(same.at("fml") ==
        doctest::Approx(result.fits[*result.final_index].f_ml).epsilon(1e-10));

  // an overshrunk fit predicts fresh data worse than the selected one
  SampleMoments fresh = cfa_data(250, 999);
  auto chosen = holdout_eval(ram, result.final_pars, fresh);
  auto overshrunk = holdout_eval(ram, result.parameters.row(22).transpose(), fresh);
  CHECK(overshrunk.at("fml") > chosen.at("fml"));

  // dimension mismatch
  SampleMoments tiny = data.subset({"y1", "y2"});
  CHECK_THROWS_AS(holdout_eval(ram, result.final_pars, tiny), DataError);
}

TEST_CASE("holdout discrepancy vanishes at the true parameters as N grows") {
  ModelSpec spec = parse_model(cfa_model_text(7));
  RamModel ram = build_ram(spec, cfa_columns(7));
  Eigen::VectorXd truth(14);
  truth << 0.6, 0.8, 1.0, 0.7, 0.9, 0.0, 0.0, 1, 1, 1, 1, 1, 1, 1;
  SampleMoments big = cfa_data(100000, 2024);
  auto eval = holdout_eval(ram, truth, big);
  CHECK(eval.at("fml") < 0.01);
}

TEST_CASE("growth path zeroes most of the null covariate regressions") {
  Eigen::MatrixXd rows = simulate_growth(200, 31415);
  SampleMoments data = moments_from_rows(rows, growth_columns());
  ModelSpec spec = growth_spec_fixed_x(data);
  RamModel ram = build_ram(spec, growth_columns());

  PenaltyConfig pen;
  pen.kind = PenaltyKind::Lasso;
  pen.pars_pen = growth_regression_ids(ram);
  REQUIRE(pen.pars_pen.size() == 20);

  PathConfig path;
  path.n_lambda = 40;
  path.jump = 0.05;
  OptimizerConfig opt;
  PathResult result = run_path(ram, data, pen, path, opt);
  REQUIRE(result.final_index.has_value());

  int zeroed_nulls = 0;
  int kept_large = 0;
  for (const auto& p : ram.params) {
    if (p.mat != RamMatrix::A) continue;
    bool is_null = !(p.name.rfind("c1 ->", 0) == 0 || p.name.rfind("c2 ->", 0) == 0);
    double est = result.final_pars(p.id - 1);
    if (is_null && est == 0.0) ++zeroed_nulls;
    if (p.name.rfind("c1 ->", 0) == 0 && est != 0.0) ++kept_large;
  }
  CHECK(zeroed_nulls >= 12);  // most of the 16 true zeros
  CHECK(kept_large == 2);     // both large effects survive
}
