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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sempath/data.hpp"

using namespace sempath;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

Eigen::MatrixXd random_rows(int n, int p, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  Eigen::MatrixXd m(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) m(i, j) = norm(rng);
  return m;
}

}  // namespace

TEST_CASE("raw CSV: 3 columns, 100 rows") {
  Eigen::MatrixXd rows = random_rows(100, 3, 1);
  std::ostringstream csv;
  csv.precision(17);
  csv << "a,b,c\n";
  for (int i = 0; i < rows.rows(); ++i) {
    csv << rows(i, 0) << "," << rows(i, 1) << "," << rows(i, 2) << "\n";
  }
  auto path = temp_file("sempath_data_raw.csv");
  write_file(path, csv.str());

  SampleMoments m = load_csv(path.string());
  CHECK(m.n == 100);
  CHECK(m.nvar() == 3);
  CHECK(m.var_names == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(m.mean.has_value());

  SampleMoments direct = moments_from_rows(rows, {"a", "b", "c"});
  CHECK((m.cov - direct.cov).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((*m.mean - *direct.mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single data row is an error") {
  auto path = temp_file("sempath_data_one.csv");
  write_file(path, "a,b\n1.0,2.0\n");
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
}

TEST_CASE("non-numeric cell is an error") {
  auto path = temp_file("sempath_data_bad.csv");
  write_file(path, "a,b\n1.0,2.0\n1.0,zebra\n");
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
}

TEST_CASE("listwise deletion of missing cells, count reported") {
  auto path = temp_file("sempath_data_missing.csv");
  std::ostringstream csv;
  csv << "a,b\n";
  Eigen::MatrixXd rows = random_rows(40, 2, 3);
  for (int i = 0; i < 40; ++i) {
    if (i == 5) {
      csv << rows(i, 0) << ",NA\n";
    } else if (i == 9) {
      csv << "," << rows(i, 1) << "\n";
    } else {
      csv << rows(i, 0) << "," << rows(i, 1) << "\n";
    }
  }
  write_file(path, csv.str());
  SampleMoments m = load_csv(path.string());
  CHECK(m.n == 38);
  CHECK(m.n_dropped == 2);
}

TEST_CASE("covariance input with sidecar n round-trips the moments") {
  Eigen::MatrixXd rows = random_rows(250, 4, 5);
  SampleMoments raw = moments_from_rows(rows, {"w", "x", "y", "z"});

  std::ostringstream csv;
  csv.precision(17);
  csv << "# n=250\n";
  csv << "# means=" << (*raw.mean)(0) << "," << (*raw.mean)(1) << "," << (*raw.mean)(2) << ","
      << (*raw.mean)(3) << "\n";
  csv << "w,x,y,z\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) csv << (j ? "," : "") << raw.cov(i, j);
    csv << "\n";
  }
  auto path = temp_file("sempath_data_cov.csv");
  write_file(path, csv.str());

  SampleMoments m = load_csv(path.string());
  CHECK(m.n == 250);
  CHECK((m.cov - raw.cov).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(m.mean.has_value());
  CHECK((*m.mean - *raw.mean).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-PD covariance input is rejected") {
  auto path = temp_file("sempath_data_nonpd.csv");
  write_file(path, "# n=50\na,b\n1.0,2.0\n2.0,1.0\n");
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
}

TEST_CASE("N vs N-1 divisor") {
  Eigen::MatrixXd rows = random_rows(50, 2, 7);
  SampleMoments ml = moments_from_rows(rows, {"a", "b"}, false);
  SampleMoments unbiased = moments_from_rows(rows, {"a", "b"}, true);
  CHECK((unbiased.cov * 49.0 / 50.0 - ml.cov).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("subset picks and reorders") {
  Eigen::MatrixXd rows = random_rows(60, 3, 9);
  SampleMoments m = moments_from_rows(rows, {"a", "b", "c"});
  SampleMoments sub = m.subset({"c", "a"});
  CHECK(sub.var_names == std::vector<std::string>{"c", "a"});
  CHECK(sub.cov(0, 0) == m.cov(2, 2));
  CHECK(sub.cov(0, 1) == m.cov(2, 0));
  CHECK((*sub.mean)(1) == (*m.mean)(0));
  CHECK_THROWS_AS(m.subset({"nope"}), DataError);
}
