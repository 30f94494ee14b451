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

#include "sempath/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace sempath {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string low = cell;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return low == "na" || low == "nan" || low == ".";
}

double parse_number(const std::string& cell, int line_no) {
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || (end && *end != '\0')) {
    throw DataError("non-numeric cell '" + cell + "' at data line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

void throw_if_not_pd(const Eigen::MatrixXd& m, const std::string& what) {
  if (m.rows() != m.cols()) throw DataError(what + " is not square");
  if (!m.isApprox(m.transpose(), 1e-10)) throw DataError(what + " is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DataError(what + " is not positive definite");
}

SampleMoments SampleMoments::subset(const std::vector<std::string>& names) const {
  std::map<std::string, int> index;
  for (int i = 0; i < nvar(); ++i) index[var_names[i]] = i;
  std::vector<int> pick;
  pick.reserve(names.size());
  for (const auto& nm : names) {
    auto it = index.find(nm);
    if (it == index.end()) throw DataError("variable '" + nm + "' not present in the data");
    pick.push_back(it->second);
  }

  SampleMoments out;
  out.n = n;
  out.n_dropped = n_dropped;
  out.var_names = names;
  const int p = static_cast<int>(pick.size());
  out.cov.resize(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) out.cov(i, j) = cov(pick[i], pick[j]);
  if (mean) {
    Eigen::VectorXd m(p);
    for (int i = 0; i < p; ++i) m(i) = (*mean)(pick[i]);
    out.mean = m;
  }
  return out;
}

SampleMoments moments_from_rows(const Eigen::MatrixXd& rows, std::vector<std::string> names,
                                bool use_n_minus_one) {
  const long n = rows.rows();
  const int p = static_cast<int>(rows.cols());
  if (n < 2) throw DataError("need at least 2 rows, got " + std::to_string(n));
  if (static_cast<int>(names.size()) != p) throw DataError("name/column count mismatch");

  Eigen::VectorXd mean = rows.colwise().mean();
  Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
  double divisor = use_n_minus_one ? static_cast<double>(n - 1) : static_cast<double>(n);
  Eigen::MatrixXd cov = (centered.transpose() * centered) / divisor;
  cov = ((cov + cov.transpose()) / 2.0).eval();
  throw_if_not_pd(cov, "sample covariance");

  SampleMoments out;
  out.cov = std::move(cov);
  out.mean = std::move(mean);
  out.n = n;
  out.var_names = std::move(names);
  return out;
}

SampleMoments moments_from_cov(const Eigen::MatrixXd& cov, std::optional<Eigen::VectorXd> mean,
                               long n, std::vector<std::string> names) {
  if (n < 2) throw DataError("sample size must be at least 2");
  if (cov.rows() != static_cast<long>(names.size())) {
    throw DataError("covariance dimension does not match variable names");
  }
  Eigen::MatrixXd c = (cov + cov.transpose()) / 2.0;
  throw_if_not_pd(c, "covariance matrix");
  if (mean && mean->size() != cov.rows()) throw DataError("mean vector length mismatch");

  SampleMoments out;
  out.cov = std::move(c);
  out.mean = std::move(mean);
  out.n = n;
  out.var_names = std::move(names);
  return out;
}

SampleMoments load_csv(const std::string& path, bool use_n_minus_one) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  long sidecar_n = -1;
  std::optional<std::vector<double>> sidecar_means;
  std::vector<std::string> header;
  std::string line;
  int line_no = 0;

  // Leading comments may carry covariance-input metadata.
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::string body = trim(t.substr(1));
      auto eq = body.find('=');
      if (eq != std::string::npos) {
        std::string key = trim(body.substr(0, eq));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        std::string val = trim(body.substr(eq + 1));
        if (key == "n") {
          sidecar_n = std::strtol(val.c_str(), nullptr, 10);
        } else if (key == "means") {
          std::vector<double> ms;
          for (const auto& cell : split_csv_line(val)) ms.push_back(parse_number(cell, line_no));
          sidecar_means = std::move(ms);
        }
      }
      continue;
    }
    header = split_csv_line(t);
    break;
  }
  if (header.empty()) throw DataError("missing header row in '" + path + "'");
  const int p = static_cast<int>(header.size());

  std::vector<std::vector<double>> rows;
  long dropped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split_csv_line(t);
    if (static_cast<int>(cells.size()) != p) {
      throw DataError("expected " + std::to_string(p) + " cells at line " +
                      std::to_string(line_no) + ", got " + std::to_string(cells.size()));
    }
    bool missing = std::any_of(cells.begin(), cells.end(), is_missing);
    if (missing && sidecar_n < 0) {
      ++dropped;
      continue;
    }
    std::vector<double> row(p);
    for (int j = 0; j < p; ++j) row[j] = parse_number(cells[j], line_no);
    rows.push_back(std::move(row));
  }

  if (sidecar_n >= 0) {
    if (static_cast<int>(rows.size()) != p) {
      throw DataError("covariance input needs " + std::to_string(p) + " rows, got " +
                      std::to_string(rows.size()));
    }
    Eigen::MatrixXd cov(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) cov(i, j) = rows[i][j];
    std::optional<Eigen::VectorXd> mean;
    if (sidecar_means) {
      if (static_cast<int>(sidecar_means->size()) != p) {
        throw DataError("means sidecar length mismatch");
      }
      mean = Eigen::Map<Eigen::VectorXd>(sidecar_means->data(), p);
    }
    return moments_from_cov(cov, std::move(mean), sidecar_n, header);
  }

  if (rows.size() < 2) {
    throw DataError("need at least 2 complete data rows, got " + std::to_string(rows.size()));
  }
  Eigen::MatrixXd m(static_cast<long>(rows.size()), p);
  for (size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < p; ++j) m(static_cast<long>(i), j) = rows[i][j];
  SampleMoments out = moments_from_rows(m, header, use_n_minus_one);
  out.n_dropped = dropped;
  return out;
}

}  // namespace sempath
