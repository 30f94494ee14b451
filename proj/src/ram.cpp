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

#include "sempath/ram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace sempath {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Builder {
  const ModelSpec& spec;
  RamModel ram;
  std::map<std::string, int> index;  // full-variable name -> index
  std::set<std::pair<int, int>> a_cells, s_cells;
  std::set<int> m_cells;

  explicit Builder(const ModelSpec& s) : spec(s) {}

  int require(const std::string& name, const char* role) {
    auto it = index.find(name);
    if (it == index.end()) {
      throw ModelError(std::string("unknown variable '") + name + "' (" + role + ")");
    }
    return it->second;
  }

  void add_param(RamMatrix mat, int row, int col, const std::string& label, std::string name,
                 bool is_variance) {
    ParamInfo p;
    p.id = ram.q() + 1;
    p.mat = mat;
    p.row = row;
    p.col = col;
    p.label = label;
    p.name = std::move(name);
    p.is_variance = is_variance;
    ram.params.push_back(std::move(p));
  }

  void place_a(const std::string& src, const std::string& dst, const Coefficient& coef,
               const char* role) {
    int col = require(src, role);
    int row = require(dst, role);
    if (!a_cells.insert({row, col}).second) {
      throw ModelError("duplicate path '" + src + " -> " + dst + "'");
    }
    if (coef.kind == CoefKind::Fixed) {
      ram.fixed_a(row, col) = coef.value;
    } else {
      add_param(RamMatrix::A, row, col, coef.kind == CoefKind::Labelled ? coef.label : "",
                src + " -> " + dst, false);
    }
  }

  void place_s(const std::string& v1, const std::string& v2, const Coefficient& coef) {
    int r = require(v1, "covariance");
    int c = require(v2, "covariance");
    int lo = std::min(r, c), hi = std::max(r, c);
    if (!s_cells.insert({lo, hi}).second) {
      throw ModelError("duplicate (co)variance '" + v1 + " ~~ " + v2 + "'");
    }
    if (coef.kind == CoefKind::Fixed) {
      ram.fixed_s(r, c) = coef.value;
      ram.fixed_s(c, r) = coef.value;
    } else {
      add_param(RamMatrix::S, r, c, coef.kind == CoefKind::Labelled ? coef.label : "",
                v1 + " ~~ " + v2, r == c);
    }
  }
};

}  // namespace

RamModel build_ram(const ModelSpec& spec, const std::vector<std::string>& var_order) {
  // Observed rows follow var_order restricted to the model's variables.
  std::set<std::string> model_observed(spec.observed_vars.begin(), spec.observed_vars.end());
  std::vector<std::string> rows;
  for (const auto& v : var_order) {
    if (model_observed.count(v)) rows.push_back(v);
  }
  if (rows.size() != spec.observed_vars.size()) {
    for (const auto& v : spec.observed_vars) {
      if (std::find(var_order.begin(), var_order.end(), v) == var_order.end()) {
        throw ModelError("unknown variable '" + v + "' (not a data column)");
      }
    }
  }

  Builder b(spec);
  RamModel& ram = b.ram;
  ram.p_obs = static_cast<int>(rows.size());
  ram.n_latent = static_cast<int>(spec.latent_vars.size());
  ram.t = ram.p_obs + ram.n_latent;
  ram.has_means = spec.growth_mode;
  ram.full_names = rows;
  ram.full_names.insert(ram.full_names.end(), spec.latent_vars.begin(), spec.latent_vars.end());
  ram.fixed_a = Eigen::MatrixXd::Zero(ram.t, ram.t);
  ram.fixed_s = Eigen::MatrixXd::Zero(ram.t, ram.t);
  ram.fixed_m = Eigen::VectorXd::Zero(ram.t);
  for (int i = 0; i < ram.t; ++i) b.index[ram.full_names[i]] = i;

  // Identification convention enforced here rather than at parse time.
  for (const auto& issue : validate_spec(spec).issues) {
    if (issue.message.find("no scale") != std::string::npos) {
      throw ModelError(issue.message);
    }
  }

  // 1. measurement loadings, spec order
  for (const auto& def : spec.latent_defs) {
    for (const auto& ind : def.indicators) {
      b.place_a(def.latent, ind.name, ind.coef, "indicator");
    }
  }
  // 2. regressions (A cell: column = predictor, row = outcome)
  for (const auto& r : spec.regressions) {
    b.place_a(r.predictor, r.outcome, r.coef, "regression");
  }
  // 3. stated (co)variances, then auto-added free residual variances. The
  // auto-add order follows the model declaration (not var_order) so that
  // parameter ids never depend on the data's column order.
  for (const auto& c : spec.covariances) {
    b.place_s(c.var1, c.var2, c.coef);
  }
  auto auto_variance = [&](const std::string& name) {
    int i = b.index.at(name);
    if (!b.s_cells.count({i, i})) {
      b.s_cells.insert({i, i});
      b.add_param(RamMatrix::S, i, i, "", name + " ~~ " + name, true);
    }
  };
  for (const auto& name : spec.observed_vars) auto_variance(name);
  for (const auto& name : spec.latent_vars) auto_variance(name);
  // 4. mean structure: observed intercepts fixed at 0, latent means free
  if (ram.has_means) {
    for (int i = ram.p_obs; i < ram.t; ++i) {
      b.add_param(RamMatrix::M, i, i, "", ram.full_names[i] + " ~ 1", false);
    }
  }

  return b.ram;
}

Eigen::MatrixXd RamModel::filter() const {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p_obs, t);
  for (int i = 0; i < p_obs; ++i) f(i, i) = 1.0;
  return f;
}

std::vector<int> RamModel::directed_param_ids() const {
  std::vector<int> out;
  for (const auto& p : params) {
    if (p.mat == RamMatrix::A) out.push_back(p.id);
  }
  return out;
}

std::vector<int> RamModel::variance_param_ids() const {
  std::vector<int> out;
  for (const auto& p : params) {
    if (p.is_variance) out.push_back(p.id);
  }
  return out;
}

std::vector<int> RamModel::ids_for_label(const std::string& label) const {
  std::vector<int> out;
  for (const auto& p : params) {
    if (!p.label.empty() && p.label == label) out.push_back(p.id);
  }
  return out;
}

void RamModel::materialize(const Eigen::VectorXd& theta, Eigen::MatrixXd& a, Eigen::MatrixXd& s,
                           Eigen::VectorXd& m) const {
  a = fixed_a;
  s = fixed_s;
  m = fixed_m;
  for (const auto& p : params) {
    double v = theta(p.id - 1);
    switch (p.mat) {
      case RamMatrix::A:
        a(p.row, p.col) = v;
        break;
      case RamMatrix::S:
        s(p.row, p.col) = v;
        s(p.col, p.row) = v;
        break;
      case RamMatrix::M:
        m(p.row) = v;
        break;
    }
  }
}

Eigen::VectorXd RamModel::default_start(const SampleMoments& data) const {
  std::map<std::string, int> data_index;
  for (int i = 0; i < data.nvar(); ++i) data_index[data.var_names[i]] = i;
  double mean_var = data.cov.diagonal().mean();

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(q());
  for (const auto& p : params) {
    switch (p.mat) {
      case RamMatrix::A:
        theta(p.id - 1) = 0.5;
        break;
      case RamMatrix::S:
        if (p.is_variance) {
          auto it = data_index.find(full_names[p.row]);
          theta(p.id - 1) = 0.5 * (it != data_index.end() ? data.cov(it->second, it->second)
                                                          : mean_var);
        }
        break;
      case RamMatrix::M:
        break;
    }
  }
  return theta;
}

std::optional<ImpliedMoments> implied_moments(const RamModel& ram, const Eigen::VectorXd& theta) {
  Eigen::MatrixXd a, s;
  Eigen::VectorXd m;
  ram.materialize(theta, a, s, m);

  Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(ram.t, ram.t) - a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(i_minus_a);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::MatrixXd b = lu.inverse();

  Eigen::MatrixXd v = b * s * b.transpose();
  ImpliedMoments out;
  out.sigma = v.topLeftCorner(ram.p_obs, ram.p_obs);
  out.sigma = ((out.sigma + out.sigma.transpose()) / 2.0).eval();
  if (ram.has_means) {
    out.mu = (b * m).head(ram.p_obs);
  }
  return out;
}

RamLikelihood::RamLikelihood(const RamModel& ram, const SampleMoments& data)
    : ram_(ram), data_(data) {
  if (data_.nvar() != ram_.p_obs) {
    data_ = data.subset(std::vector<std::string>(ram.full_names.begin(),
                                                 ram.full_names.begin() + ram.p_obs));
  } else {
    for (int i = 0; i < ram_.p_obs; ++i) {
      if (data_.var_names[i] != ram_.full_names[i]) {
        data_ = data.subset(std::vector<std::string>(ram.full_names.begin(),
                                                     ram.full_names.begin() + ram.p_obs));
        break;
      }
    }
  }
  if (ram_.has_means && !data_.mean) {
    throw DataError("model has a mean structure but the data carry no means");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(data_.cov);
  if (llt.info() != Eigen::Success) throw DataError("sample covariance is not positive definite");
  log_det_c_ = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();

  const int t = ram_.t, p = ram_.p_obs;
  a_.resize(t, t);
  s_.resize(t, t);
  b_.resize(t, t);
  v_.resize(t, t);
  sigma_.resize(p, p);
  sigma_inv_.resize(p, p);
  w_.resize(p, p);
  g_full_.resize(t, t);
  m_sym_.resize(t, t);
  p_mat_.resize(t, t);
  m_.resize(t);
  mu_.resize(p);
  delta_.resize(p);
  r_.resize(p);
  u_.resize(t);
  m_t_.resize(t);
}

bool RamLikelihood::factorize(const Eigen::VectorXd& theta) {
  const int t = ram_.t, p = ram_.p_obs;
  ram_.materialize(theta, a_, s_, m_);

  Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(t, t) - a_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(i_minus_a);
  if (!lu.isInvertible()) return false;
  b_ = lu.inverse();

  v_ = b_ * s_ * b_.transpose();
  sigma_ = v_.topLeftCorner(p, p);
  sigma_ = ((sigma_ + sigma_.transpose()) / 2.0).eval();
  llt_.compute(sigma_);
  if (llt_.info() != Eigen::Success) return false;
  if ((sigma_.diagonal().array() <= 0.0).any()) return false;

  if (ram_.has_means) {
    m_t_ = b_ * m_;
    mu_ = m_t_.head(p);
    delta_ = *data_.mean - mu_;
  }
  return true;
}

std::optional<double> RamLikelihood::value(const Eigen::VectorXd& theta) {
  if (!factorize(theta)) return std::nullopt;
  const int p = ram_.p_obs;

  double log_det = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double trace = llt_.solve(data_.cov).trace();
  double f = log_det + trace - log_det_c_ - p;
  if (ram_.has_means) {
    r_ = llt_.solve(delta_);
    f += delta_.dot(r_);
  }
  if (!std::isfinite(f)) return std::nullopt;
  return f;
}

bool RamLikelihood::value_and_grad(const Eigen::VectorXd& theta, double& f,
                                   Eigen::VectorXd& grad) {
  auto val = value(theta);
  if (!val) return false;
  f = *val;

  const int p = ram_.p_obs;
  sigma_inv_ = llt_.solve(Eigen::MatrixXd::Identity(p, p));
  w_ = sigma_inv_ - sigma_inv_ * data_.cov * sigma_inv_;

  // G lifts the weight matrix into the full variable space; the mean term
  // folds into the same Sigma-derivative contraction.
  g_full_.setZero();
  if (ram_.has_means) {
    g_full_.topLeftCorner(p, p) = w_ - r_ * r_.transpose();
    u_ = b_.transpose().leftCols(p) * r_;
  } else {
    g_full_.topLeftCorner(p, p) = w_;
  }

  m_sym_ = b_.transpose() * g_full_ * b_;
  p_mat_ = v_ * g_full_ * b_;

  grad.resize(ram_.q());
  for (const auto& prm : ram_.params) {
    double g = 0.0;
    switch (prm.mat) {
      case RamMatrix::A:
        // d Sigma / d a(row,col) contracts to 2 (V G B)_(col,row)
        g = 2.0 * p_mat_(prm.col, prm.row);
        if (ram_.has_means) g -= 2.0 * u_(prm.row) * m_t_(prm.col);
        break;
      case RamMatrix::S:
        g = prm.row == prm.col ? m_sym_(prm.row, prm.row) : 2.0 * m_sym_(prm.row, prm.col);
        break;
      case RamMatrix::M:
        g = -2.0 * u_(prm.row);
        break;
    }
    grad(prm.id - 1) = g;
  }
  return true;
}

std::optional<double> ml_discrepancy(const RamModel& ram, const Eigen::VectorXd& theta,
                                     const SampleMoments& data) {
  RamLikelihood lik(ram, data);
  return lik.value(theta);
}

double ml_discrepancy_or_throw(const RamModel& ram, const Eigen::VectorXd& theta,
                               const SampleMoments& data) {
  auto v = ml_discrepancy(ram, theta, data);
  if (!v) throw ModelError("implied covariance is not positive definite at theta");
  return *v;
}

std::optional<Eigen::VectorXd> ml_gradient(const RamModel& ram, const Eigen::VectorXd& theta,
                                           const SampleMoments& data) {
  RamLikelihood lik(ram, data);
  double f;
  Eigen::VectorXd g;
  if (!lik.value_and_grad(theta, f, g)) return std::nullopt;
  return g;
}

std::string extract_matrices(const RamModel& ram) {
  auto cell_text = [&](RamMatrix mat, int r, int c) -> std::string {
    for (const auto& p : ram.params) {
      if (p.mat != mat) continue;
      if (mat == RamMatrix::S) {
        if ((p.row == r && p.col == c) || (p.row == c && p.col == r)) {
          return std::to_string(p.id);
        }
      } else if (p.row == r && (mat == RamMatrix::M || p.col == c)) {
        return std::to_string(p.id);
      }
    }
    switch (mat) {
      case RamMatrix::A:
        return format_value(ram.fixed_a(r, c));
      case RamMatrix::S:
        return format_value(ram.fixed_s(r, c));
      case RamMatrix::M:
        return format_value(ram.fixed_m(r));
    }
    return "0";
  };

  std::ostringstream out;
  auto print_square = [&](const char* title, RamMatrix mat) {
    out << title << "\n";
    size_t w = 1;
    for (const auto& n : ram.full_names) w = std::max(w, n.size());
    std::vector<std::vector<std::string>> cells(ram.t, std::vector<std::string>(ram.t));
    for (int r = 0; r < ram.t; ++r)
      for (int c = 0; c < ram.t; ++c) {
        cells[r][c] = cell_text(mat, r, c);
        w = std::max(w, cells[r][c].size());
      }
    auto pad = [&](const std::string& s) {
      return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
    };
    out << pad("");
    for (const auto& n : ram.full_names) out << " " << pad(n);
    out << "\n";
    for (int r = 0; r < ram.t; ++r) {
      out << pad(ram.full_names[r]);
      for (int c = 0; c < ram.t; ++c) out << " " << pad(cells[r][c]);
      out << "\n";
    }
    out << "\n";
  };

  print_square("A", RamMatrix::A);
  print_square("S", RamMatrix::S);

  out << "F\n";
  Eigen::MatrixXd f = ram.filter();
  size_t w = 1;
  for (const auto& n : ram.full_names) w = std::max(w, n.size());
  auto pad = [&](const std::string& s) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  out << pad("");
  for (const auto& n : ram.full_names) out << " " << pad(n);
  out << "\n";
  for (int r = 0; r < ram.p_obs; ++r) {
    out << pad(ram.full_names[r]);
    for (int c = 0; c < ram.t; ++c) out << " " << pad(format_value(f(r, c)));
    out << "\n";
  }
  out << "\n";

  if (ram.has_means) {
    out << "M\n";
    for (int r = 0; r < ram.t; ++r) {
      out << pad(ram.full_names[r]) << " " << cell_text(RamMatrix::M, r, r) << "\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sempath
