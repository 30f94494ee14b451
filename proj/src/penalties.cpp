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

#include "sempath/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sempath {

namespace {

double soft(double z, double t) {
  double a = std::abs(z) - t;
  return a > 0.0 ? (z > 0.0 ? a : -a) : 0.0;
}

double scad_value(double x, double lambda, double gamma) {
  double a = std::abs(x);
  if (a <= lambda) return lambda * a;
  if (a <= gamma * lambda) {
    return (2.0 * gamma * lambda * a - a * a - lambda * lambda) / (2.0 * (gamma - 1.0));
  }
  return lambda * lambda * (gamma + 1.0) / 2.0;
}

double mcp_value(double x, double lambda, double gamma) {
  double a = std::abs(x);
  if (a <= gamma * lambda) return lambda * a - a * a / (2.0 * gamma);
  return gamma * lambda * lambda / 2.0;
}

// Piecewise objectives: the minimizer is a branch stationary point or a
// branch boundary. Evaluating the handful of candidates is exact and stays
// valid outside the textbook gamma ranges (MCP with gamma <= 1 degenerates
// to hard thresholding).
double argmin_candidates(double z, const double* cand, int n,
                         double (*pen)(double, double, double), double lambda, double gamma) {
  double best_x = 0.0;
  double best_f = 0.5 * z * z + pen(0.0, lambda, gamma);
  for (int i = 0; i < n; ++i) {
    double x = cand[i];
    double f = 0.5 * (x - z) * (x - z) + pen(x, lambda, gamma);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  return best_x;
}

// z >= 0, t = effective lambda. Branch stationary points clipped to their
// branches, plus the branch boundaries.
double scad_prox_abs(double z, double t, double gamma) {
  if (t <= 0.0) return z;
  double cand[5];
  cand[0] = std::clamp(z - t, 0.0, t);
  cand[1] = t;
  cand[2] = gamma > 2.0
                ? std::clamp(((gamma - 1.0) * z - gamma * t) / (gamma - 2.0), t, gamma * t)
                : t;
  cand[3] = gamma * t;
  cand[4] = std::max(z, gamma * t);
  return argmin_candidates(z, cand, 5, scad_value, t, gamma);
}

double mcp_prox_abs(double z, double t, double gamma) {
  if (t <= 0.0) return z;
  double cand[3];
  cand[0] =
      gamma > 1.0 ? std::clamp(soft(z, t) * gamma / (gamma - 1.0), 0.0, gamma * t) : 0.0;
  cand[1] = gamma * t;
  cand[2] = std::max(z, gamma * t);
  return argmin_candidates(z, cand, 3, mcp_value, t, gamma);
}

}  // namespace

const char* penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::None:
      return "none";
    case PenaltyKind::Lasso:
      return "lasso";
    case PenaltyKind::Ridge:
      return "ridge";
    case PenaltyKind::ElasticNet:
      return "enet";
    case PenaltyKind::AdaptiveLasso:
      return "alasso";
    case PenaltyKind::Scad:
      return "scad";
    case PenaltyKind::Mcp:
      return "mcp";
  }
  return "?";
}

PenaltyKind penalty_from_name(const std::string& name) {
  if (name == "none") return PenaltyKind::None;
  if (name == "lasso") return PenaltyKind::Lasso;
  if (name == "ridge") return PenaltyKind::Ridge;
  if (name == "enet") return PenaltyKind::ElasticNet;
  if (name == "alasso") return PenaltyKind::AdaptiveLasso;
  if (name == "scad") return PenaltyKind::Scad;
  if (name == "mcp") return PenaltyKind::Mcp;
  throw std::invalid_argument("unknown penalty type '" + name + "'");
}

void PenaltyConfig::validate(int q) const {
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and >= 0");
  }
  if (kind == PenaltyKind::ElasticNet && (alpha < 0.0 || alpha > 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (kind == PenaltyKind::Scad && gamma <= 2.0) {
    throw std::invalid_argument("SCAD requires gamma > 2");
  }
  if (kind == PenaltyKind::Mcp && gamma <= 0.0) {
    throw std::invalid_argument("MCP requires gamma > 0");
  }
  if (kind == PenaltyKind::AdaptiveLasso && weights.size() != pars_pen.size()) {
    throw std::invalid_argument("adaptive lasso needs one weight per penalized parameter");
  }
  if (kind != PenaltyKind::None && pars_pen.empty()) {
    throw std::invalid_argument("penalty requested but pars_pen is empty");
  }
  for (int id : pars_pen) {
    if (id < 1 || (q > 0 && id > q)) {
      throw std::invalid_argument("pars_pen id " + std::to_string(id) + " out of range");
    }
  }
}

double PenaltyConfig::weight_for(int param_id) const {
  if (kind != PenaltyKind::AdaptiveLasso) return 1.0;
  for (size_t i = 0; i < pars_pen.size(); ++i) {
    if (pars_pen[i] == param_id) return weights[i];
  }
  return 1.0;
}

double penalty_unit_value(PenaltyKind kind, double x, double lambda, double alpha, double gamma,
                          double weight) {
  double a = std::abs(x);
  switch (kind) {
    case PenaltyKind::None:
      return 0.0;
    case PenaltyKind::Lasso:
      return lambda * a;
    case PenaltyKind::Ridge:
      return lambda * x * x;
    case PenaltyKind::ElasticNet:
      return lambda * ((1.0 - alpha) * x * x + alpha * a);
    case PenaltyKind::AdaptiveLasso:
      return lambda * weight * a;
    case PenaltyKind::Scad:
      return scad_value(x, lambda, gamma);
    case PenaltyKind::Mcp:
      return mcp_value(x, lambda, gamma);
  }
  return 0.0;
}

double penalty_value(const Eigen::VectorXd& theta, const PenaltyConfig& cfg) {
  if (cfg.kind == PenaltyKind::None || cfg.lambda == 0.0) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i < cfg.pars_pen.size(); ++i) {
    int id = cfg.pars_pen[i];
    double w = cfg.kind == PenaltyKind::AdaptiveLasso ? cfg.weights[i] : 1.0;
    total += penalty_unit_value(cfg.kind, theta(id - 1), cfg.lambda, cfg.alpha, cfg.gamma, w);
  }
  return total;
}

double prox_scalar(double z, double t, PenaltyKind kind, double alpha, double gamma) {
  if (t <= 0.0 || kind == PenaltyKind::None) return z;
  double a = std::abs(z);
  double sign = z < 0.0 ? -1.0 : 1.0;
  switch (kind) {
    case PenaltyKind::None:
      return z;
    case PenaltyKind::Lasso:
    case PenaltyKind::AdaptiveLasso:
      return soft(z, t);
    case PenaltyKind::Ridge:
      return z / (1.0 + 2.0 * t);
    case PenaltyKind::ElasticNet:
      return soft(z, t * alpha) / (1.0 + 2.0 * t * (1.0 - alpha));
    case PenaltyKind::Scad:
      return sign * scad_prox_abs(a, t, gamma);
    case PenaltyKind::Mcp:
      return sign * mcp_prox_abs(a, t, gamma);
  }
  return z;
}

double prox(double z, double t, const PenaltyConfig& cfg, int param_id) {
  double t_eff = cfg.kind == PenaltyKind::AdaptiveLasso ? t * cfg.weight_for(param_id) : t;
  return prox_scalar(z, t_eff, cfg.kind, cfg.alpha, cfg.gamma);
}

std::vector<double> alasso_weights(const Eigen::VectorXd& theta_ml,
                                   const std::vector<int>& pars_pen) {
  std::vector<double> w;
  w.reserve(pars_pen.size());
  for (int id : pars_pen) {
    double a = std::abs(theta_ml(id - 1));
    w.push_back(a < kAlassoWeightEps ? kAlassoWeightCap : std::min(1.0 / a, kAlassoWeightCap));
  }
  return w;
}

}  // namespace sempath
