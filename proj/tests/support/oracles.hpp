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

// Test-only oracles, written independently of the library code they check.

#ifndef SEMPATH_TESTS_ORACLES_HPP
#define SEMPATH_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracles {

// ---- scalar penalty values (independent re-derivation) -------------------

inline double pen_lasso(double x, double lambda) { return lambda * std::abs(x); }
inline double pen_ridge(double x, double lambda) { return lambda * x * x; }
inline double pen_enet(double x, double lambda, double alpha) {
  return lambda * ((1.0 - alpha) * x * x + alpha * std::abs(x));
}
inline double pen_scad(double x, double lambda, double gamma) {
  double a = std::abs(x);
  if (a <= lambda) return lambda * a;
  if (a <= gamma * lambda) {
    return -(a * a - 2.0 * gamma * lambda * a + lambda * lambda) / (2.0 * (gamma - 1.0));
  }
  return (gamma + 1.0) * lambda * lambda / 2.0;
}
inline double pen_mcp(double x, double lambda, double gamma) {
  double a = std::abs(x);
  if (a < gamma * lambda) return lambda * (a - a * a / (2.0 * lambda * gamma));
  return lambda * lambda * gamma / 2.0;
}

// Brute-force scalar proximal minimizer of (1/2)(x - z)^2 + pen(x) on a
// sign-aware grid. The minimizer always lies between 0 and z.
inline double grid_prox(double z, const std::function<double(double)>& pen,
                        double grid_step = 1e-4) {
  double lo = std::min(0.0, z), hi = std::max(0.0, z);
  long n = std::lround((hi - lo) / grid_step);
  double best_x = lo, best_f = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= n; ++i) {
    double x = i == n ? hi : lo + i * grid_step;
    double f = 0.5 * (x - z) * (x - z) + pen(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  return best_x;
}

// ---- finite differences ---------------------------------------------------

inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    double fp = f(probe);
    probe(i) = x(i) - h;
    double fm = f(probe);
    probe(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

// ---- independent general-purpose optimizers -------------------------------

// Nelder-Mead simplex with restarts.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd x0, int max_iter = 20000,
                                   double tol = 1e-12, int restarts = 3) {
  const int n = static_cast<int>(x0.size());
  Eigen::VectorXd best = x0;
  double best_f = f(best);

  for (int round = 0; round < restarts; ++round) {
    std::vector<Eigen::VectorXd> simplex(n + 1, best);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) {
      simplex[i + 1](i) += std::max(0.05, 0.05 * std::abs(best(i)));
    }
    for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    for (int it = 0; it < max_iter; ++it) {
      std::vector<int> order(n + 1);
      for (int i = 0; i <= n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      std::vector<Eigen::VectorXd> s2(n + 1);
      std::vector<double> f2(n + 1);
      for (int i = 0; i <= n; ++i) {
        s2[i] = simplex[order[i]];
        f2[i] = fv[order[i]];
      }
      simplex = s2;
      fv = f2;
      if (fv[n] - fv[0] < tol) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) centroid += simplex[i];
      centroid /= n;

      Eigen::VectorXd xr = centroid + (centroid - simplex[n]);
      double fr = f(xr);
      if (fr < fv[0]) {
        Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[n]);
        double fe = f(xe);
        if (fe < fr) {
          simplex[n] = xe;
          fv[n] = fe;
        } else {
          simplex[n] = xr;
          fv[n] = fr;
        }
      } else if (fr < fv[n - 1]) {
        simplex[n] = xr;
        fv[n] = fr;
      } else {
        Eigen::VectorXd xc = centroid + 0.5 * (simplex[n] - centroid);
        double fc = f(xc);
        if (fc < fv[n]) {
          simplex[n] = xc;
          fv[n] = fc;
        } else {
          for (int i = 1; i <= n; ++i) {
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
            fv[i] = f(simplex[i]);
          }
        }
      }
    }
    if (fv[0] < best_f) {
      best_f = fv[0];
      best = simplex[0];
    }
  }
  return best;
}

// BFGS with numerical gradients and Armijo backtracking; infeasible points
// (NaN/inf) are treated as +inf by the caller-provided function.
inline Eigen::VectorXd fd_bfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                               Eigen::VectorXd x, int max_iter = 2000, double grad_tol = 1e-9) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  double fx = f(x);
  Eigen::VectorXd g = fd_gradient(f, x, 1e-7);

  for (int it = 0; it < max_iter; ++it) {
    if (g.norm() < grad_tol) break;
    Eigen::VectorXd d = -h_inv * g;
    if (g.dot(d) > -1e-14) {
      h_inv.setIdentity();
      d = -g;
    }
    double step = 1.0;
    double gd = g.dot(d);
    Eigen::VectorXd xn = x;
    double fn = fx;
    bool ok = false;
    for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
      xn = x + step * d;
      fn = f(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * step * gd) {
        ok = true;
        break;
      }
    }
    if (!ok) break;
    Eigen::VectorXd gn = fd_gradient(f, xn, 1e-7);
    Eigen::VectorXd s = xn - x, y = gn - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      double rho = 1.0 / sy;
      Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
    }
    x = xn;
    fx = fn;
    g = gn;
  }
  return x;
}

// ---- independent one-factor CFA objective ---------------------------------
// theta = (loadings[0..p-1], residual variances[p..2p-1]); factor variance 1.
// F = ln|Sigma| + tr(C Sigma^-1) - ln|C| - p with Sigma = ll' + diag(psi).
inline double cfa_discrepancy(const Eigen::VectorXd& theta, const Eigen::MatrixXd& c) {
  const int p = static_cast<int>(c.rows());
  Eigen::VectorXd loadings = theta.head(p);
  Eigen::VectorXd psi = theta.tail(p);
  if ((psi.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
  Eigen::MatrixXd sigma = loadings * loadings.transpose();
  sigma.diagonal() += psi;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  Eigen::LLT<Eigen::MatrixXd> llt_c(c);
  double log_det_c = 2.0 * llt_c.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return log_det + llt.solve(c).trace() - log_det_c - p;
}

}  // namespace oracles

#endif  // SEMPATH_TESTS_ORACLES_HPP
