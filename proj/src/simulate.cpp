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

#include "sempath/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace sempath {

namespace {

// Independent per-replication RNG streams from one master seed.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr double kWaldZ = 1.959963984540054;  // two-sided .05

}  // namespace

const std::vector<std::string>& growth_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (int t = 1; t <= GrowthDesign::kTimePoints; ++t) c.push_back("x" + std::to_string(t));
    for (int j = 1; j <= GrowthDesign::kCovariates; ++j) c.push_back("c" + std::to_string(j));
    return c;
  }();
  return cols;
}

Eigen::MatrixXd simulate_growth(int n, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> norm(0.0, 1.0);

  Eigen::MatrixXd out(n, GrowthDesign::kColumns);
  const double sd_icept = std::sqrt(GrowthDesign::kInterceptVar);
  const double sd_slope = std::sqrt(GrowthDesign::kSlopeVar);
  const double sd_resid = std::sqrt(GrowthDesign::kResidualVar);

  for (int i = 0; i < n; ++i) {
    double c[GrowthDesign::kCovariates];
    for (double& v : c) v = norm(rng);
    double icept = GrowthDesign::kLargeEffect * c[0] + GrowthDesign::kSmallEffect * c[1] +
                   sd_icept * norm(rng);
    double slope = GrowthDesign::kLargeEffect * c[0] + GrowthDesign::kSmallEffect * c[1] +
                   sd_slope * norm(rng);
    for (int t = 0; t < GrowthDesign::kTimePoints; ++t) {
      out(i, t) = icept + t * slope + sd_resid * norm(rng);
    }
    for (int j = 0; j < GrowthDesign::kCovariates; ++j) {
      out(i, GrowthDesign::kTimePoints + j) = c[j];
    }
  }
  return out;
}

Eigen::MatrixXd simulate_cfa(int n, const Eigen::VectorXd& loadings, std::uint64_t seed,
                             const Eigen::VectorXd& resid_sd) {
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> norm(0.0, 1.0);
  const int p = static_cast<int>(loadings.size());
  if (resid_sd.size() != 0 && resid_sd.size() != p) {
    throw std::invalid_argument("resid_sd length must match the loadings");
  }

  Eigen::MatrixXd out(n, p);
  for (int i = 0; i < n; ++i) {
    double f = norm(rng);
    for (int j = 0; j < p; ++j) {
      double sd = resid_sd.size() ? resid_sd(j) : 1.0;
      out(i, j) = loadings(j) * f + sd * norm(rng);
    }
  }
  return out;
}

std::vector<std::string> cfa_columns(int n_indicators) {
  std::vector<std::string> cols;
  for (int j = 1; j <= n_indicators; ++j) cols.push_back("y" + std::to_string(j));
  return cols;
}

std::string growth_model_text() {
  std::ostringstream out;
  out << "i =~ 1*x1 + 1*x2 + 1*x3 + 1*x4\n";
  out << "s =~ 0*x1 + 1*x2 + 2*x3 + 3*x4\n";
  auto reg = [&](const char* lhs) {
    out << lhs << " ~ ";
    for (int j = 1; j <= GrowthDesign::kCovariates; ++j) {
      if (j > 1) out << " + ";
      out << "c" << j;
    }
    out << "\n";
  };
  reg("i");
  reg("s");
  out << "i ~~ s\n";
  return out.str();
}

std::string cfa_model_text(int n_indicators) {
  std::ostringstream out;
  out << "f1 =~ NA*y1";
  for (int j = 2; j <= n_indicators; ++j) out << " + y" << j;
  out << "\nf1 ~~ 1*f1\n";
  return out.str();
}

ModelSpec growth_spec_fixed_x(const SampleMoments& moments) {
  ModelSpec spec = parse_model(growth_model_text(), /*growth_mode=*/true);
  // Hold the exogenous covariate block at the sample values (no parameters).
  std::vector<std::string> cs;
  for (int j = 1; j <= GrowthDesign::kCovariates; ++j) cs.push_back("c" + std::to_string(j));
  SampleMoments sub = moments.subset(cs);
  for (int a = 0; a < GrowthDesign::kCovariates; ++a) {
    for (int b = a; b < GrowthDesign::kCovariates; ++b) {
      spec.covariances.push_back({cs[a], cs[b], Coefficient::fixed(sub.cov(a, b))});
    }
  }
  return spec;
}

std::vector<int> growth_regression_ids(const RamModel& ram) {
  std::vector<int> ids;
  for (const auto& p : ram.params) {
    if (p.mat == RamMatrix::A && p.name.find("c") == 0) ids.push_back(p.id);
  }
  return ids;
}

std::optional<Eigen::VectorXd> wald_standard_errors(const RamModel& ram,
                                                    const Eigen::VectorXd& theta_ml,
                                                    const SampleMoments& data) {
  const int q = ram.q();
  RamLikelihood lik(ram, data);
  Eigen::MatrixXd hessian(q, q);
  Eigen::VectorXd gp(q), gm(q), probe = theta_ml;
  double f;
  for (int j = 0; j < q; ++j) {
    double h = 1e-5 * std::max(1.0, std::abs(theta_ml(j)));
    probe(j) = theta_ml(j) + h;
    if (!lik.value_and_grad(probe, f, gp)) return std::nullopt;
    probe(j) = theta_ml(j) - h;
    if (!lik.value_and_grad(probe, f, gm)) return std::nullopt;
    probe(j) = theta_ml(j);
    hessian.col(j) = (gp - gm) / (2.0 * h);
  }
  hessian = ((hessian + hessian.transpose()) / 2.0).eval();

  Eigen::MatrixXd info = (static_cast<double>(data.n) / 2.0) * hessian;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return std::nullopt;
  Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(q, q));

  Eigen::VectorXd se(q);
  for (int j = 0; j < q; ++j) {
    double v = cov(j, j);
    if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
    se(j) = std::sqrt(v);
  }
  return se;
}

int resolve_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int cap = hw;
  if (const char* env = std::getenv("SEMPATH_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) cap = std::min(cap, v);
  }
  if (requested <= 0) return cap;
  return std::min(requested, cap);
}

ReplicationReport replication_study(const SimDesign& design,
                                    const std::vector<PenaltyKind>& methods,
                                    const PathConfig& path, const OptimizerConfig& opt,
                                    int threads) {
  if (design.kind != SimDesign::Kind::GrowthCovariates) {
    throw std::invalid_argument("replication_study currently covers the growth design");
  }
  const int n_methods = static_cast<int>(methods.size());
  const int n_reps = design.n_reps;

  struct RepCell {
    bool converged = false;
    int fp = 0, tn = 0, fn = 0, tp = 0;
  };
  std::vector<RepCell> cells(static_cast<size_t>(n_reps) * n_methods);

  auto run_rep = [&](int rep) {
    std::uint64_t rep_seed = splitmix64(design.seed + 0x9e3779b97f4a7c15ULL * (rep + 1));
    Eigen::MatrixXd rows = simulate_growth(design.n, rep_seed);
    SampleMoments moments = moments_from_rows(rows, growth_columns());
    ModelSpec spec = growth_spec_fixed_x(moments);
    RamModel ram = build_ram(spec, growth_columns());
    std::vector<int> reg_ids = growth_regression_ids(ram);

    // Truth over the regression ids: c1/c2 into i and s are nonzero.
    auto is_true_nonzero = [&](int id) {
      const std::string& name = ram.param(id).name;
      return name.rfind("c1 ->", 0) == 0 || name.rfind("c2 ->", 0) == 0;
    };

    for (int m = 0; m < n_methods; ++m) {
      RepCell& cell = cells[static_cast<size_t>(rep) * n_methods + m];
      std::vector<char> flagged_nonzero(reg_ids.size(), 0);
      bool converged = false;

      if (methods[m] == PenaltyKind::None) {
        PenaltyConfig none;
        FitResult mle = fit_sem(ram, moments, none, opt);
        if (mle.conv == 0) {
          auto se = wald_standard_errors(ram, mle.theta, moments);
          if (se) {
            converged = true;
            for (size_t k = 0; k < reg_ids.size(); ++k) {
              double est = mle.theta(reg_ids[k] - 1);
              double s = (*se)(reg_ids[k] - 1);
              flagged_nonzero[k] = std::abs(est / s) > kWaldZ ? 1 : 0;
            }
          }
        }
      } else {
        PenaltyConfig pen;
        pen.kind = methods[m];
        pen.pars_pen = reg_ids;
        try {
          PathResult res = run_path(ram, moments, pen, path, opt);
          if (res.final_index) {
            converged = true;
            for (size_t k = 0; k < reg_ids.size(); ++k) {
              flagged_nonzero[k] = std::abs(res.final_pars(reg_ids[k] - 1)) > kZeroTol ? 1 : 0;
            }
          }
        } catch (const ModelError&) {
          converged = false;  // e.g. alasso without a converged MLE
        }
      }

      cell.converged = converged;
      if (converged) {
        for (size_t k = 0; k < reg_ids.size(); ++k) {
          bool truth_nonzero = is_true_nonzero(reg_ids[k]);
          bool flagged = flagged_nonzero[k] != 0;
          if (truth_nonzero) {
            flagged ? ++cell.tp : ++cell.fn;
          } else {
            flagged ? ++cell.fp : ++cell.tn;
          }
        }
      }
    }
  };

  int n_threads = std::max(1, std::min(threads, n_reps));
  if (n_threads == 1) {
    for (int rep = 0; rep < n_reps; ++rep) run_rep(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&]() {
        for (int rep = next.fetch_add(1); rep < n_reps; rep = next.fetch_add(1)) run_rep(rep);
      });
    }
    for (auto& th : pool) th.join();
  }

  ReplicationReport report;
  report.n = design.n;
  report.n_reps = n_reps;
  for (int m = 0; m < n_methods; ++m) {
    MethodOutcome out;
    out.method = methods[m];
    for (int rep = 0; rep < n_reps; ++rep) {
      const RepCell& cell = cells[static_cast<size_t>(rep) * n_methods + m];
      if (!cell.converged) continue;
      ++out.n_converged;
      out.fp_count += cell.fp;
      out.tn_count += cell.tn;
      out.fn_count += cell.fn;
      out.tp_count += cell.tp;
    }
    long zeros = out.fp_count + out.tn_count;
    long nonzeros = out.fn_count + out.tp_count;
    out.fp_rate = zeros > 0 ? static_cast<double>(out.fp_count) / zeros : 0.0;
    out.fn_rate = nonzeros > 0 ? static_cast<double>(out.fn_count) / nonzeros : 0.0;
    out.convergence_rate = n_reps > 0 ? static_cast<double>(out.n_converged) / n_reps : 0.0;
    report.methods.push_back(out);
  }
  return report;
}

std::string ReplicationReport::to_csv() const {
  std::ostringstream out;
  out << "n,n_reps,method,converged,convergence_rate,false_positive_rate,false_negative_rate,"
         "fp_count,tn_count,fn_count,tp_count\n";
  for (const auto& m : methods) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%d,%.6g,%.6g,%.6g,%ld,%ld,%ld,%ld\n", n, n_reps,
                  m.method == PenaltyKind::None ? "ml" : penalty_name(m.method), m.n_converged,
                  m.convergence_rate, m.fp_rate, m.fn_rate, m.fp_count, m.tn_count, m.fn_count,
                  m.tp_count);
    out << buf;
  }
  return out.str();
}

std::string ReplicationReport::to_table() const {
  std::ostringstream out;
  out << "N = " << n << ", replications = " << n_reps << "\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-18s", "");
  out << buf;
  for (const auto& m : methods) {
    std::snprintf(buf, sizeof(buf), "%10s", m.method == PenaltyKind::None ? "ML" : penalty_name(m.method));
    out << buf;
  }
  out << "\n";
  auto row = [&](const char* label, auto getter) {
    std::snprintf(buf, sizeof(buf), "%-18s", label);
    out << buf;
    for (const auto& m : methods) {
      std::snprintf(buf, sizeof(buf), "%10.2f", getter(m));
      out << buf;
    }
    out << "\n";
  };
  row("False positives", [](const MethodOutcome& m) { return m.fp_rate; });
  row("False negatives", [](const MethodOutcome& m) { return m.fn_rate; });
  row("Converged", [](const MethodOutcome& m) { return m.convergence_rate; });
  return out.str();
}

}  // namespace sempath
