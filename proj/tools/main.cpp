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

// Command-line front end. Talks to the library exclusively through the C
// API in sempath.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sempath.h"

namespace {

using nlohmann::json;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

void check(sempath_status status, const std::string& what) {
  if (status != SEMPATH_OK) {
    fail(1, what + ": " + sempath_last_error());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct ModelHandle {
  sempath_model* ptr = nullptr;
  ~ModelHandle() { sempath_model_free(ptr); }
};

struct DataHandle {
  sempath_data* ptr = nullptr;
  ~DataHandle() { sempath_data_free(ptr); }
};

struct PathHandle {
  sempath_path* ptr = nullptr;
  ~PathHandle() { sempath_path_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { sempath_string_free(ptr); }
};

sempath_penalty_kind kind_from_string(const std::string& name) {
  static const std::map<std::string, sempath_penalty_kind> kinds = {
      {"none", SEMPATH_PEN_NONE},    {"lasso", SEMPATH_PEN_LASSO},
      {"ridge", SEMPATH_PEN_RIDGE},  {"enet", SEMPATH_PEN_ENET},
      {"alasso", SEMPATH_PEN_ALASSO}, {"scad", SEMPATH_PEN_SCAD},
      {"mcp", SEMPATH_PEN_MCP},      {"ml", SEMPATH_PEN_NONE}};
  auto it = kinds.find(name);
  if (it == kinds.end()) fail(1, "unknown penalty type '" + name + "'");
  return it->second;
}

void load_model(const std::string& path, const std::string& inline_text, bool growth,
                ModelHandle& model) {
  if (!inline_text.empty()) {
    check(sempath_model_parse(inline_text.c_str(), growth ? 1 : 0, &model.ptr), "model");
  } else if (!path.empty()) {
    check(sempath_model_parse_file(path.c_str(), growth ? 1 : 0, &model.ptr), "model");
  } else {
    fail(1, "provide --model or --model-text");
  }
}

std::vector<std::string> param_names(const sempath_model* model, const sempath_data* data) {
  int q = 0;
  check(sempath_model_param_count(model, data, &q), "parameters");
  std::vector<std::string> names;
  names.reserve(q);
  char buf[256];
  for (int id = 1; id <= q; ++id) {
    check(sempath_model_param_name(model, data, id, buf, sizeof(buf)), "parameter name");
    names.emplace_back(buf);
  }
  return names;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(1, "cannot write '" + path.string() + "'");
  return out;
}

int cmd_run(const std::string& model_path, const std::string& model_text, bool growth,
            const std::string& data_path, const std::string& holdout_path,
            const std::string& type, double lambda_start, int n_lambda, double jump,
            double alpha, double gamma, const std::string& pars_pen,
            const std::string& metric, const std::string& method, int n_starts,
            std::uint64_t seed, int max_iter, double tol, bool no_warm_start,
            const std::string& out_dir) {
  ModelHandle model;
  load_model(model_path, model_text, growth, model);

  DataHandle data;
  check(sempath_data_load_csv(data_path.c_str(), &data.ptr), "data");
  if (long dropped = sempath_data_dropped_rows(data.ptr); dropped > 0) {
    std::cerr << "note: dropped " << dropped << " rows with missing cells\n";
  }

  OwnedString report;
  int n_errors = 0, n_warnings = 0;
  check(sempath_model_validate(model.ptr, data.ptr, &report.ptr, &n_errors, &n_warnings),
        "validate");
  if (n_warnings > 0 && report.ptr) std::cerr << report.ptr;
  if (n_errors > 0) fail(1, "model validation failed");

  sempath_penalty_spec pen;
  sempath_penalty_spec_init(&pen);
  pen.kind = kind_from_string(type);
  pen.alpha = alpha;
  pen.gamma = gamma;

  std::vector<int> pen_ids;
  if (pen.kind != SEMPATH_PEN_NONE) {
    int count = 0;
    const char* selector = pars_pen.empty() ? "all" : pars_pen.c_str();
    check(sempath_model_resolve_pen(model.ptr, data.ptr, selector, nullptr, &count),
          "pars-pen");
    pen_ids.resize(count);
    check(sempath_model_resolve_pen(model.ptr, data.ptr, selector, pen_ids.data(), &count),
          "pars-pen");
    pen.pars_pen = pen_ids.data();
    pen.n_pars_pen = count;
  }

  sempath_opt_spec opt;
  sempath_opt_spec_init(&opt);
  if (method == "grad") opt.method = SEMPATH_METHOD_GRAD;
  if (method == "qn") opt.method = SEMPATH_METHOD_QN;
  opt.max_iter = max_iter;
  opt.tol = tol;
  opt.n_starts = n_starts;
  opt.seed = seed;

  sempath_path_spec path;
  sempath_path_spec_init(&path);
  path.lambda_start = lambda_start;
  path.n_lambda = pen.kind == SEMPATH_PEN_NONE ? 1 : n_lambda;
  path.jump = jump;
  path.metric = metric == "rmsea" ? SEMPATH_METRIC_RMSEA : SEMPATH_METRIC_BIC;
  path.warm_start = no_warm_start ? 0 : 1;

  DataHandle holdout;
  if (!holdout_path.empty()) {
    check(sempath_data_load_csv(holdout_path.c_str(), &holdout.ptr), "holdout");
  }

  PathHandle result;
  sempath_status status = sempath_path_run(model.ptr, data.ptr, holdout.ptr, &pen, &path,
                                           &opt, &result.ptr);
  if (status != SEMPATH_OK && status != SEMPATH_ERR_NOT_CONVERGED) {
    fail(1, std::string("fit: ") + sempath_last_error());
  }

  std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);

  const int n_rows = sempath_path_n_rows(result.ptr);
  const int q = sempath_path_n_params(result.ptr);
  std::vector<std::string> names = param_names(model.ptr, data.ptr);

  std::vector<std::string> index_names = {"rmsea", "bic", "fml", "effective_df"};
  if (holdout.ptr) {
    index_names.push_back("holdout_fml");
    index_names.push_back("holdout_rmsea");
    index_names.push_back("holdout_bic");
  }

  {
    auto fits = open_out(out / "fits.csv");
    fits << "lambda,conv";
    for (const auto& name : index_names) fits << "," << name;
    fits << "\n";
    for (int r = 0; r < n_rows; ++r) {
      double lambda = 0, f_ml = 0;
      int conv = 0;
      check(sempath_path_row(result.ptr, r, &lambda, &conv, &f_ml), "row");
      fits << fmt(lambda) << "," << conv;
      for (const auto& name : index_names) {
        double v = 0;
        if (sempath_path_row_index(result.ptr, r, name.c_str(), &v) == SEMPATH_OK) {
          fits << "," << fmt(v);
        } else {
          fits << ",nan";
        }
      }
      fits << "\n";
    }
  }

  std::vector<double> row_buf(q);
  {
    // one column per parameter; rows align with fits.csv
    auto params = open_out(out / "parameters.csv");
    for (int j = 0; j < q; ++j) params << (j ? "," : "") << names[j];
    params << "\n";
    for (int r = 0; r < n_rows; ++r) {
      check(sempath_path_row_params(result.ptr, r, row_buf.data(), q), "row params");
      for (int j = 0; j < q; ++j) params << (j ? "," : "") << fmt(row_buf[j]);
      params << "\n";
    }
  }

  int n_pen = sempath_path_n_penalized(result.ptr);
  std::vector<int> penalized(std::max(n_pen, 1));
  if (n_pen > 0) {
    check(sempath_path_penalized_ids(result.ptr, penalized.data(), n_pen), "penalized ids");
  }
  {
    auto traj = open_out(out / "trajectory.csv");
    traj << "lambda";
    for (int i = 0; i < n_pen; ++i) traj << "," << names[penalized[i] - 1];
    traj << "\n";
    for (int r = 0; r < n_rows; ++r) {
      double lambda = 0, f_ml = 0;
      int conv = 0;
      check(sempath_path_row(result.ptr, r, &lambda, &conv, &f_ml), "row");
      check(sempath_path_row_params(result.ptr, r, row_buf.data(), q), "row params");
      traj << fmt(lambda);
      for (int i = 0; i < n_pen; ++i) traj << "," << fmt(row_buf[penalized[i] - 1]);
      traj << "\n";
    }
  }

  int n_converged = 0;
  for (int r = 0; r < n_rows; ++r) {
    double lambda = 0, f_ml = 0;
    int conv = 0;
    sempath_path_row(result.ptr, r, &lambda, &conv, &f_ml);
    if (conv == 0) ++n_converged;
  }

  int final_index = sempath_path_final_index(result.ptr);
  json summary;
  summary["metric"] = metric;
  summary["n_lambda"] = n_rows;
  summary["lambda_min"] = lambda_start;
  summary["lambda_max"] = lambda_start + (n_rows - 1) * (pen.kind == SEMPATH_PEN_NONE ? 0.0 : jump);
  summary["n_parameters_regularized"] = n_pen;
  summary["n_converged"] = n_converged;
  summary["penalty"] = type;

  if (final_index >= 0) {
    double lambda = 0, f_ml = 0;
    int conv = 0;
    check(sempath_path_row(result.ptr, final_index, &lambda, &conv, &f_ml), "final row");
    check(sempath_path_row_params(result.ptr, final_index, row_buf.data(), q), "final params");
    summary["selected_index"] = final_index;
    summary["selected_lambda"] = lambda;
    json pars;
    for (int j = 0; j < q; ++j) pars[names[j]] = row_buf[j];
    summary["final_pars"] = pars;
    json fit;
    fit["fml"] = f_ml;
    fit["conv"] = conv;
    for (const auto& name : index_names) {
      double v = 0;
      if (sempath_path_row_index(result.ptr, final_index, name.c_str(), &v) == SEMPATH_OK) {
        fit[name] = v;
      }
    }
    summary["fit"] = fit;
  } else {
    summary["selected_index"] = nullptr;
  }

  {
    auto final_json = open_out(out / "final.json");
    final_json << summary.dump(2) << "\n";
  }

  std::cout << "sempath path (" << type << ")\n"
            << "  Number of parameters regularized: " << n_pen << "\n"
            << "  Lambda ranging from " << fmt(lambda_start) << " to "
            << fmt(summary["lambda_max"].get<double>()) << "\n";
  if (final_index >= 0) {
    std::cout << "  Lowest fit lambda: " << fmt(summary["selected_lambda"].get<double>())
              << "\n";
  } else {
    std::cout << "  Lowest fit lambda: none (no converged fit)\n";
  }
  std::cout << "  Metric: " << metric << "\n"
            << "  Number converged: " << n_converged << "/" << n_rows << "\n"
            << "  Artifacts: " << out.string() << "\n";

  return status == SEMPATH_ERR_NOT_CONVERGED ? 2 : 0;
}

int cmd_matrices(const std::string& model_path, const std::string& model_text, bool growth,
                 const std::string& data_path) {
  ModelHandle model;
  load_model(model_path, model_text, growth, model);
  DataHandle data;
  if (!data_path.empty()) {
    check(sempath_data_load_csv(data_path.c_str(), &data.ptr), "data");
  }
  OwnedString text;
  check(sempath_model_matrices(model.ptr, data.ptr, &text.ptr), "matrices");
  std::cout << text.ptr;
  return 0;
}

int cmd_validate(const std::string& model_path, const std::string& model_text, bool growth,
                 const std::string& data_path) {
  ModelHandle model;
  load_model(model_path, model_text, growth, model);
  DataHandle data;
  if (!data_path.empty()) {
    check(sempath_data_load_csv(data_path.c_str(), &data.ptr), "data");
  }
  OwnedString report;
  int n_errors = 0, n_warnings = 0;
  check(sempath_model_validate(model.ptr, data.ptr, &report.ptr, &n_errors, &n_warnings),
        "validate");
  if (report.ptr && report.ptr[0]) {
    std::cout << report.ptr;
  } else {
    std::cout << "clean\n";
  }
  return n_errors > 0 ? 1 : 0;
}

int cmd_curves(double lambda, double gamma, double alpha, double lo, double hi, double step,
               const std::string& out_path) {
  if (!(hi > lo) || !(step > 0)) fail(1, "need --max > --min and --step > 0");
  auto out = open_out(out_path);
  static const std::pair<const char*, sempath_penalty_kind> kinds[] = {
      {"lasso", SEMPATH_PEN_LASSO}, {"ridge", SEMPATH_PEN_RIDGE},
      {"enet", SEMPATH_PEN_ENET},   {"alasso", SEMPATH_PEN_ALASSO},
      {"scad", SEMPATH_PEN_SCAD},   {"mcp", SEMPATH_PEN_MCP}};
  out << "theta";
  for (const auto& [name, kind] : kinds) out << "," << name;
  out << "\n";
  long steps = std::lround((hi - lo) / step);
  for (long i = 0; i <= steps; ++i) {
    double theta = lo + i * step;
    out << fmt(theta);
    for (const auto& [name, kind] : kinds) {
      out << "," << fmt(sempath_penalty_value(kind, lambda, alpha, gamma, 1.0, theta));
    }
    out << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& kind, int n, std::uint64_t seed,
                 const std::string& loadings_str, const std::string& resid_sd_str,
                 const std::string& out_path, const std::string& emit_model) {
  std::vector<std::string> columns;
  std::vector<double> buffer;

  if (kind == "growth") {
    columns = {"x1", "x2", "x3", "x4", "c1", "c2", "c3", "c4", "c5",
               "c6", "c7", "c8", "c9", "c10"};
    buffer.resize(static_cast<size_t>(n) * columns.size());
    check(sempath_simulate_growth(n, seed, buffer.data()), "simulate");
    if (!emit_model.empty()) {
      OwnedString text;
      check(sempath_growth_model_text(&text.ptr), "model text");
      open_out(emit_model) << text.ptr;
    }
  } else if (kind == "cfa") {
    std::vector<double> loadings;
    std::stringstream ss(loadings_str.empty() ? "0.6,0.8,1.0,0.7,0.9,0,0" : loadings_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) loadings.push_back(std::stod(tok));
    std::vector<double> resid_sd;
    if (!resid_sd_str.empty()) {
      std::stringstream rs(resid_sd_str);
      while (std::getline(rs, tok, ',')) resid_sd.push_back(std::stod(tok));
      if (resid_sd.size() != loadings.size()) {
        fail(1, "--resid-sd must list one value per loading");
      }
    }
    for (size_t j = 1; j <= loadings.size(); ++j) columns.push_back("y" + std::to_string(j));
    buffer.resize(static_cast<size_t>(n) * columns.size());
    check(sempath_simulate_cfa(n, loadings.data(),
                               resid_sd.empty() ? nullptr : resid_sd.data(),
                               static_cast<int>(loadings.size()), seed, buffer.data()),
          "simulate");
    if (!emit_model.empty()) {
      OwnedString text;
      check(sempath_cfa_model_text(static_cast<int>(loadings.size()), &text.ptr), "model text");
      open_out(emit_model) << text.ptr;
    }
  } else {
    fail(1, "unknown --kind '" + kind + "' (growth or cfa)");
  }

  auto out = open_out(out_path);
  for (size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << columns[j];
  out << "\n";
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < columns.size(); ++j) {
      out << (j ? "," : "") << fmt(buffer[i * columns.size() + j]);
    }
    out << "\n";
  }
  return 0;
}

int cmd_replicate(int n, int reps, std::uint64_t seed, const std::string& methods_str,
                  int n_lambda, double jump, const std::string& metric,
                  const std::string& out_path, int threads) {
  std::vector<sempath_penalty_kind> methods;
  std::vector<std::string> method_names;
  std::stringstream ss(methods_str);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    methods.push_back(kind_from_string(tok));
    method_names.push_back(tok);
  }
  if (methods.empty()) fail(1, "no methods given");

  sempath_path_spec path;
  sempath_path_spec_init(&path);
  path.n_lambda = n_lambda;
  path.jump = jump;
  path.metric = metric == "rmsea" ? SEMPATH_METRIC_RMSEA : SEMPATH_METRIC_BIC;

  sempath_opt_spec opt;
  sempath_opt_spec_init(&opt);
  opt.seed = seed;

  std::vector<sempath_replication_row> rows(methods.size());
  check(sempath_replication_study(n, reps, seed, methods.data(),
                                  static_cast<int>(methods.size()), &path, &opt, threads,
                                  rows.data()),
        "replication");

  std::ostringstream csv;
  csv << "n,n_reps,method,converged,convergence_rate,false_positive_rate,false_negative_rate,"
         "fp_count,tn_count,fn_count,tp_count\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    csv << n << "," << reps << "," << method_names[i] << "," << rows[i].n_converged << ","
        << fmt(rows[i].convergence_rate) << "," << fmt(rows[i].false_positive_rate) << ","
        << fmt(rows[i].false_negative_rate) << "," << rows[i].fp_count << ","
        << rows[i].tn_count << "," << rows[i].fn_count << "," << rows[i].tp_count << "\n";
  }
  if (!out_path.empty()) {
    open_out(out_path) << csv.str();
  }

  std::printf("N = %d, replications = %d\n", n, reps);
  std::printf("%-18s", "");
  for (const auto& name : method_names) std::printf("%10s", name.c_str());
  std::printf("\n%-18s", "False positives");
  for (const auto& row : rows) std::printf("%10.2f", row.false_positive_rate);
  std::printf("\n%-18s", "False negatives");
  for (const auto& row : rows) std::printf("%10.2f", row.false_negative_rate);
  std::printf("\n%-18s", "Converged");
  for (const auto& row : rows) std::printf("%10.2f", row.convergence_rate);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized structural equation modeling over a lambda path"};
  app.require_subcommand(1);

  std::string model_path, model_text, data_path, holdout_path, out_dir = "sempath-out";
  std::string type = "lasso", pars_pen, metric = "bic", method = "default";
  double lambda_start = 0.0, jump = 0.05, alpha = 0.5, gamma = 3.7, tol = 0.0;
  int n_lambda = 1, n_starts = 1, max_iter = 0;
  std::uint64_t seed = 1;
  bool growth = false, no_warm_start = false;

  auto* run = app.add_subcommand("run", "fit a penalty path and write artifacts");
  run->add_option("--model", model_path, "model file");
  run->add_option("--model-text", model_text, "inline model text");
  run->add_flag("--growth", growth, "enable the mean structure (growth mode)");
  run->add_option("--data", data_path, "data CSV")->required();
  run->add_option("--holdout", holdout_path, "holdout CSV for out-of-sample indices");
  run->add_option("--type", type, "none|lasso|ridge|enet|alasso|scad|mcp");
  run->add_option("--lambda-start", lambda_start, "first lambda (default 0)");
  run->add_option("--n-lambda", n_lambda, "grid size");
  run->add_option("--jump", jump, "lambda increment");
  run->add_option("--alpha", alpha, "elastic-net mix");
  run->add_option("--gamma", gamma, "SCAD/MCP gamma");
  run->add_option("--pars-pen", pars_pen, "ids (1:7), labels, or 'all'");
  run->add_option("--metric", metric, "bic|rmsea");
  run->add_option("--method", method, "grad|qn|default");
  run->add_option("--n-starts", n_starts, "random multi-start count");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--max-iter", max_iter, "iteration cap");
  run->add_option("--tol", tol, "convergence tolerance");
  run->add_flag("--no-warm-start", no_warm_start, "cold-start every lambda (parallelizable)");
  run->add_option("--out", out_dir, "output directory");

  std::string m_model, m_text, m_data;
  bool m_growth = false;
  auto* matrices = app.add_subcommand("matrices", "print the compiled RAM matrices");
  matrices->add_option("--model", m_model, "model file");
  matrices->add_option("--model-text", m_text, "inline model text");
  matrices->add_flag("--growth", m_growth, "enable the mean structure");
  matrices->add_option("--data", m_data, "data CSV fixing variable order");

  std::string v_model, v_text, v_data;
  bool v_growth = false;
  auto* validate = app.add_subcommand("validate", "check a model description");
  validate->add_option("--model", v_model, "model file");
  validate->add_option("--model-text", v_text, "inline model text");
  validate->add_flag("--growth", v_growth, "enable the mean structure");
  validate->add_option("--data", v_data, "data CSV to check variables against");

  double c_lambda = 0.5, c_gamma = 3.7, c_alpha = 0.5, c_min = -3.0, c_max = 3.0,
         c_step = 0.01;
  std::string c_out = "penalty_curves.csv";
  auto* curves = app.add_subcommand("curves", "emit theta-vs-penalty curves as CSV");
  curves->add_option("--lambda", c_lambda, "penalty scale");
  curves->add_option("--gamma", c_gamma, "SCAD/MCP gamma");
  curves->add_option("--alpha", c_alpha, "elastic-net mix");
  curves->add_option("--min", c_min, "theta range start");
  curves->add_option("--max", c_max, "theta range end");
  curves->add_option("--step", c_step, "theta increment");
  curves->add_option("--out", c_out, "output CSV");

  std::string s_kind = "growth", s_loadings, s_resid_sd, s_out = "data.csv", s_emit;
  int s_n = 80;
  std::uint64_t s_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "generate data from the built-in designs");
  simulate->add_option("--kind", s_kind, "growth|cfa");
  simulate->add_option("--n", s_n, "sample size");
  simulate->add_option("--seed", s_seed, "RNG seed");
  simulate->add_option("--loadings", s_loadings, "cfa loadings, comma separated");
  simulate->add_option("--resid-sd", s_resid_sd, "cfa residual SDs, comma separated");
  simulate->add_option("--out", s_out, "output CSV");
  simulate->add_option("--emit-model", s_emit, "also write the matching model text");

  int r_n = 80, r_reps = 50, r_n_lambda = 40, r_threads = 0;
  double r_jump = 0.05;
  std::uint64_t r_seed = 1;
  std::string r_methods = "ml,lasso,alasso,scad,mcp", r_metric = "bic", r_out;
  auto* replicate = app.add_subcommand("replicate", "false positive/negative study (growth design)");
  replicate->add_option("--n", r_n, "sample size per replication");
  replicate->add_option("--reps", r_reps, "replications");
  replicate->add_option("--seed", r_seed, "master seed");
  replicate->add_option("--methods", r_methods, "comma list: ml,lasso,alasso,scad,mcp,...");
  replicate->add_option("--n-lambda", r_n_lambda, "grid size per path");
  replicate->add_option("--jump", r_jump, "lambda increment");
  replicate->add_option("--metric", r_metric, "bic|rmsea");
  replicate->add_option("--threads", r_threads, "parallel replications (0 = auto)");
  replicate->add_option("--out", r_out, "report CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(model_path, model_text, growth, data_path, holdout_path, type,
                     lambda_start, n_lambda, jump, alpha, gamma, pars_pen, metric, method,
                     n_starts, seed, max_iter, tol, no_warm_start, out_dir);
    }
    if (matrices->parsed()) return cmd_matrices(m_model, m_text, m_growth, m_data);
    if (validate->parsed()) return cmd_validate(v_model, v_text, v_growth, v_data);
    if (curves->parsed()) return cmd_curves(c_lambda, c_gamma, c_alpha, c_min, c_max, c_step, c_out);
    if (simulate->parsed()) {
      return cmd_simulate(s_kind, s_n, s_seed, s_loadings, s_resid_sd, s_out, s_emit);
    }
    if (replicate->parsed()) {
      return cmd_replicate(r_n, r_reps, r_seed, r_methods, r_n_lambda, r_jump, r_metric, r_out,
                           r_threads);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
