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

#include "sempath.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include "sempath/model_syntax.hpp"
#include "sempath/optimizer.hpp"
#include "sempath/penalties.hpp"
#include "sempath/ram.hpp"
#include "sempath/selection.hpp"
#include "sempath/simulate.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sempath_status copy_to_buf(const std::string& s, char* buf, size_t buf_size) {
  if (!buf || buf_size == 0 || s.size() + 1 > buf_size) {
    set_error("buffer too small (need " + std::to_string(s.size() + 1) + " bytes)");
    return SEMPATH_ERR_BOUNDS;
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SEMPATH_OK;
}

sempath::PenaltyKind to_kind(sempath_penalty_kind k) {
  switch (k) {
    case SEMPATH_PEN_NONE:
      return sempath::PenaltyKind::None;
    case SEMPATH_PEN_LASSO:
      return sempath::PenaltyKind::Lasso;
    case SEMPATH_PEN_RIDGE:
      return sempath::PenaltyKind::Ridge;
    case SEMPATH_PEN_ENET:
      return sempath::PenaltyKind::ElasticNet;
    case SEMPATH_PEN_ALASSO:
      return sempath::PenaltyKind::AdaptiveLasso;
    case SEMPATH_PEN_SCAD:
      return sempath::PenaltyKind::Scad;
    case SEMPATH_PEN_MCP:
      return sempath::PenaltyKind::Mcp;
  }
  throw std::invalid_argument("unknown penalty kind");
}

sempath_penalty_kind from_kind(sempath::PenaltyKind k) {
  using PK = sempath::PenaltyKind;
  switch (k) {
    case PK::None:
      return SEMPATH_PEN_NONE;
    case PK::Lasso:
      return SEMPATH_PEN_LASSO;
    case PK::Ridge:
      return SEMPATH_PEN_RIDGE;
    case PK::ElasticNet:
      return SEMPATH_PEN_ENET;
    case PK::AdaptiveLasso:
      return SEMPATH_PEN_ALASSO;
    case PK::Scad:
      return SEMPATH_PEN_SCAD;
    case PK::Mcp:
      return SEMPATH_PEN_MCP;
  }
  return SEMPATH_PEN_NONE;
}

template <typename Fn>
sempath_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const sempath::ParseError& e) {
    set_error(e.what());
    return SEMPATH_ERR_PARSE;
  } catch (const sempath::DataError& e) {
    set_error(e.what());
    return SEMPATH_ERR_DATA;
  } catch (const sempath::ModelError& e) {
    set_error(e.what());
    return SEMPATH_ERR_MODEL;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SEMPATH_ERR_INVALID_ARG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SEMPATH_ERR_INTERNAL;
  }
}

}  // namespace

struct sempath_model {
  sempath::ModelSpec spec;
  // Cache of the compiled model keyed by the variable order it was built for.
  mutable std::mutex mutex;
  mutable std::optional<sempath::RamModel> ram;
  mutable std::vector<std::string> ram_order;
};

struct sempath_data {
  sempath::SampleMoments moments;
};

struct sempath_fit {
  sempath::FitResult result;
  std::vector<std::string> param_names;
};

struct sempath_path {
  sempath::PathResult result;
  std::vector<std::string> param_names;
  std::vector<int> pars_pen;
};

namespace {

// Compile (or fetch the cached) RAM model for the given data's column order.
const sempath::RamModel& compiled_ram(const sempath_model* model, const sempath_data* data) {
  std::vector<std::string> order =
      data ? data->moments.var_names : model->spec.observed_vars;
  std::lock_guard<std::mutex> lock(model->mutex);
  if (!model->ram || model->ram_order != order) {
    model->ram = sempath::build_ram(model->spec, order);
    model->ram_order = order;
  }
  return *model->ram;
}

sempath::PenaltyConfig make_penalty(const sempath_penalty_spec* spec,
                                    const sempath::RamModel& ram) {
  sempath::PenaltyConfig pen;
  if (!spec) return pen;
  pen.kind = to_kind(spec->kind);
  pen.lambda = spec->lambda;
  pen.alpha = spec->alpha;
  pen.gamma = spec->gamma;
  if (pen.kind != sempath::PenaltyKind::None) {
    if (spec->pars_pen && spec->n_pars_pen > 0) {
      pen.pars_pen.assign(spec->pars_pen, spec->pars_pen + spec->n_pars_pen);
    } else {
      pen.pars_pen = ram.directed_param_ids();
    }
  }
  return pen;
}

sempath::OptimizerConfig make_opt(const sempath_opt_spec* spec) {
  sempath::OptimizerConfig opt;
  if (!spec) return opt;
  if (spec->method == SEMPATH_METHOD_GRAD) opt.method = sempath::OptimMethod::GradientProx;
  if (spec->method == SEMPATH_METHOD_QN) opt.method = sempath::OptimMethod::QuasiNewtonProx;
  if (spec->max_iter > 0) opt.max_iter = spec->max_iter;
  if (spec->tol > 0) opt.tol = spec->tol;
  if (spec->n_starts > 0) opt.n_starts = spec->n_starts;
  if (spec->variance_floor >= 0) opt.variance_floor = spec->variance_floor;
  opt.seed = spec->seed;
  return opt;
}

sempath::PathConfig make_path(const sempath_path_spec* spec) {
  sempath::PathConfig path;
  if (!spec) return path;
  if (spec->n_lambda > 0) path.n_lambda = spec->n_lambda;
  if (spec->jump > 0) path.jump = spec->jump;
  if (spec->lambda_start >= 0) path.lambda_start = spec->lambda_start;
  path.metric = spec->metric == SEMPATH_METRIC_RMSEA ? sempath::FitMetric::Rmsea
                                                     : sempath::FitMetric::Bic;
  path.warm_start = spec->warm_start != 0;
  path.threads = sempath::resolve_threads(spec->threads);
  return path;
}

std::vector<std::string> param_names_of(const sempath::RamModel& ram) {
  std::vector<std::string> names;
  names.reserve(ram.q());
  for (const auto& p : ram.params) names.push_back(p.name);
  return names;
}

}  // namespace

extern "C" {

const char* sempath_version(void) { return "0.1.0"; }

const char* sempath_last_error(void) { return g_last_error.c_str(); }

void sempath_string_free(char* s) { std::free(s); }

/* ---- model ------------------------------------------------------------ */

sempath_status sempath_model_parse(const char* text, int growth_mode, sempath_model** out) {
  return guarded([&]() {
    if (!text || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    auto model = std::make_unique<sempath_model>();
    model->spec = sempath::parse_model(text, growth_mode != 0);
    *out = model.release();
    return SEMPATH_OK;
  });
}

sempath_status sempath_model_parse_file(const char* path, int growth_mode, sempath_model** out) {
  return guarded([&]() {
    if (!path || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    std::ifstream in(path);
    if (!in) {
      set_error(std::string("cannot open '") + path + "'");
      return SEMPATH_ERR_IO;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return sempath_model_parse(buffer.str().c_str(), growth_mode, out);
  });
}

void sempath_model_free(sempath_model* model) { delete model; }

sempath_status sempath_model_validate(const sempath_model* model,
                                      const sempath_data* data_or_null, char** report,
                                      int* n_errors, int* n_warnings) {
  return guarded([&]() {
    if (!model) {
      set_error("null model");
      return SEMPATH_ERR_INVALID_ARG;
    }
    sempath::ValidationReport rep =
        data_or_null
            ? sempath::validate_spec(model->spec, &data_or_null->moments.var_names)
            : sempath::validate_spec(model->spec);
    if (report) *report = dup_string(rep.to_string());
    if (n_errors) *n_errors = rep.error_count();
    if (n_warnings) *n_warnings = rep.warning_count();
    return SEMPATH_OK;
  });
}

sempath_status sempath_model_param_count(const sempath_model* model,
                                         const sempath_data* data_or_null, int* out) {
  return guarded([&]() {
    if (!model || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = compiled_ram(model, data_or_null).q();
    return SEMPATH_OK;
  });
}

sempath_status sempath_model_param_name(const sempath_model* model,
                                        const sempath_data* data_or_null, int param_id,
                                        char* buf, size_t buf_size) {
  return guarded([&]() {
    if (!model) {
      set_error("null model");
      return SEMPATH_ERR_INVALID_ARG;
    }
    const auto& ram = compiled_ram(model, data_or_null);
    if (param_id < 1 || param_id > ram.q()) {
      set_error("param id out of range");
      return SEMPATH_ERR_BOUNDS;
    }
    return copy_to_buf(ram.param(param_id).name, buf, buf_size);
  });
}

sempath_status sempath_model_matrices(const sempath_model* model,
                                      const sempath_data* data_or_null, char** out) {
  return guarded([&]() {
    if (!model || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = dup_string(sempath::extract_matrices(compiled_ram(model, data_or_null)));
    return SEMPATH_OK;
  });
}

sempath_status sempath_model_resolve_pen(const sempath_model* model,
                                         const sempath_data* data_or_null,
                                         const char* selector, int* ids, int* n_ids) {
  return guarded([&]() {
    if (!model || !n_ids) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    const auto& ram = compiled_ram(model, data_or_null);
    std::vector<int> resolved;
    std::string sel = selector ? selector : "all";
    if (sel.empty() || sel == "all" || sel == "all-directed") {
      resolved = ram.directed_param_ids();
    } else {
      std::stringstream ss(sel);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        size_t b = tok.find_first_not_of(" \t");
        size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        tok = tok.substr(b, e - b + 1);
        size_t dash = tok.find(':');
        if (dash == std::string::npos) {
          size_t d = tok.find('-');
          if (d != std::string::npos && d > 0) dash = d;
        }
        char* end = nullptr;
        long v = std::strtol(tok.c_str(), &end, 10);
        if (end && *end == '\0') {
          resolved.push_back(static_cast<int>(v));
        } else if (dash != std::string::npos) {
          long lo = std::strtol(tok.substr(0, dash).c_str(), nullptr, 10);
          long hi = std::strtol(tok.substr(dash + 1).c_str(), nullptr, 10);
          if (lo < 1 || hi < lo) {
            set_error("bad id range '" + tok + "'");
            return SEMPATH_ERR_INVALID_ARG;
          }
          for (long k = lo; k <= hi; ++k) resolved.push_back(static_cast<int>(k));
        } else {
          auto labelled = ram.ids_for_label(tok);
          if (labelled.empty()) {
            set_error("selector '" + tok + "' matches no parameter label or id");
            return SEMPATH_ERR_INVALID_ARG;
          }
          resolved.insert(resolved.end(), labelled.begin(), labelled.end());
        }
      }
    }
    for (int id : resolved) {
      if (id < 1 || id > ram.q()) {
        set_error("param id " + std::to_string(id) + " out of range");
        return SEMPATH_ERR_BOUNDS;
      }
    }
    if (ids) {
      if (*n_ids < static_cast<int>(resolved.size())) {
        set_error("ids buffer too small");
        return SEMPATH_ERR_BOUNDS;
      }
      std::copy(resolved.begin(), resolved.end(), ids);
    }
    *n_ids = static_cast<int>(resolved.size());
    return SEMPATH_OK;
  });
}

/* ---- data ------------------------------------------------------------- */

sempath_status sempath_data_load_csv(const char* path, sempath_data** out) {
  return guarded([&]() {
    if (!path || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    auto data = std::make_unique<sempath_data>();
    data->moments = sempath::load_csv(path);
    *out = data.release();
    return SEMPATH_OK;
  });
}

sempath_status sempath_data_from_rows(const double* rows, int n, int p,
                                      const char* const* names, sempath_data** out) {
  return guarded([&]() {
    if (!rows || !names || !out || n < 1 || p < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    Eigen::MatrixXd m(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) m(i, j) = rows[static_cast<size_t>(i) * p + j];
    std::vector<std::string> nm(names, names + p);
    auto data = std::make_unique<sempath_data>();
    data->moments = sempath::moments_from_rows(m, std::move(nm));
    *out = data.release();
    return SEMPATH_OK;
  });
}

sempath_status sempath_data_from_cov(const double* cov, const double* means_or_null, int p,
                                     long n_obs, const char* const* names,
                                     sempath_data** out) {
  return guarded([&]() {
    if (!cov || !names || !out || p < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    Eigen::MatrixXd c(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) c(i, j) = cov[static_cast<size_t>(i) * p + j];
    std::optional<Eigen::VectorXd> m;
    if (means_or_null) {
      m = Eigen::Map<const Eigen::VectorXd>(means_or_null, p);
    }
    std::vector<std::string> nm(names, names + p);
    auto data = std::make_unique<sempath_data>();
    data->moments = sempath::moments_from_cov(c, std::move(m), n_obs, std::move(nm));
    *out = data.release();
    return SEMPATH_OK;
  });
}

void sempath_data_free(sempath_data* data) { delete data; }

long sempath_data_nobs(const sempath_data* data) { return data ? data->moments.n : 0; }

int sempath_data_nvar(const sempath_data* data) { return data ? data->moments.nvar() : 0; }

long sempath_data_dropped_rows(const sempath_data* data) {
  return data ? data->moments.n_dropped : 0;
}

sempath_status sempath_data_var_name(const sempath_data* data, int index, char* buf,
                                     size_t buf_size) {
  return guarded([&]() {
    if (!data) {
      set_error("null data");
      return SEMPATH_ERR_INVALID_ARG;
    }
    if (index < 0 || index >= data->moments.nvar()) {
      set_error("index out of range");
      return SEMPATH_ERR_BOUNDS;
    }
    return copy_to_buf(data->moments.var_names[index], buf, buf_size);
  });
}

/* ---- configuration ---------------------------------------------------- */

void sempath_penalty_spec_init(sempath_penalty_spec* spec) {
  if (!spec) return;
  spec->kind = SEMPATH_PEN_NONE;
  spec->lambda = 0.0;
  spec->alpha = 0.5;
  spec->gamma = 3.7;
  spec->pars_pen = nullptr;
  spec->n_pars_pen = 0;
}

void sempath_opt_spec_init(sempath_opt_spec* spec) {
  if (!spec) return;
  spec->method = SEMPATH_METHOD_DEFAULT;
  spec->max_iter = 0;
  spec->tol = 0.0;
  spec->n_starts = 0;
  spec->variance_floor = -1.0;
  spec->seed = 1;
}

void sempath_path_spec_init(sempath_path_spec* spec) {
  if (!spec) return;
  spec->n_lambda = 0;
  spec->jump = 0.0;
  spec->lambda_start = 0.0;
  spec->metric = SEMPATH_METRIC_BIC;
  spec->warm_start = 1;
  spec->threads = 0;
}

/* ---- fitting ----------------------------------------------------------- */

sempath_status sempath_fit_run(const sempath_model* model, const sempath_data* data,
                               const sempath_penalty_spec* penalty,
                               const sempath_opt_spec* opt, sempath_fit** out) {
  return guarded([&]() {
    if (!model || !data || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    const auto& ram = compiled_ram(model, data);
    sempath::PenaltyConfig pen = make_penalty(penalty, ram);
    sempath::OptimizerConfig cfg = make_opt(opt);

    if (pen.kind == sempath::PenaltyKind::AdaptiveLasso && pen.weights.empty()) {
      sempath::PenaltyConfig none;
      sempath::FitResult mle = sempath::fit_sem(ram, data->moments, none, cfg);
      if (mle.conv != 0) {
        set_error("adaptive lasso needs a converged MLE for its weights");
        return SEMPATH_ERR_NOT_CONVERGED;
      }
      pen.weights = sempath::alasso_weights(mle.theta, pen.pars_pen);
    }

    auto fit = std::make_unique<sempath_fit>();
    fit->result = cfg.n_starts > 1 ? sempath::multi_start_fit(ram, data->moments, pen, cfg)
                                   : sempath::fit_sem(ram, data->moments, pen, cfg);
    if (fit->result.conv != 99 && std::isfinite(fit->result.f_ml)) {
      int k = sempath::effective_df(fit->result.theta, ram);
      fit->result.fit_indices = sempath::compute_indices({"rmsea", "bic"}, fit->result.f_ml,
                                                         data->moments.n, k, ram);
    }
    fit->param_names = param_names_of(ram);
    *out = fit.release();
    return SEMPATH_OK;
  });
}

void sempath_fit_free(sempath_fit* fit) { delete fit; }

double sempath_fit_f_ml(const sempath_fit* fit) { return fit ? fit->result.f_ml : 0.0; }

double sempath_fit_f_regsem(const sempath_fit* fit) { return fit ? fit->result.f_regsem : 0.0; }

int sempath_fit_conv(const sempath_fit* fit) { return fit ? fit->result.conv : 99; }

int sempath_fit_iterations(const sempath_fit* fit) { return fit ? fit->result.iterations : 0; }

sempath_status sempath_fit_params(const sempath_fit* fit, double* buf, int buf_len) {
  return guarded([&]() {
    if (!fit || !buf) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    int q = static_cast<int>(fit->result.theta.size());
    if (buf_len < q) {
      set_error("buffer too small");
      return SEMPATH_ERR_BOUNDS;
    }
    Eigen::Map<Eigen::VectorXd>(buf, q) = fit->result.theta;
    return SEMPATH_OK;
  });
}

sempath_status sempath_fit_index(const sempath_fit* fit, const char* name, double* out) {
  return guarded([&]() {
    if (!fit || !name || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    auto it = fit->result.fit_indices.find(name);
    if (it == fit->result.fit_indices.end()) {
      set_error(std::string("no index named '") + name + "'");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = it->second;
    return SEMPATH_OK;
  });
}

sempath_status sempath_path_run(const sempath_model* model, const sempath_data* data,
                                const sempath_data* holdout_or_null,
                                const sempath_penalty_spec* penalty,
                                const sempath_path_spec* path, const sempath_opt_spec* opt,
                                sempath_path** out) {
  return guarded([&]() {
    if (!model || !data || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    const auto& ram = compiled_ram(model, data);
    sempath::PenaltyConfig pen = make_penalty(penalty, ram);
    sempath::OptimizerConfig cfg = make_opt(opt);
    sempath::PathConfig pcfg = make_path(path);
    if (holdout_or_null) pcfg.holdout = &holdout_or_null->moments;

    auto result = std::make_unique<sempath_path>();
    result->result = sempath::run_path(ram, data->moments, pen, pcfg, cfg);
    result->param_names = param_names_of(ram);
    result->pars_pen = pen.pars_pen;
    bool converged = result->result.converged_any();
    *out = result.release();
    if (!converged) {
      set_error("no fit on the lambda grid converged");
      return SEMPATH_ERR_NOT_CONVERGED;
    }
    return SEMPATH_OK;
  });
}

void sempath_path_free(sempath_path* path) { delete path; }

int sempath_path_n_rows(const sempath_path* path) {
  return path ? static_cast<int>(path->result.fits.size()) : 0;
}

int sempath_path_n_params(const sempath_path* path) {
  return path ? static_cast<int>(path->result.parameters.cols()) : 0;
}

sempath_status sempath_path_row(const sempath_path* path, int row, double* lambda, int* conv,
                                double* f_ml) {
  return guarded([&]() {
    if (!path) {
      set_error("null path");
      return SEMPATH_ERR_INVALID_ARG;
    }
    if (row < 0 || row >= sempath_path_n_rows(path)) {
      set_error("row out of range");
      return SEMPATH_ERR_BOUNDS;
    }
    const auto& r = path->result.fits[row];
    if (lambda) *lambda = r.lambda;
    if (conv) *conv = r.conv;
    if (f_ml) *f_ml = r.f_ml;
    return SEMPATH_OK;
  });
}

sempath_status sempath_path_row_index(const sempath_path* path, int row, const char* name,
                                      double* out) {
  return guarded([&]() {
    if (!path || !name || !out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    if (row < 0 || row >= sempath_path_n_rows(path)) {
      set_error("row out of range");
      return SEMPATH_ERR_BOUNDS;
    }
    const auto& indices = path->result.fits[row].indices;
    auto it = indices.find(name);
    if (it == indices.end()) {
      set_error(std::string("no index named '") + name + "' on this row");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = it->second;
    return SEMPATH_OK;
  });
}

sempath_status sempath_path_row_params(const sempath_path* path, int row, double* buf,
                                       int buf_len) {
  return guarded([&]() {
    if (!path || !buf) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    if (row < 0 || row >= sempath_path_n_rows(path)) {
      set_error("row out of range");
      return SEMPATH_ERR_BOUNDS;
    }
    int q = sempath_path_n_params(path);
    if (buf_len < q) {
      set_error("buffer too small");
      return SEMPATH_ERR_BOUNDS;
    }
    Eigen::Map<Eigen::RowVectorXd>(buf, q) = path->result.parameters.row(row);
    return SEMPATH_OK;
  });
}

int sempath_path_final_index(const sempath_path* path) {
  if (!path || !path->result.final_index) return -1;
  return *path->result.final_index;
}

int sempath_path_n_penalized(const sempath_path* path) {
  return path ? static_cast<int>(path->pars_pen.size()) : 0;
}

sempath_status sempath_path_penalized_ids(const sempath_path* path, int* ids, int n_ids) {
  return guarded([&]() {
    if (!path || !ids) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    if (n_ids < static_cast<int>(path->pars_pen.size())) {
      set_error("buffer too small");
      return SEMPATH_ERR_BOUNDS;
    }
    std::copy(path->pars_pen.begin(), path->pars_pen.end(), ids);
    return SEMPATH_OK;
  });
}

/* ---- penalty math ------------------------------------------------------ */

double sempath_penalty_value(sempath_penalty_kind kind, double lambda, double alpha,
                             double gamma, double weight, double theta) {
  try {
    return sempath::penalty_unit_value(to_kind(kind), theta, lambda, alpha, gamma, weight);
  } catch (...) {
    return 0.0;
  }
}

double sempath_prox(double z, double t, sempath_penalty_kind kind, double alpha, double gamma,
                    double weight) {
  try {
    sempath::PenaltyKind k = to_kind(kind);
    double t_eff = k == sempath::PenaltyKind::AdaptiveLasso ? t * weight : t;
    return sempath::prox_scalar(z, t_eff, k, alpha, gamma);
  } catch (...) {
    return z;
  }
}

/* ---- simulation -------------------------------------------------------- */

sempath_status sempath_simulate_growth(int n, uint64_t seed, double* out) {
  return guarded([&]() {
    if (!out || n < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    Eigen::MatrixXd m = sempath::simulate_growth(n, seed);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        out[static_cast<size_t>(i) * m.cols() + j] = m(i, j);
    return SEMPATH_OK;
  });
}

sempath_status sempath_simulate_cfa(int n, const double* loadings,
                                    const double* resid_sd_or_null, int n_indicators,
                                    uint64_t seed, double* out) {
  return guarded([&]() {
    if (!out || !loadings || n < 1 || n_indicators < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(loadings, n_indicators);
    Eigen::VectorXd sd;
    if (resid_sd_or_null) {
      sd = Eigen::Map<const Eigen::VectorXd>(resid_sd_or_null, n_indicators);
    }
    Eigen::MatrixXd m = sempath::simulate_cfa(n, l, seed, sd);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        out[static_cast<size_t>(i) * m.cols() + j] = m(i, j);
    return SEMPATH_OK;
  });
}

sempath_status sempath_growth_model_text(char** out) {
  return guarded([&]() {
    if (!out) {
      set_error("null argument");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = dup_string(sempath::growth_model_text());
    return SEMPATH_OK;
  });
}

sempath_status sempath_cfa_model_text(int n_indicators, char** out) {
  return guarded([&]() {
    if (!out || n_indicators < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    *out = dup_string(sempath::cfa_model_text(n_indicators));
    return SEMPATH_OK;
  });
}

sempath_status sempath_replication_study(int n_obs, int n_reps, uint64_t seed,
                                         const sempath_penalty_kind* methods, int n_methods,
                                         const sempath_path_spec* path,
                                         const sempath_opt_spec* opt, int threads,
                                         sempath_replication_row* out_rows) {
  return guarded([&]() {
    if (!methods || !out_rows || n_methods < 1 || n_obs < 10 || n_reps < 1) {
      set_error("bad arguments");
      return SEMPATH_ERR_INVALID_ARG;
    }
    sempath::SimDesign design;
    design.kind = sempath::SimDesign::Kind::GrowthCovariates;
    design.n = n_obs;
    design.n_reps = n_reps;
    design.seed = seed;

    std::vector<sempath::PenaltyKind> kinds;
    kinds.reserve(n_methods);
    for (int i = 0; i < n_methods; ++i) kinds.push_back(to_kind(methods[i]));

    sempath::ReplicationReport report = sempath::replication_study(
        design, kinds, make_path(path), make_opt(opt), sempath::resolve_threads(threads));

    for (int i = 0; i < n_methods; ++i) {
      const auto& m = report.methods[i];
      out_rows[i].method = from_kind(m.method);
      out_rows[i].n_converged = m.n_converged;
      out_rows[i].false_positive_rate = m.fp_rate;
      out_rows[i].false_negative_rate = m.fn_rate;
      out_rows[i].convergence_rate = m.convergence_rate;
      out_rows[i].fp_count = m.fp_count;
      out_rows[i].tn_count = m.tn_count;
      out_rows[i].fn_count = m.fn_count;
      out_rows[i].tp_count = m.tp_count;
    }
    return SEMPATH_OK;
  });
}

} /* extern "C" */
