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

#include "sempath/model_syntax.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

namespace sempath {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool valid_name(std::string_view s) {
  if (s.empty() || !is_name_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return is_name_char(c); });
}

std::string_view trim(std::string_view s, int* col_offset = nullptr) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (col_offset) *col_offset += static_cast<int>(b);
  return s.substr(b, e - b);
}

enum class Relation { Measurement, Regression, Cov };

struct RawTerm {
  std::string name;
  Coefficient coef;
  bool had_modifier = false;  // distinguishes plain terms from NA*/k*/label*
  int line = 0, column = 0;
};

struct RawStatement {
  Relation rel;
  std::string lhs;
  std::vector<RawTerm> terms;
  int line = 0, column = 0;
};

// One statement: "lhs OP term (+ term)*". Statement text has comments
// stripped and is nonempty after trimming.
RawStatement parse_statement(std::string_view stmt, int line, int base_col) {
  static const struct {
    const char* op;
    Relation rel;
  } kOps[] = {{"=~", Relation::Measurement}, {"~~", Relation::Cov}, {"~", Relation::Regression}};

  size_t op_pos = std::string_view::npos;
  Relation rel = Relation::Regression;
  size_t op_len = 0;
  for (const auto& cand : kOps) {
    size_t pos = stmt.find(cand.op);
    if (pos != std::string_view::npos) {
      op_pos = pos;
      rel = cand.rel;
      op_len = std::strlen(cand.op);
      break;
    }
  }
  if (op_pos == std::string_view::npos) {
    throw ParseError("expected one of the operators '=~', '~', '~~'", line, base_col + 1);
  }

  RawStatement out;
  out.rel = rel;
  out.line = line;
  out.column = base_col + 1;

  int lhs_col = base_col;
  std::string_view lhs = trim(stmt.substr(0, op_pos), &lhs_col);
  if (!valid_name(lhs)) {
    throw ParseError("left-hand side must be a single variable name", line, lhs_col + 1);
  }
  out.lhs = std::string(lhs);

  std::string_view rhs_all = stmt.substr(op_pos + op_len);
  int rhs_base = base_col + static_cast<int>(op_pos + op_len);
  if (trim(rhs_all).empty()) {
    throw ParseError("empty right-hand side", line, rhs_base + 1);
  }

  size_t start = 0;
  while (start <= rhs_all.size()) {
    size_t plus = rhs_all.find('+', start);
    std::string_view piece = rhs_all.substr(
        start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    int term_col = rhs_base + static_cast<int>(start);
    std::string_view term = trim(piece, &term_col);
    if (term.empty()) {
      throw ParseError("empty term in '+' list", line, term_col + 1);
    }

    RawTerm t;
    t.line = line;
    t.column = term_col + 1;
    size_t star = term.find('*');
    if (star != std::string_view::npos) {
      std::string_view mod = trim(term.substr(0, star));
      int name_col = term_col + static_cast<int>(star) + 1;
      std::string_view name = trim(term.substr(star + 1), &name_col);
      if (!valid_name(name)) {
        throw ParseError("expected a variable name after '*'", line, name_col + 1);
      }
      t.name = std::string(name);
      t.had_modifier = true;
      if (mod == "NA") {
        t.coef = Coefficient::free();
      } else {
        char* end = nullptr;
        std::string mod_s(mod);
        double v = std::strtod(mod_s.c_str(), &end);
        if (end && *end == '\0' && !mod_s.empty()) {
          if (!std::isfinite(v)) {
            throw ParseError("fixed value must be finite", line, term_col + 1);
          }
          t.coef = Coefficient::fixed(v);
        } else if (valid_name(mod)) {
          t.coef = Coefficient::labelled(std::string(mod));
        } else {
          throw ParseError("modifier must be a number, NA, or a label", line, term_col + 1);
        }
      }
    } else {
      if (!valid_name(term)) {
        throw ParseError("expected a variable name", line, term_col + 1);
      }
      t.name = std::string(term);
      t.coef = Coefficient::free();
    }
    out.terms.push_back(std::move(t));

    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return out;
}

std::string coef_to_string(const Coefficient& c) {
  switch (c.kind) {
    case CoefKind::Free:
      return "NA*";
    case CoefKind::Labelled:
      return c.label + "*";
    case CoefKind::Fixed: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%g", c.value);
      if (std::strtod(buf, nullptr) != c.value) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.value);
      }
      return std::string(buf) + "*";
    }
  }
  return {};
}

std::string describe(Relation rel, const std::string& lhs, const std::string& rhs) {
  const char* op = rel == Relation::Measurement ? "=~" : rel == Relation::Cov ? "~~" : "~";
  return lhs + " " + op + " " + rhs;
}

}  // namespace

ModelSpec parse_model(std::string_view text, bool growth_mode) {
  // Split into statements on newlines and ';', stripping '#' comments.
  std::vector<RawStatement> statements;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    size_t seg_start = 0;
    while (seg_start <= line.size()) {
      size_t semi = line.find(';', seg_start);
      std::string_view seg = line.substr(
          seg_start, semi == std::string_view::npos ? std::string_view::npos : semi - seg_start);
      int col = static_cast<int>(seg_start);
      if (!trim(seg).empty()) {
        int c = col;
        std::string_view body = trim(seg, &c);
        statements.push_back(parse_statement(body, line_no, c));
      }
      if (semi == std::string_view::npos) break;
      seg_start = semi + 1;
    }

    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (statements.empty()) {
    throw ParseError("no statements in model text", 1, 1);
  }

  ModelSpec spec;
  spec.growth_mode = growth_mode;

  // Pass 1: latent names.
  std::set<std::string> latents;
  for (const auto& st : statements) {
    if (st.rel == Relation::Measurement && latents.insert(st.lhs).second) {
      spec.latent_vars.push_back(st.lhs);
    }
  }

  std::set<std::string> seen_observed;
  auto note_var = [&](const std::string& name) {
    if (!latents.count(name) && seen_observed.insert(name).second) {
      spec.observed_vars.push_back(name);
    }
  };

  // Keyed duplicate/conflict detection. Covariances key on the unordered pair.
  struct Raw {
    Coefficient coef;
    bool had_modifier;
  };
  std::map<std::string, Raw> seen;
  auto merge = [&](Relation rel, const std::string& lhs, const RawTerm& t) -> bool {
    std::string a = lhs, b = t.name;
    if (rel == Relation::Cov && b < a) std::swap(a, b);
    std::string key = describe(rel, a, b);
    auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second.coef == t.coef && it->second.had_modifier == t.had_modifier) {
        spec.duplicate_notes.push_back(key);
        return false;  // identical restatement, collapse
      }
      throw ParseError("conflicting fixed values or status for '" + key + "'", t.line, t.column);
    }
    seen.emplace(key, Raw{t.coef, t.had_modifier});
    return true;
  };

  std::map<std::string, size_t> latent_index;
  std::vector<std::vector<bool>> first_loading_modifier;  // per latent, per indicator

  for (const auto& st : statements) {
    switch (st.rel) {
      case Relation::Measurement: {
        auto [it, inserted] = latent_index.emplace(st.lhs, spec.latent_defs.size());
        if (inserted) {
          spec.latent_defs.push_back({st.lhs, {}});
          first_loading_modifier.emplace_back();
        }
        auto& def = spec.latent_defs[it->second];
        auto& mods = first_loading_modifier[it->second];
        for (const auto& t : st.terms) {
          if (t.name == st.lhs) {
            throw ParseError("latent '" + st.lhs + "' cannot indicate itself", t.line, t.column);
          }
          note_var(t.name);
          if (merge(st.rel, st.lhs, t)) {
            def.indicators.push_back({t.name, t.coef});
            mods.push_back(t.had_modifier);
          }
        }
        break;
      }
      case Relation::Regression: {
        note_var(st.lhs);
        for (const auto& t : st.terms) {
          if (t.name == st.lhs) {
            throw ParseError("variable '" + st.lhs + "' regressed on itself", t.line, t.column);
          }
          note_var(t.name);
          if (merge(st.rel, st.lhs, t)) {
            spec.regressions.push_back({st.lhs, t.name, t.coef});
          }
        }
        break;
      }
      case Relation::Cov: {
        note_var(st.lhs);
        for (const auto& t : st.terms) {
          note_var(t.name);
          if (merge(st.rel, st.lhs, t)) {
            spec.covariances.push_back({st.lhs, t.name, t.coef});
          }
        }
        break;
      }
    }
  }

  // Scale convention: the first listed indicator of each latent is fixed to
  // 1.0 unless it carried a modifier (NA* frees it explicitly).
  for (size_t i = 0; i < spec.latent_defs.size(); ++i) {
    auto& def = spec.latent_defs[i];
    if (!def.indicators.empty() && !first_loading_modifier[i].empty() &&
        !first_loading_modifier[i][0]) {
      def.indicators[0].coef = Coefficient::fixed(1.0);
    }
  }

  return spec;
}

std::string print_model(const ModelSpec& spec) {
  std::ostringstream out;
  for (const auto& def : spec.latent_defs) {
    out << def.latent << " =~ ";
    for (size_t i = 0; i < def.indicators.size(); ++i) {
      if (i) out << " + ";
      out << coef_to_string(def.indicators[i].coef) << def.indicators[i].name;
    }
    out << "\n";
  }
  for (const auto& r : spec.regressions) {
    out << r.outcome << " ~ " << coef_to_string(r.coef) << r.predictor << "\n";
  }
  for (const auto& c : spec.covariances) {
    out << c.var1 << " ~~ " << coef_to_string(c.coef) << c.var2 << "\n";
  }
  return out.str();
}

int ValidationReport::error_count() const {
  return static_cast<int>(std::count_if(issues.begin(), issues.end(), [](const auto& i) {
    return i.level == ValidationIssue::Level::Error;
  }));
}

int ValidationReport::warning_count() const {
  return static_cast<int>(issues.size()) - error_count();
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& i : issues) {
    out << (i.level == ValidationIssue::Level::Error ? "error: " : "warning: ") << i.message
        << "\n";
  }
  return out.str();
}

ValidationReport validate_spec(const ModelSpec& spec, const std::vector<std::string>* data_vars) {
  ValidationReport report;
  auto warn = [&](std::string m) {
    report.issues.push_back({ValidationIssue::Level::Warning, std::move(m)});
  };
  auto error = [&](std::string m) {
    report.issues.push_back({ValidationIssue::Level::Error, std::move(m)});
  };

  if (data_vars) {
    std::set<std::string> known(data_vars->begin(), data_vars->end());
    for (const auto& v : spec.observed_vars) {
      if (!known.count(v)) error("unknown variable '" + v + "' (not a data column)");
    }
  }

  // A latent is scaled by a nonzero fixed loading or a fixed variance.
  for (const auto& def : spec.latent_defs) {
    bool scaled = std::any_of(def.indicators.begin(), def.indicators.end(), [](const auto& ind) {
      return ind.coef.kind == CoefKind::Fixed && ind.coef.value != 0.0;
    });
    if (!scaled) {
      for (const auto& c : spec.covariances) {
        if (c.var1 == def.latent && c.var2 == def.latent && c.coef.kind == CoefKind::Fixed) {
          scaled = true;
          break;
        }
      }
    }
    if (!scaled) {
      warn("latent '" + def.latent +
           "' has no scale (fix a loading or its variance, e.g. '" + def.latent + " ~~ 1*" +
           def.latent + "')");
    }
  }

  for (const auto& d : spec.duplicate_notes) {
    warn("duplicate statement '" + d + "' collapsed");
  }

  return report;
}

}  // namespace sempath
