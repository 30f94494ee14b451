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

#ifndef SEMPATH_MODEL_SYNTAX_HPP
#define SEMPATH_MODEL_SYNTAX_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sempath {

/// Parse failure with 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class CoefKind { Free, Fixed, Labelled };

struct Coefficient {
  CoefKind kind = CoefKind::Free;
  double value = 0.0;  // Fixed only
  std::string label;   // Labelled only

  static Coefficient free() { return {CoefKind::Free, 0.0, {}}; }
  static Coefficient fixed(double v) { return {CoefKind::Fixed, v, {}}; }
  static Coefficient labelled(std::string l) {
    return {CoefKind::Labelled, 0.0, std::move(l)};
  }

  bool operator==(const Coefficient& o) const {
    return kind == o.kind && (kind != CoefKind::Fixed || value == o.value) &&
           (kind != CoefKind::Labelled || label == o.label);
  }
};

struct Indicator {
  std::string name;
  Coefficient coef;
  bool operator==(const Indicator&) const = default;
};

struct LatentDef {
  std::string latent;
  std::vector<Indicator> indicators;
  bool operator==(const LatentDef&) const = default;
};

struct Regression {
  std::string outcome;
  std::string predictor;
  Coefficient coef;
  bool operator==(const Regression&) const = default;
};

// var1 == var2 is a variance.
struct Covariance {
  std::string var1;
  std::string var2;
  Coefficient coef;
  bool operator==(const Covariance&) const = default;
};

struct ModelSpec {
  std::vector<LatentDef> latent_defs;     // one entry per latent, first-appearance order
  std::vector<Regression> regressions;    // statement order
  std::vector<Covariance> covariances;    // statement order
  std::vector<std::string> observed_vars; // first-appearance order
  std::vector<std::string> latent_vars;   // =~ definition order
  bool growth_mode = false;               // adds Fixed(0) observed intercepts + Free latent means
  std::vector<std::string> duplicate_notes; // collapsed exact-duplicate statements

  bool operator==(const ModelSpec& o) const {
    return latent_defs == o.latent_defs && regressions == o.regressions &&
           covariances == o.covariances && observed_vars == o.observed_vars &&
           latent_vars == o.latent_vars && growth_mode == o.growth_mode;
  }
};

/// Parse lavaan-style model text: `=~` measurement, `~` regression, `~~`
/// (co)variance. `k*` fixes a coefficient, `NA*` forces it free, any other
/// prefix attaches a label. One statement per line; `;` also separates;
/// `#` starts a comment. The first listed indicator of each latent defaults
/// to Fixed(1.0) unless prefixed.
ModelSpec parse_model(std::string_view text, bool growth_mode = false);

/// Canonical printer; parse_model(print_model(spec)) == spec.
std::string print_model(const ModelSpec& spec);

struct ValidationIssue {
  enum class Level { Warning, Error };
  Level level;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  int error_count() const;
  int warning_count() const;
  bool clean() const { return issues.empty(); }
  std::string to_string() const;
};

/// Structural checks: unscaled latents, duplicate statements, and (when
/// data_vars is given) observed variables absent from the data.
ValidationReport validate_spec(const ModelSpec& spec,
                               const std::vector<std::string>* data_vars = nullptr);

}  // namespace sempath

#endif  // SEMPATH_MODEL_SYNTAX_HPP
