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
#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sempath/model_syntax.hpp"

using namespace sempath;

namespace {

ModelSpec canonical(ModelSpec spec) {
  std::sort(spec.latent_defs.begin(), spec.latent_defs.end(),
            [](const auto& a, const auto& b) { return a.latent < b.latent; });
  std::sort(spec.regressions.begin(), spec.regressions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.outcome, a.predictor) < std::tie(b.outcome, b.predictor);
  });
  auto key = [](const Covariance& c) {
    return c.var1 <= c.var2 ? std::make_pair(c.var1, c.var2) : std::make_pair(c.var2, c.var1);
  };
  std::sort(spec.covariances.begin(), spec.covariances.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::sort(spec.observed_vars.begin(), spec.observed_vars.end());
  std::sort(spec.latent_vars.begin(), spec.latent_vars.end());
  return spec;
}

const Indicator& indicator(const ModelSpec& spec, const std::string& latent,
                           const std::string& name) {
  for (const auto& def : spec.latent_defs) {
    if (def.latent != latent) continue;
    for (const auto& ind : def.indicators) {
      if (ind.name == name) return ind;
    }
  }
  throw std::runtime_error("indicator not found");
}

}  // namespace

TEST_CASE("NA* frees the first loading, later loadings default free") {
  ModelSpec spec = parse_model("f1 =~ NA*A1+A2");
  REQUIRE(spec.latent_vars == std::vector<std::string>{"f1"});
  REQUIRE(spec.observed_vars == std::vector<std::string>{"A1", "A2"});
  CHECK(indicator(spec, "f1", "A1").coef.kind == CoefKind::Free);
  CHECK(indicator(spec, "f1", "A2").coef.kind == CoefKind::Free);
}

TEST_CASE("fixed loading syntax") {
  ModelSpec spec = parse_model("i =~ 1*x1 + 1*x2");
  CHECK(indicator(spec, "i", "x1").coef == Coefficient::fixed(1.0));
  CHECK(indicator(spec, "i", "x2").coef == Coefficient::fixed(1.0));
}

TEST_CASE("empty text is an error") {
  CHECK_THROWS_AS(parse_model(""), ParseError);
  CHECK_THROWS_AS(parse_model("  \n # only a comment\n"), ParseError);
}

TEST_CASE("first listed indicator is fixed to 1 unless prefixed") {
  ModelSpec spec = parse_model("f1 =~ A1 + A2 + A3");
  CHECK(indicator(spec, "f1", "A1").coef == Coefficient::fixed(1.0));
  CHECK(indicator(spec, "f1", "A2").coef.kind == CoefKind::Free);
  CHECK(indicator(spec, "f1", "A3").coef.kind == CoefKind::Free);
}

TEST_CASE("modifiers: numbers fix, labels label, NA frees") {
  ModelSpec spec = parse_model("f =~ -0.5*y1 + lab1*y2\n"
                               "y3 ~ b1*y1 + y2\n"
                               "y1 ~~ 0*y2");
  CHECK(indicator(spec, "f", "y1").coef == Coefficient::fixed(-0.5));
  CHECK(indicator(spec, "f", "y2").coef == Coefficient::labelled("lab1"));
  REQUIRE(spec.regressions.size() == 2);
  CHECK(spec.regressions[0].coef == Coefficient::labelled("b1"));
  CHECK(spec.regressions[1].coef.kind == CoefKind::Free);
  REQUIRE(spec.covariances.size() == 1);
  CHECK(spec.covariances[0].coef == Coefficient::fixed(0.0));
}

TEST_CASE("whitespace-insensitive, semicolons and comments") {
  ModelSpec a = parse_model("f1=~A1+A2;f1~~1*f1 # scale\n");
  ModelSpec b = parse_model("f1 =~ A1 + A2\nf1 ~~ 1*f1\n");
  CHECK(a == b);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_model("f1 =~ A1\nf2 >> A2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 1);
  }

  try {
    parse_model("f1 =~ A1 + 3x*A2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() > 6);
  }
}

TEST_CASE("conflicting fixed values for the same parameter") {
  CHECK_THROWS_AS(parse_model("f1 =~ 1*A1\nf1 =~ 2*A1"), ParseError);
  CHECK_THROWS_AS(parse_model("x ~~ 1*y\ny ~~ 2*x"), ParseError);
}

TEST_CASE("self-relations rejected") {
  CHECK_THROWS_AS(parse_model("x ~ x"), ParseError);
  CHECK_THROWS_AS(parse_model("f =~ f"), ParseError);
}

TEST_CASE("exact duplicate statements collapse and are reported") {
  ModelSpec spec = parse_model("y1 ~ y2\ny1 ~ y2");
  CHECK(spec.regressions.size() == 1);
  ValidationReport report = validate_spec(spec);
  CHECK(report.error_count() == 0);
  REQUIRE(report.warning_count() == 1);
  CHECK(report.issues[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("unscaled latent draws a warning") {
  ModelSpec spec = parse_model("f1 =~ NA*A1");
  ValidationReport report = validate_spec(spec);
  REQUIRE(report.warning_count() >= 1);
  CHECK(report.issues[0].message.find("f1") != std::string::npos);
}

TEST_CASE("the NA*-loadings-plus-fixed-variance pattern validates clean") {
  ModelSpec spec = parse_model("f1 =~ NA*A1+A2+A3+A4+A5+O2+N3\nf1~~1*f1");
  CHECK(validate_spec(spec).clean());
}

TEST_CASE("unknown variable against a data column list") {
  ModelSpec spec = parse_model("f1 =~ A1 + A2\ni_out ~ c99");
  std::vector<std::string> data_vars = {"A1", "A2", "i_out"};
  ValidationReport report = validate_spec(spec, &data_vars);
  REQUIRE(report.error_count() == 1);
  CHECK(report.issues[0].message.find("c99") != std::string::npos);
}

TEST_CASE("round trip through the canonical printer") {
  const char* models[] = {
      "f1 =~ NA*A1+A2+A3\nf1 ~~ 1*f1",
      "i =~ 1*x1 + 1*x2 + 1*x3 + 1*x4\ns =~ 0*x1 + 1*x2 + 2*x3 + 3*x4\n"
      "i ~ c1 + c2\ns ~ c1 + c2\ni ~~ s",
      "f =~ y1 + lab*y2 + -2.25*y3\ny1 ~~ 0.5*y2",
  };
  for (const char* text : models) {
    ModelSpec spec = parse_model(text);
    ModelSpec reparsed = parse_model(print_model(spec));
    CHECK(reparsed == spec);
  }
}

TEST_CASE("statement order does not change the model up to canonical ordering") {
  std::vector<std::string> lines = {
      "f1 =~ NA*A1+A2+A3", "f1 ~~ 1*f1", "out ~ A1 + A2", "A2 ~~ A3",
  };
  ModelSpec base = canonical(parse_model(lines[0] + "\n" + lines[1] + "\n" + lines[2] + "\n" +
                                         lines[3]));
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::ostringstream text;
    for (const auto& l : lines) text << l << "\n";
    CHECK(canonical(parse_model(text.str())) == base);
  }
}

TEST_CASE("every k* prefix produces exactly one fixed entry with value k") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double v1 = value(rng), v2 = value(rng), v3 = value(rng);
    std::ostringstream text;
    text.precision(17);
    text << "f =~ " << v1 << "*y1 + y2\n";
    text << "y3 ~ " << v2 << "*y1\n";
    text << "y2 ~~ " << v3 << "*y3\n";
    ModelSpec spec = parse_model(text.str());
    int fixed_count = 0;
    for (const auto& def : spec.latent_defs)
      for (const auto& ind : def.indicators)
        if (ind.coef.kind == CoefKind::Fixed) ++fixed_count;
    for (const auto& r : spec.regressions)
      if (r.coef.kind == CoefKind::Fixed) ++fixed_count;
    for (const auto& c : spec.covariances)
      if (c.coef.kind == CoefKind::Fixed) ++fixed_count;
    CHECK(fixed_count == 3);
    CHECK(indicator(spec, "f", "y1").coef.value == doctest::Approx(v1).epsilon(1e-12));
    CHECK(spec.regressions[0].coef.value == doctest::Approx(v2).epsilon(1e-12));
    CHECK(spec.covariances[0].coef.value == doctest::Approx(v3).epsilon(1e-12));
  }
}
