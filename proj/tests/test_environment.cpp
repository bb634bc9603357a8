// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include "a2g/environment.hpp"
#include "a2g/error.hpp"
#include "doctest.h"

using namespace a2g;

namespace {
const Environment kUrban{0.3, 500.0, 15.0};
}

TEST_SUITE("environment") {

TEST_CASE("height density") {
  CHECK(height_pdf(15.0, 0.0) == 0.0);
  CHECK(height_pdf(15.0, 15.0) == doctest::Approx(std::exp(-0.5) / 15.0).epsilon(1e-15));
  CHECK_THROWS_AS(height_pdf(15.0, -1.0), DomainError);

  // composite Simpson on [0, 20 gamma]
  for (double g : {8.0, 15.0, 50.0}) {
    const int n = 20000;
    const double b = 20.0 * g, h = b / n;
    double s = height_pdf(g, 0.0) + height_pdf(g, b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * height_pdf(g, i * h);
    CHECK(std::abs(s * h / 3.0 - 1.0) < 1e-6);
  }
}

TEST_CASE("height distribution function") {
  CHECK(height_cdf(15.0, 15.0 * std::sqrt(2.0 * std::log(2.0))) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(height_cdf(15.0, 1e6) == 1.0);
  CHECK(height_cdf(15.0, 30.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-15));
  CHECK(height_cdf(15.0, 30.0) == doctest::Approx(0.8647).epsilon(1e-4));
  CHECK(height_cdf(15.0, -5.0) == 0.0);
  CHECK(height_cdf(15.0, 0.0) == 0.0);

  double prev = 0.0;
  for (double h = 0.0; h < 200.0; h += 0.25) {
    const double c = height_cdf(15.0, h);
    CHECK(c >= prev);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    prev = c;
  }
}

TEST_CASE("distribution function integrates the density") {
  for (double x : {3.0, 10.0, 25.0, 60.0}) {
    const int n = 4000;
    const double h = x / n;
    double s = height_pdf(20.0, 0.0) + height_pdf(20.0, x);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * height_pdf(20.0, i * h);
    CHECK(s * h / 3.0 == doctest::Approx(height_cdf(20.0, x)).epsilon(1e-10));
  }
}

TEST_CASE("building count") {
  CHECK(building_count(kUrban, 1000.0) == 12);
  CHECK(building_count(kUrban, 0.0) == 0);
  CHECK(building_count(kUrban, 50.0) == 0);
  CHECK_THROWS_AS(building_count(kUrban, -1.0), DomainError);
}

TEST_CASE("building count is monotone") {
  long prev = 0;
  for (double d = 0.0; d <= 3000.0; d += 0.5) {
    const long n = building_count(kUrban, d);
    CHECK(n >= prev);
    prev = n;
  }
  for (double a = 0.05; a <= 1.0; a += 0.05) {
    CHECK(building_count({a, 500.0, 15.0}, 800.0) <= building_count({a + 0.05 > 1.0 ? 1.0 : a + 0.05, 500.0, 15.0}, 800.0));
    CHECK(building_count({0.3, a * 1000.0, 15.0}, 800.0) <= building_count({0.3, (a + 0.05) * 1000.0, 15.0}, 800.0));
  }
}

TEST_CASE("mean width") {
  CHECK(mean_width(kUrban) == doctest::Approx(24.5).epsilon(0.002));
  CHECK(mean_width({0.5, 300.0, 20.0}) == doctest::Approx(40.8).epsilon(0.002));
  CHECK(mean_width({500.0 / 1e6, 500.0, 15.0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("building positions") {
  const Environment one{0.3, 500.0, 15.0};
  const double d1 = 1000.0 / std::sqrt(150.0) + 1.0;  // exactly one building
  REQUIRE(building_count(one, d1) == 1);
  CHECK(building_position(one, d1, 1) == doctest::Approx(d1 / 2.0 + mean_width(one) / 2.0).epsilon(1e-15));

  CHECK(building_position(kUrban, 1000.0, 1) ==
        doctest::Approx(0.5 * 1000.0 / 12.0 + 1000.0 * std::sqrt(0.3 / 500.0) / 2.0).epsilon(1e-14));
  CHECK(building_position(kUrban, 1000.0, 1) == doctest::Approx(53.9).epsilon(1e-3));
  CHECK(building_position(kUrban, 1000.0, 3, 0.0) == doctest::Approx(2.5 * 1000.0 / 12.0).epsilon(1e-15));

  CHECK_THROWS_AS(building_position(kUrban, 1000.0, 0), DomainError);
  CHECK_THROWS_AS(building_position(kUrban, 1000.0, 13), DomainError);
  CHECK_THROWS_AS(building_position(kUrban, 50.0, 1), DomainError);
}

TEST_CASE("positions are increasing and bounded") {
  for (double d = 60.0; d < 3000.0; d += 37.0) {
    const long n = building_count(kUrban, d);
    double prev = 0.0;
    for (long i = 1; i <= n; ++i) {
      const double p = building_position(kUrban, d, i);
      CHECK(p > prev);
      CHECK(p > 0.0);
      CHECK(p <= d + mean_width(kUrban) / 2.0);
      prev = p;
    }
  }
}

TEST_CASE("scenario table") {
  const auto t = ScenarioTable::load(A2G_SCENARIO_FILE);
  REQUIRE(t.presets().size() == 4);
  const struct {
    const char* name;
    Environment env;
  } expect[] = {{"Suburban", {0.1, 750.0, 8.0}},
                {"Urban", {0.3, 500.0, 15.0}},
                {"DenseUrban", {0.5, 300.0, 20.0}},
                {"HighRiseUrban", {0.5, 300.0, 50.0}}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.presets()[i].name == expect[i].name);
    CHECK(t.presets()[i].env.alpha == expect[i].env.alpha);
    CHECK(t.presets()[i].env.beta == expect[i].env.beta);
    CHECK(t.presets()[i].env.gamma == expect[i].env.gamma);
  }
  CHECK(t.find("high-rise")->name == "HighRiseUrban");
  CHECK(t.find("dense_urban")->name == "DenseUrban");
  CHECK(t.find("URBAN")->name == "Urban");
  CHECK_FALSE(t.find("rural").has_value());
}

TEST_CASE("scenario table parsing") {
  const auto t = ScenarioTable::parse("# custom\n\n  Harbor 0.2 100 12  # port area\n");
  REQUIRE(t.presets().size() == 1);
  CHECK(t.presets()[0].name == "Harbor");
  CHECK(t.presets()[0].env.gamma == 12.0);
  CHECK_THROWS_AS(ScenarioTable::parse("Bad 0.2 100\n"), ParseError);
  CHECK_THROWS_AS(ScenarioTable::parse("Bad 0.2 100 12 9\n"), ParseError);
  CHECK_THROWS_AS(ScenarioTable::parse("Bad 1.5 100 12\n"), ParseError);
  CHECK_THROWS_AS(ScenarioTable::load("/nonexistent/scenarios.txt"), IoError);
}

TEST_CASE("environment validation") {
  CHECK_THROWS_AS(Environment({0.0, 500.0, 15.0}).validate(), DomainError);
  CHECK_THROWS_AS(Environment({1.1, 500.0, 15.0}).validate(), DomainError);
  CHECK_THROWS_AS(Environment({0.3, 0.0, 15.0}).validate(), DomainError);
  CHECK_THROWS_AS(Environment({0.3, 500.0, 0.0}).validate(), DomainError);
  CHECK_NOTHROW(Environment({1.0, 500.0, 15.0}).validate());
}

}  // TEST_SUITE
