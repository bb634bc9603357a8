// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include "a2g/error.hpp"
#include "a2g/geometry.hpp"
#include "doctest.h"

using namespace a2g;

TEST_SUITE("geometry") {

TEST_CASE("wavelength from frequency") {
  CHECK(wavelength_from_frequency(299'792'458.0) == 1.0);
  CHECK(wavelength_from_frequency(6e9) == doctest::Approx(299'792'458.0 / 6e9).epsilon(1e-15));
  CHECK(wavelength_from_frequency(6e9) == doctest::Approx(0.0499654).epsilon(1e-6));
  CHECK(wavelength_from_frequency(28e9) == doctest::Approx(0.0107069).epsilon(1e-5));
  CHECK_THROWS_AS(wavelength_from_frequency(0.0), DomainError);
  CHECK_THROWS_AS(wavelength_from_frequency(-1.0), DomainError);
}

TEST_CASE("ellipsoid axes") {
  const auto ax = fresnel_axes({0.05, 1}, 1000.0);
  CHECK(ax.x_semi == doctest::Approx(std::sqrt(50.0) / 2.0).epsilon(1e-14));
  CHECK(ax.x_semi == doctest::Approx(3.5355).epsilon(1e-4));
  CHECK(ax.y_semi == doctest::Approx(500.0125).epsilon(1e-7));
  CHECK(ax.x_semi == ax.z_semi);

  const auto ax4 = fresnel_axes({0.05, 4}, 1000.0);
  CHECK(ax4.x_semi == doctest::Approx(2.0 * ax.x_semi).epsilon(1e-15));

  const auto ax0 = fresnel_axes({0.0, 1}, 800.0);
  CHECK(ax0.x_semi == 0.0);
  CHECK(ax0.y_semi == 400.0);
}

TEST_CASE("axes invariants over random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(1e-3, 1.0), dist(1.0, 5000.0);
  for (int k = 0; k < 500; ++k) {
    const FresnelSpec spec{lam(rng), 1 + static_cast<int>(rng() % 4)};
    const double d = dist(rng);
    const auto ax = fresnel_axes(spec, d);
    CHECK(ax.x_semi == ax.z_semi);
    if (d >= spec.order * spec.wavelength) CHECK(ax.y_semi >= ax.x_semi);
  }
}

TEST_CASE("radius profile") {
  const FresnelSpec spec{0.05, 1};
  CHECK(fresnel_radius_at(spec, 1000.0, 0.0) == 0.0);
  CHECK(fresnel_radius_at(spec, 1000.0, 1000.0) == 0.0);
  CHECK(fresnel_radius_at(spec, 1000.0, 500.0) ==
        doctest::Approx(fresnel_axes(spec, 1000.0).x_semi).epsilon(1e-14));
  CHECK(fresnel_radius_at(spec, 1000.0, 250.0) == doctest::Approx(std::sqrt(50.0) * 0.25).epsilon(1e-14));
  CHECK(fresnel_radius_at(spec, 1000.0, 250.0) == doctest::Approx(1.7678).epsilon(1e-4));
  CHECK_THROWS_AS(fresnel_radius_at(spec, 1000.0, -0.1), DomainError);
  CHECK_THROWS_AS(fresnel_radius_at(spec, 1000.0, 1000.1), DomainError);
}

TEST_CASE("radius symmetry and maximum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const FresnelSpec spec{0.001 + u(rng), 1 + static_cast<int>(rng() % 3)};
    const double d = 1.0 + 3000.0 * u(rng);
    const double x = d * u(rng);
    const double r = fresnel_radius_at(spec, d, x);
    CHECK(r == doctest::Approx(fresnel_radius_at(spec, d, d - x)).epsilon(1e-12));
    const double peak = std::sqrt(spec.order * spec.wavelength * d) / 2.0;
    CHECK(r <= peak * (1.0 + 1e-15));
    CHECK(fresnel_radius_at(spec, d, d / 2.0) == doctest::Approx(peak).epsilon(1e-14));
  }
}

TEST_CASE("allowed height") {
  const FresnelSpec optical{0.0, 1};
  const LinkGeometry link{70.0, 1.5, 1000.0};
  CHECK(allowed_height(link, optical, 0.0) == 70.0);
  CHECK(allowed_height(link, optical, 500.0) == doctest::Approx((70.0 + 1.5) / 2.0).epsilon(1e-15));
  CHECK(allowed_height(link, optical, 1000.0) == doctest::Approx(1.5).epsilon(1e-14));

  // inner bracket of the closed form written out independently:
  // h_tx - d_i * dh / d - sqrt(n lambda d) * min(d_i, d - d_i) / sqrt(d^2 + dh^2)
  const FresnelSpec spec{0.05, 1};
  const double bracket = 70.0 - 500.0 * 68.5 / 1000.0 -
                         std::sqrt(0.05 * 1000.0) * 500.0 / std::sqrt(1000.0 * 1000.0 + 68.5 * 68.5);
  CHECK(allowed_height(link, spec, 500.0) == doctest::Approx(bracket).epsilon(1e-12));
}

TEST_CASE("optical limit is linear interpolation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double h_rx = 10.0 * u(rng);
    const LinkGeometry link{h_rx + 1.0 + 500.0 * u(rng), h_rx, 1.0 + 2000.0 * u(rng)};
    const double x = link.d_rx * u(rng);
    const double lerp = link.h_tx + (link.h_rx - link.h_tx) * (x / link.d_rx);
    CHECK(allowed_height(link, {0.0, 1}, x) == doctest::Approx(lerp).epsilon(1e-13));
  }
}

TEST_CASE("two formulations of the allowed height agree") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double h_rx = 5.0 * u(rng);
    const LinkGeometry link{h_rx + 1.0 + 800.0 * u(rng), h_rx, 10.0 + 3000.0 * u(rng)};
    const double lambda = 0.005 + 0.3 * u(rng);
    const double di = link.d_rx * u(rng);
    const double dh = link.h_tx - link.h_rx;
    const double bracket = link.h_tx - di * dh / link.d_rx -
                           std::sqrt(lambda * link.d_rx) * std::min(di, link.d_rx - di) /
                               std::sqrt(link.d_rx * link.d_rx + dh * dh);
    const double got = allowed_height(link, {lambda, 1}, di);
    CHECK(std::abs(got - bracket) <= 1e-9 * std::max(1.0, std::abs(bracket)));
  }
}

TEST_CASE("elevation angle") {
  CHECK(elevation_angle({100.0, 0.0, 100.0}) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(elevation_angle({5.0, 5.0, 100.0}) == 0.0);
  CHECK(elevation_angle({500.0, 2.0, 498.0}) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
}

TEST_CASE("link validation") {
  CHECK_THROWS_AS(LinkGeometry({0.0, 0.0, 10.0}).validate(), DomainError);
  CHECK_THROWS_AS(LinkGeometry({10.0, -1.0, 10.0}).validate(), DomainError);
  CHECK_THROWS_AS(LinkGeometry({10.0, 1.0, 0.0}).validate(), DomainError);
  CHECK_THROWS_AS(LinkGeometry({10.0, 20.0, 5.0}).validate(), DomainError);
  CHECK_NOTHROW(LinkGeometry({10.0, 10.0, 5.0}).validate());
  CHECK_THROWS_AS(FresnelSpec({0.1, 0}).validate(), DomainError);
  CHECK_THROWS_AS(FresnelSpec({-0.1, 1}).validate(), DomainError);
}

}  // TEST_SUITE
