// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "a2g/environment.hpp"
#include "a2g/geometry.hpp"
#include "a2g/vec3.hpp"

namespace a2g {

struct Building {
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;  ///< square footprint side, m
  double height = 0.0;
};

struct Triangle {
  Vec3 v0, v1, v2;
};

/// Half-line origin + s * direction, s > 0. `direction` must be unit length.
struct Ray {
  Vec3 origin;
  Vec3 direction;
};

struct Hit {
  double s = 0.0;  ///< distance along the ray
  double u = 0.0;
  double v = 0.0;
};

/// Determinant magnitude below which a ray is treated as parallel.
inline constexpr double kParallelEpsilon = 1e-12;

/// Moller-Trumbore. Returns (s, u, v) iff s > 0 and (u, v) lies in the
/// closed triangle.
std::optional<Hit> ray_triangle_intersect(const Ray& ray, const Triangle& tri);

enum class Layout {
  Grid,     ///< one building per cell of a square grid, centered in the cell
  Uniform,  ///< uniformly random centers, overlaps allowed
  UniformDisjoint,  ///< uniformly random centers, footprints never overlap
};

/// Synthesized city. Buildings are axis-aligned boxes standing on z = 0;
/// each contributes 10 triangles (4 walls x 2 + roof x 2). The square
/// [-extent/2, extent/2]^2 is centered on the origin, which is a street
/// intersection in the grid layout.
class Scene {
 public:
  Scene() = default;
  Scene(std::vector<Building> buildings, double extent, std::uint64_t seed);

  const std::vector<Building>& buildings() const { return buildings_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  double extent() const { return extent_; }
  std::uint64_t seed() const { return seed_; }

  /// Triangles of building i (10 consecutive entries).
  std::span<const Triangle> building_triangles(std::size_t i) const;

  /// `# extent=.. seed=..` then `center_x,center_y,width,height` rows.
  std::string to_csv() const;

 private:
  std::vector<Building> buildings_;
  std::vector<Triangle> triangles_;
  double extent_ = 0.0;
  std::uint64_t seed_ = 0;
};

std::vector<Triangle> triangulate(const Building& b);

/// Inverse-CDF Rayleigh draw, strictly positive.
double sample_rayleigh(double gamma, std::mt19937_64& rng);

/// Grid pitch 1000/sqrt(beta) m, footprint from mean_width, heights
/// i.i.d. Rayleigh(gamma). Throws GeometryError when footprints would
/// overlap in the grid layout.
Scene synthesize_scene(const Environment& env, double extent,
                       std::uint64_t seed, Layout layout = Layout::Grid);

/// True iff some triangle crosses the open segment tx -> rx.
bool los_blocked_geometric(const Scene& scene, const Vec3& tx, const Vec3& rx);

/// True iff some triangle enters the Fresnel ellipsoid of the link (foci at
/// tx and rx, axes from fresnel_axes with the slant length). With a zero
/// wavelength this is the geometric test.
bool los_blocked_fresnel(const Scene& scene, const Vec3& tx, const Vec3& rx,
                         const FresnelSpec& spec);

struct SimOptions {
  double extent = 0.0;  ///< 0 selects 2 * max(d) + 100 m
  Layout layout = Layout::Grid;
  bool fresnel = true;  ///< false: optical-path blockage only
};

struct SimPoint {
  double d = 0.0;
  double p = 0.0;
  double ci_halfwidth = 0.0;  ///< 95% normal approximation
  long links = 0;             ///< receivers counted (street positions)
};

/// Monte-Carlo LoS probability. Each realization synthesizes a scene, puts
/// the transmitter over the center and receivers evenly on a ring of each
/// radius (randomly rotated per ring). Receivers inside a building
/// footprint are skipped. Deterministic in `seed` for any thread count.
std::vector<SimPoint> estimate_p_los(const Environment& env,
                                     const FresnelSpec& spec, double h_tx,
                                     double h_rx, std::span<const double> d_grid,
                                     int realizations, int links_per_ring,
                                     std::uint64_t seed,
                                     const SimOptions& opts = {});

}  // namespace a2g
