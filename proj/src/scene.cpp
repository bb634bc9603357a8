// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <algorithm>
#include <cmath>

#include "a2g/error.hpp"
#include "a2g/rt_sim.hpp"

namespace a2g {

namespace {

constexpr std::size_t kTrianglesPerBuilding = 10;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Triangle> triangulate(const Building& b) {
  const double x0 = b.center_x - b.width / 2, x1 = b.center_x + b.width / 2;
  const double y0 = b.center_y - b.width / 2, y1 = b.center_y + b.width / 2;
  const double h = b.height;
  const Vec3 g00{x0, y0, 0}, g10{x1, y0, 0}, g11{x1, y1, 0}, g01{x0, y1, 0};
  const Vec3 r00{x0, y0, h}, r10{x1, y0, h}, r11{x1, y1, h}, r01{x0, y1, h};
  return {
      {g00, g10, r10}, {g00, r10, r00},  // south wall
      {g10, g11, r11}, {g10, r11, r10},  // east
      {g11, g01, r01}, {g11, r01, r11},  // north
      {g01, g00, r00}, {g01, r00, r01},  // west
      {r00, r10, r11}, {r00, r11, r01},  // roof
  };
}

Scene::Scene(std::vector<Building> buildings, double extent, std::uint64_t seed)
    : buildings_(std::move(buildings)), extent_(extent), seed_(seed) {
  triangles_.reserve(buildings_.size() * kTrianglesPerBuilding);
  for (const auto& b : buildings_) {
    if (!(b.width > 0.0 && b.height > 0.0))
      throw GeometryError("scene: building width and height must be positive");
    const auto tris = triangulate(b);
    triangles_.insert(triangles_.end(), tris.begin(), tris.end());
  }
}

std::span<const Triangle> Scene::building_triangles(std::size_t i) const {
  return std::span<const Triangle>(triangles_).subspan(i * kTrianglesPerBuilding,
                                                       kTrianglesPerBuilding);
}

std::string Scene::to_csv() const {
  std::string out = "# extent=" + fmt(extent_) + " seed=" + std::to_string(seed_) + "\n";
  out += "center_x,center_y,width,height\n";
  for (const auto& b : buildings_)
    out += fmt(b.center_x) + ',' + fmt(b.center_y) + ',' + fmt(b.width) + ',' + fmt(b.height) + '\n';
  return out;
}

double sample_rayleigh(double gamma, std::mt19937_64& rng) {
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
  return gamma * std::sqrt(-2.0 * std::log1p(-u));
}

Scene synthesize_scene(const Environment& env, double extent, std::uint64_t seed, Layout layout) {
  env.validate();
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw DomainError("synthesize_scene: extent must be positive");
  const double pitch = 1000.0 / std::sqrt(env.beta);
  const double width = mean_width(env);
  std::mt19937_64 rng(seed);
  std::vector<Building> buildings;

  if (layout == Layout::Grid) {
    if (width >= pitch)
      throw GeometryError("synthesize_scene: building width " + fmt(width) +
                          " m does not fit the grid pitch " + fmt(pitch) +
                          " m; (alpha, beta) are inconsistent");
    // Even cell count keeps the origin on a street intersection.
    const long n = 2 * static_cast<long>(std::floor(extent / (2.0 * pitch)));
    buildings.reserve(static_cast<std::size_t>(n * n));
    for (long iy = 0; iy < n; ++iy)
      for (long ix = 0; ix < n; ++ix) {
        const double cx = (static_cast<double>(ix) + 0.5 - static_cast<double>(n) / 2) * pitch;
        const double cy = (static_cast<double>(iy) + 0.5 - static_cast<double>(n) / 2) * pitch;
        buildings.push_back({cx, cy, width, sample_rayleigh(env.gamma, rng)});
      }
  } else if (layout == Layout::UniformDisjoint) {
    if (width >= extent) throw GeometryError("synthesize_scene: extent smaller than a building");
    const auto count = std::llround(env.beta * (extent / 1000.0) * (extent / 1000.0));
    const double span = extent - width;
    // Rejection sampling on a hash grid with cell = width: an overlapping
    // footprint must have its center in one of the 3x3 neighbouring cells.
    const long cells = std::max(1L, static_cast<long>(std::floor(extent / width)));
    const double cell = extent / static_cast<double>(cells);
    std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(cells * cells));
    auto cell_of = [&](double v) {
      return std::clamp(static_cast<long>(std::floor((v + extent / 2) / cell)), 0L, cells - 1);
    };
    const long long max_attempts = 1000 * std::max(count, 1LL);
    long long attempts = 0;
    buildings.reserve(static_cast<std::size_t>(count));
    while (static_cast<long long>(buildings.size()) < count) {
      if (++attempts > max_attempts)
        throw GeometryError("synthesize_scene: cannot place " + std::to_string(count) +
                            " disjoint buildings; alpha is too close to the packing limit");
      const double cx = (static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5) * span;
      const double cy = (static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5) * span;
      const long gx = cell_of(cx), gy = cell_of(cy);
      bool clash = false;
      for (long y = std::max(0L, gy - 1); y <= std::min(cells - 1, gy + 1) && !clash; ++y)
        for (long x = std::max(0L, gx - 1); x <= std::min(cells - 1, gx + 1) && !clash; ++x)
          for (std::size_t k : grid[static_cast<std::size_t>(y * cells + x)])
            if (std::abs(buildings[k].center_x - cx) < width && std::abs(buildings[k].center_y - cy) < width) {
              clash = true;
              break;
            }
      if (clash) continue;
      grid[static_cast<std::size_t>(gy * cells + gx)].push_back(buildings.size());
      buildings.push_back({cx, cy, width, 0.0});
    }
    for (auto& b : buildings) b.height = sample_rayleigh(env.gamma, rng);
  } else {
    if (width >= extent) throw GeometryError("synthesize_scene: extent smaller than a building");
    const auto count = std::llround(env.beta * (extent / 1000.0) * (extent / 1000.0));
    const double span = extent - width;
    buildings.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
      const double cx = (static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5) * span;
      const double cy = (static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5) * span;
      buildings.push_back({cx, cy, width, sample_rayleigh(env.gamma, rng)});
    }
  }
  return Scene(std::move(buildings), extent, seed);
}

}  // namespace a2g
