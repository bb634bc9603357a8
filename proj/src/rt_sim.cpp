// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/rt_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "a2g/error.hpp"
#include "a2g/parallel.hpp"

namespace a2g {

std::optional<Hit> ray_triangle_intersect(const Ray& ray, const Triangle& tri) {
  const Vec3 e1 = tri.v1 - tri.v0;
  const Vec3 e2 = tri.v2 - tri.v0;
  const Vec3 k = cross(ray.direction, e2);
  const double det = dot(k, e1);
  if (std::abs(det) <= kParallelEpsilon) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 e0 = ray.origin - tri.v0;
  const double u = dot(k, e0) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = cross(e0, e1);
  const double v = dot(q, ray.direction) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double s = dot(q, e2) * inv;
  if (!(s > 0.0)) return std::nullopt;
  return Hit{s, u, v};
}

namespace {

struct Box {
  Vec3 lo, hi;
};

Box box_of(const Building& b) {
  return {{b.center_x - b.width / 2, b.center_y - b.width / 2, 0.0},
          {b.center_x + b.width / 2, b.center_y + b.width / 2, b.height}};
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y &&
         a.lo.z <= b.hi.z && b.lo.z <= a.hi.z;
}

Box segment_box(const Vec3& a, const Vec3& b) {
  return {{std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)},
          {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)}};
}

bool segment_blocked(const Scene& scene, const Vec3& tx, const Vec3& rx) {
  const Vec3 delta = rx - tx;
  const double length = norm(delta);
  const Ray ray{tx, (1.0 / length) * delta};
  const Box seg = segment_box(tx, rx);
  const auto& buildings = scene.buildings();
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    if (!boxes_overlap(seg, box_of(buildings[i]))) continue;
    for (const Triangle& tri : scene.building_triangles(i)) {
      const auto hit = ray_triangle_intersect(ray, tri);
      if (hit && hit->s < length) return true;
    }
  }
  return false;
}

// Closest point of triangle abc to p (Ericson, Real-Time Collision
// Detection, 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + (vb * denom) * ab + (vc * denom) * ac;
}

// Affine map taking the Fresnel ellipsoid of a link to the unit sphere.
struct EllipsoidFrame {
  Vec3 center;
  Vec3 axis[3];   // unit axes: along the link, then two transverse
  double semi[3];

  Vec3 to_unit(const Vec3& p) const {
    const Vec3 r = p - center;
    return {dot(r, axis[0]) / semi[0], dot(r, axis[1]) / semi[1], dot(r, axis[2]) / semi[2]};
  }

  Box bounds() const {
    Vec3 half;
    double* h[3] = {&half.x, &half.y, &half.z};
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double c = (k == 0 ? axis[a].x : k == 1 ? axis[a].y : axis[a].z) * semi[a];
        s += c * c;
      }
      *h[k] = std::sqrt(s);
    }
    return {center - half, center + half};
  }
};

EllipsoidFrame fresnel_frame(const Vec3& tx, const Vec3& rx, const FresnelSpec& spec) {
  const Vec3 delta = rx - tx;
  const double length = norm(delta);
  const FresnelAxes ax = fresnel_axes(spec, length);
  const Vec3 u = (1.0 / length) * delta;
  // Any unit vector orthogonal to u; pick the helper least aligned with it.
  const Vec3 helper = std::abs(u.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 v = normalized(cross(u, helper));
  const Vec3 w = cross(u, v);
  return {0.5 * (tx + rx), {u, v, w}, {ax.y_semi, ax.x_semi, ax.z_semi}};
}

}  // namespace

bool los_blocked_geometric(const Scene& scene, const Vec3& tx, const Vec3& rx) {
  if (tx == rx) throw DomainError("los_blocked_geometric: tx and rx coincide");
  return segment_blocked(scene, tx, rx);
}

bool los_blocked_fresnel(const Scene& scene, const Vec3& tx, const Vec3& rx,
                         const FresnelSpec& spec) {
  if (tx == rx) throw DomainError("los_blocked_fresnel: tx and rx coincide");
  spec.validate();
  if (spec.wavelength == 0.0) return segment_blocked(scene, tx, rx);

  const EllipsoidFrame frame = fresnel_frame(tx, rx, spec);
  const Box bounds = frame.bounds();
  const auto& buildings = scene.buildings();
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    if (!boxes_overlap(bounds, box_of(buildings[i]))) continue;
    for (const Triangle& tri : scene.building_triangles(i)) {
      const Vec3 a = frame.to_unit(tri.v0), b = frame.to_unit(tri.v1), c = frame.to_unit(tri.v2);
      const Vec3 q = closest_point_on_triangle(Vec3{}, a, b, c);
      if (dot(q, q) < 1.0) return true;
    }
  }
  return false;
}

namespace {

bool inside_footprint(const Scene& scene, double x, double y, double z) {
  for (const auto& b : scene.buildings())
    if (z < b.height && std::abs(x - b.center_x) < b.width / 2 && std::abs(y - b.center_y) < b.width / 2)
      return true;
  return false;
}

}  // namespace

std::vector<SimPoint> estimate_p_los(const Environment& env, const FresnelSpec& spec, double h_tx,
                                     double h_rx, std::span<const double> d_grid, int realizations,
                                     int links_per_ring, std::uint64_t seed, const SimOptions& opts) {
  env.validate();
  spec.validate();
  if (realizations < 1) throw DomainError("estimate_p_los: realizations must be >= 1");
  if (links_per_ring < 1) throw DomainError("estimate_p_los: links_per_ring must be >= 1");
  if (d_grid.empty()) throw DomainError("estimate_p_los: empty distance grid");
  if (!(h_tx > 0.0) || !(h_rx >= 0.0)) throw DomainError("estimate_p_los: invalid heights");
  double d_max = 0.0;
  for (double d : d_grid) {
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("estimate_p_los: distances must be positive");
    d_max = std::max(d_max, d);
  }
  const double extent = opts.extent > 0.0 ? opts.extent : 2.0 * d_max + 100.0;
  if (d_max > extent / 2.0)
    throw DomainError("estimate_p_los: distance exceeds half the scene extent");

  const std::size_t rings = d_grid.size();
  std::vector<long> clear(static_cast<std::size_t>(realizations) * rings, 0);
  std::vector<long> total(clear.size(), 0);
  parallel_for(static_cast<std::size_t>(realizations), [&](std::size_t r) {
    const std::uint64_t scene_seed = derive_seed(seed, r);
    const Scene scene = synthesize_scene(env, extent, scene_seed, opts.layout);
    std::mt19937_64 rng(derive_seed(scene_seed, 1));
    const Vec3 tx{0.0, 0.0, h_tx};
    for (std::size_t k = 0; k < rings; ++k) {
      const double step = 2.0 * std::numbers::pi / links_per_ring;
      const double offset = static_cast<double>(rng() >> 11) * 0x1p-53 * step;
      for (int j = 0; j < links_per_ring; ++j) {
        const double phi = offset + j * step;
        const Vec3 rx{d_grid[k] * std::cos(phi), d_grid[k] * std::sin(phi), h_rx};
        if (inside_footprint(scene, rx.x, rx.y, rx.z)) continue;
        const bool blocked = opts.fresnel ? los_blocked_fresnel(scene, tx, rx, spec)
                                          : los_blocked_geometric(scene, tx, rx);
        const std::size_t slot = r * rings + k;
        ++total[slot];
        if (!blocked) ++clear[slot];
      }
    }
  });

  std::vector<SimPoint> out(rings);
  for (std::size_t k = 0; k < rings; ++k) {
    long c = 0, t = 0;
    for (int r = 0; r < realizations; ++r) {
      c += clear[static_cast<std::size_t>(r) * rings + k];
      t += total[static_cast<std::size_t>(r) * rings + k];
    }
    SimPoint& pt = out[k];
    pt.d = d_grid[k];
    pt.links = t;
    if (t == 0) {
      pt.p = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    pt.p = static_cast<double>(c) / static_cast<double>(t);
    pt.ci_halfwidth = 1.96 * std::sqrt(pt.p * (1.0 - pt.p) / static_cast<double>(t));
  }
  return out;
}

}  // namespace a2g
