// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "a2g/error.hpp"
#include "a2g/parallel.hpp"

namespace a2g {

double p_los_baseline(const LinkGeometry& link, const Environment& env) {
  link.validate();
  env.validate();
  const long n = building_count(env, link.d_rx);
  const double dh = link.height_difference();
  double p = 1.0;
  for (long i = 1; i <= n; ++i) {
    const double h = link.h_tx - (static_cast<double>(i) - 0.5) / static_cast<double>(n) * dh;
    p *= height_cdf(env.gamma, h);
  }
  return p;
}

double p_los(const LinkGeometry& link, const Environment& env, const FresnelSpec& spec,
             const AnalyticOptions& opts) {
  link.validate();
  env.validate();
  spec.validate();
  const long n = building_count(env, link.d_rx);
  if (n == 0) return 1.0;

  const double width = opts.width_override.value_or(mean_width(env));
  if (!(width >= 0.0)) throw DomainError("p_los: building width must be non-negative");

  const double d = link.d_rx;
  const double dh = link.height_difference();
  const double zone = std::sqrt(spec.order * spec.wavelength * d) / std::hypot(d, dh);
  const double spacing = d / static_cast<double>(n);

  double p = 1.0;
  for (long i = 1; i <= n; ++i) {
    const double d_i = (static_cast<double>(i) - 0.5) * spacing + width / 2.0;
    // The last building may sit past the receiver; the zone is closed there.
    const double to_terminal = std::max(0.0, std::min(d_i, d - d_i));
    const double allowed = link.h_tx - d_i * dh / d - zone * to_terminal;
    if (allowed <= 0.0) return 0.0;
    p *= height_cdf(env.gamma, allowed);
  }
  return p;
}

std::vector<double> p_los_curve(double h_tx, double h_rx, const Environment& env,
                                const FresnelSpec& spec, std::span<const double> d_grid,
                                const AnalyticOptions& opts) {
  std::vector<double> out(d_grid.size());
  parallel_for(d_grid.size(), [&](std::size_t k) {
    if (d_grid[k] == 0.0) {
      // receiver directly below the transmitter
      LinkGeometry{h_tx, h_rx, 1.0}.validate();
      out[k] = 1.0;
      return;
    }
    out[k] = p_los(LinkGeometry{h_tx, h_rx, d_grid[k]}, env, spec, opts);
  });
  return out;
}

std::optional<double> max_comm_distance(double h_tx, double h_rx, const Environment& env,
                                        const FresnelSpec& spec, double threshold,
                                        const AnalyticOptions& opts, const McdOptions& mcd) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DomainError("max_comm_distance: threshold must lie in (0, 1)");
  if (!(mcd.scan_pitch > 0.0) || !(mcd.resolution > 0.0) || !(mcd.max_range > 0.0))
    throw DomainError("max_comm_distance: pitch, resolution and range must be positive");

  auto below = [&](double d) {
    return p_los(LinkGeometry{h_tx, h_rx, d}, env, spec, opts) < threshold;
  };

  double lo = 0.0;
  const auto steps = static_cast<long>(std::floor(mcd.max_range / mcd.scan_pitch));
  for (long k = 1; k <= steps; ++k) {
    const double d = static_cast<double>(k) * mcd.scan_pitch;
    if (!below(d)) {
      lo = d;
      continue;
    }
    double hi = d;
    while (hi - lo > mcd.resolution) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) ? hi : lo) = mid;
    }
    return lo;
  }
  return std::nullopt;
}

std::vector<double> p_los_vs_elevation(const Environment& env, const FresnelSpec& spec,
                                       double h_tx, double h_rx,
                                       std::span<const double> angles,
                                       const AnalyticOptions& opts) {
  const double dh = h_tx - h_rx;
  if (!(dh > 0.0)) throw DomainError("p_los_vs_elevation: h_tx must exceed h_rx");
  std::vector<double> d(angles.size());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double theta = angles[k];
    if (!(theta > 0.0 && theta < std::numbers::pi / 2))
      throw DomainError("p_los_vs_elevation: angle outside (0, pi/2)");
    d[k] = dh / std::tan(theta);
  }
  return p_los_curve(h_tx, h_rx, env, spec, d, opts);
}

std::optional<double> threshold_crossing(std::span<const double> xs, std::span<const double> ps,
                                         double threshold) {
  if (xs.size() != ps.size() || xs.empty())
    throw DomainError("threshold_crossing: grids must be non-empty and of equal size");
  std::size_t k = xs.size();
  while (k > 0 && ps[k - 1] >= threshold) --k;
  if (k == xs.size()) return std::nullopt;
  if (k == 0) return xs.front();
  // ps[k-1] < threshold <= ps[k]
  const double t = (threshold - ps[k - 1]) / (ps[k] - ps[k - 1]);
  return xs[k - 1] + t * (xs[k] - xs[k - 1]);
}

}  // namespace a2g
