// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "a2g/environment.hpp"
#include "a2g/geometry.hpp"

namespace a2g {

struct AnalyticOptions {
  /// Replaces the mean building width derived from (alpha, beta). The
  /// building count along the path is unaffected.
  std::optional<double> width_override;
};

/// Classic optical-path model: zero-width buildings, no Fresnel clearance.
double p_los_baseline(const LinkGeometry& link, const Environment& env);

/// LoS probability including building width and Fresnel-zone clearance.
/// A building whose allowed height is negative blocks with certainty.
double p_los(const LinkGeometry& link, const Environment& env,
             const FresnelSpec& spec, const AnalyticOptions& opts = {});

/// p_los over a distance grid, evaluated in parallel, returned in grid order.
/// A zero distance yields 1.
std::vector<double> p_los_curve(double h_tx, double h_rx,
                                const Environment& env,
                                const FresnelSpec& spec,
                                std::span<const double> d_grid,
                                const AnalyticOptions& opts = {});

struct McdOptions {
  double max_range = 20'000.0;  ///< m
  double scan_pitch = 1.0;      ///< m
  double resolution = 0.1;      ///< bisection stops below this bracket, m
};

/// Maximum communication distance: the largest d such that p_los stays at
/// or above `threshold` on [pitch, d]. Located by a scan at `scan_pitch`
/// then bisection of the bracketing step. Returns nullopt when p_los never
/// drops below the threshold within `max_range`.
std::optional<double> max_comm_distance(double h_tx, double h_rx,
                                        const Environment& env,
                                        const FresnelSpec& spec,
                                        double threshold,
                                        const AnalyticOptions& opts = {},
                                        const McdOptions& mcd = {});

/// p_los as a function of elevation angle (radians, each in (0, pi/2)):
/// d_rx = (h_tx - h_rx) / tan(theta).
std::vector<double> p_los_vs_elevation(const Environment& env,
                                       const FresnelSpec& spec, double h_tx,
                                       double h_rx,
                                       std::span<const double> angles,
                                       const AnalyticOptions& opts = {});

/// Smallest x on an ascending grid such that every sample at or beyond it
/// has p >= threshold, linearly interpolated against the preceding sample.
/// Used for elevation-angle thresholds. nullopt if the last sample is below
/// the threshold.
std::optional<double> threshold_crossing(std::span<const double> xs,
                                         std::span<const double> ps,
                                         double threshold);

}  // namespace a2g
