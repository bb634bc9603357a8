// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace a2g {

/// Speed of light in vacuum, m/s (exact SI value).
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// One air-to-ground link: transmitter above receiver, horizontal range d_rx.
struct LinkGeometry {
  double h_tx = 0.0;  ///< transmitter height, m
  double h_rx = 0.0;  ///< receiver height, m
  double d_rx = 0.0;  ///< horizontal TX-RX distance, m

  double height_difference() const { return h_tx - h_rx; }

  /// Throws DomainError unless h_tx > 0, h_rx >= 0, d_rx > 0 and h_tx >= h_rx.
  void validate() const;
};

/// Carrier wavelength and Fresnel-zone order. A wavelength of exactly 0
/// stands for an infinite carrier frequency: the zone collapses onto the
/// direct path.
struct FresnelSpec {
  double wavelength = 0.0;  ///< m
  int order = 1;

  void validate() const;
};

/// Semi-axes of the Fresnel ellipsoid. x and z are the transverse axes, y the
/// axis along the link.
struct FresnelAxes {
  double x_semi = 0.0;
  double y_semi = 0.0;
  double z_semi = 0.0;
};

/// c / f. Throws DomainError for f <= 0.
double wavelength_from_frequency(double frequency_hz);

FresnelAxes fresnel_axes(const FresnelSpec& spec, double d_rx);

/// Transverse radius of the zone at distance d_los from the transmitter,
/// using the piecewise-linear profile that closes at both terminals and
/// peaks at sqrt(n lambda d_rx) / 2 over the midpoint.
double fresnel_radius_at(const FresnelSpec& spec, double d_rx, double d_los);

/// Tallest obstruction at d_los that stays below the Fresnel zone. May be
/// negative; callers decide what that means.
double allowed_height(const LinkGeometry& link, const FresnelSpec& spec,
                      double d_los);

/// atan((h_tx - h_rx) / d_rx), radians.
double elevation_angle(const LinkGeometry& link);

}  // namespace a2g
