// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "a2g/error.hpp"

namespace a2g {

void LinkGeometry::validate() const {
  if (!(h_tx > 0.0)) throw DomainError("link: h_tx must be positive");
  if (!(h_rx >= 0.0)) throw DomainError("link: h_rx must be non-negative");
  if (!(d_rx > 0.0)) throw DomainError("link: d_rx must be positive");
  if (h_tx < h_rx) throw DomainError("link: h_tx must not be below h_rx");
}

void FresnelSpec::validate() const {
  if (!(wavelength >= 0.0) || !std::isfinite(wavelength))
    throw DomainError("fresnel: wavelength must be finite and non-negative");
  if (order < 1) throw DomainError("fresnel: order must be >= 1");
}

double wavelength_from_frequency(double frequency_hz) {
  if (!(frequency_hz > 0.0))
    throw DomainError("frequency must be positive, got " + std::to_string(frequency_hz));
  return kSpeedOfLight / frequency_hz;
}

FresnelAxes fresnel_axes(const FresnelSpec& spec, double d_rx) {
  spec.validate();
  if (!(d_rx > 0.0)) throw DomainError("fresnel_axes: d_rx must be positive");
  const double nld = spec.order * spec.wavelength * d_rx;
  const double transverse = std::sqrt(nld) / 2.0;
  return {transverse, std::sqrt(nld / 4.0 + d_rx * d_rx / 4.0), transverse};
}

double fresnel_radius_at(const FresnelSpec& spec, double d_rx, double d_los) {
  spec.validate();
  if (!(d_rx > 0.0)) throw DomainError("fresnel_radius_at: d_rx must be positive");
  if (!(d_los >= 0.0 && d_los <= d_rx))
    throw DomainError("fresnel_radius_at: d_los outside [0, d_rx]");
  return std::sqrt(spec.order * spec.wavelength * d_rx) * std::min(d_los, d_rx - d_los) / d_rx;
}

double allowed_height(const LinkGeometry& link, const FresnelSpec& spec, double d_los) {
  link.validate();
  const double dh = link.height_difference();
  const double cos_theta = link.d_rx / std::hypot(link.d_rx, dh);
  return link.h_tx - d_los * dh / link.d_rx - fresnel_radius_at(spec, link.d_rx, d_los) * cos_theta;
}

double elevation_angle(const LinkGeometry& link) {
  link.validate();
  return std::atan(link.height_difference() / link.d_rx);
}

}  // namespace a2g
