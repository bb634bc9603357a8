// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent scalar re-statements of the closed forms, written without the
// library helpers so that they can serve as oracles.

#pragma once

#include <algorithm>
#include <cmath>

namespace oracle {

inline double rayleigh_cdf(double gamma, double h) {
  return h <= 0.0 ? 0.0 : 1.0 - std::exp(-h * h / (2.0 * gamma * gamma));
}

inline long count(double alpha, double beta, double d) {
  return static_cast<long>(std::floor(d * std::sqrt(alpha * beta) / 1000.0));
}

inline double p_baseline(double h_tx, double h_rx, double d, double alpha, double beta,
                         double gamma) {
  const long n = count(alpha, beta, d);
  double p = 1.0;
  for (long i = 1; i <= n; ++i)
    p *= rayleigh_cdf(gamma, h_tx - (i - 0.5) / n * (h_tx - h_rx));
  return p;
}

// width < 0 selects 1000 sqrt(alpha / beta)
inline double p_full(double h_tx, double h_rx, double d, double alpha, double beta, double gamma,
                     double lambda, double width = -1.0) {
  const long n = count(alpha, beta, d);
  if (n == 0) return 1.0;
  const double w = width < 0.0 ? 1000.0 * std::sqrt(alpha / beta) : width;
  const double dh = h_tx - h_rx;
  double p = 1.0;
  for (long i = 1; i <= n; ++i) {
    const double di = (i - 0.5) * d / n + w / 2.0;
    const double radius = std::sqrt(lambda * d) * std::max(0.0, std::min(di, d - di)) / d;
    const double cos_t = d / std::sqrt(d * d + dh * dh);
    const double h = h_tx - di * dh / d - radius * cos_t;
    if (h <= 0.0) return 0.0;
    p *= rayleigh_cdf(gamma, h);
  }
  return p;
}

inline double p_approx(double d, double d1, double d2) {
  if (d == 0.0) return 1.0;
  const double e = std::exp(-d / d2);
  return std::min(d1 / d, 1.0) * (1.0 - e) + e;
}

}  // namespace oracle
