// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "a2g/environment.hpp"

namespace a2g {

/// Breakpoint (d1) and decay (d2) distances of the parametric model, m.
struct ApproxParams {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// 3GPP TR 38.901 / ITU-R M.2135 terrestrial values.
inline constexpr ApproxParams k3gppParams{18.0, 63.0};
/// 5GCM recommendation.
inline constexpr ApproxParams k5gcmParams{20.0, 66.0};

/// min(d1/d, 1) (1 - exp(-d/d2)) + exp(-d/d2); 1 at d = 0.
double p_los_approx(double d_rx, const ApproxParams& params);

enum class ApproxTarget { D1, D2 };

/// Single-hidden-layer perceptron mapping a height difference to one
/// parametric-model distance. Hidden units are logistic, the output unit is
/// linear; input and output are min-max scaled by the stored ranges.
///
/// Parameters live in one flat vector laid out as
/// [input weights (J) | input biases (J) | output weights (J) | output bias].
class Mlp {
 public:
  struct Range {
    double min = 0.0;
    double max = 1.0;
    double scale(double v) const { return (v - min) / (max - min); }
    double unscale(double v) const { return min + v * (max - min); }
    friend bool operator==(const Range&, const Range&) = default;
  };

  Mlp() = default;
  Mlp(std::size_t hidden, Range input_norm, Range output_norm);
  Mlp(std::vector<double> input_weights, std::vector<double> input_biases,
      std::vector<double> output_weights, double output_bias,
      Range input_norm, Range output_norm);

  std::size_t hidden() const { return hidden_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }

  std::span<const double> input_weights() const { return {params_.data(), hidden_}; }
  std::span<const double> input_biases() const { return {params_.data() + hidden_, hidden_}; }
  std::span<const double> output_weights() const { return {params_.data() + 2 * hidden_, hidden_}; }
  double output_bias() const { return params_[3 * hidden_]; }

  const Range& input_norm() const { return input_norm_; }
  const Range& output_norm() const { return output_norm_; }

  /// Network output in normalized units for a normalized input.
  double forward_normalized(double x) const;
  /// Height difference (m) to distance (m).
  double forward(double delta_h) const;

  /// One `tag v1 v2 ...` line per tensor; tags iw, ib, ow, ob, inorm, onorm.
  std::string to_text() const;
  static Mlp from_text(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Mlp load(const std::filesystem::path& path);

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  void check() const;

  std::size_t hidden_ = 0;
  std::vector<double> params_;
  Range input_norm_;
  Range output_norm_;
};

/// Pair of networks producing (d1, d2) from a height difference.
struct ApproxModel {
  Mlp d1;
  Mlp d2;

  /// Forward both networks; outputs are floored at kMinApproxDistance.
  ApproxParams params(double delta_h) const;
};

inline constexpr double kMinApproxDistance = 1e-3;

/// Published trained weights for one (scenario, target) pair.
struct TableIEntry {
  std::array<double, 4> hidden_weights;
  std::array<double, 4> hidden_biases;
  double output_weight;
  double output_bias;
};

/// Published weights for Suburban, Urban, DenseUrban or HighRiseUrban
/// (names matched like ScenarioTable::find). nullopt for other names.
std::optional<TableIEntry> table1_weights(std::string_view scenario,
                                          ApproxTarget target);

/// Input range used to wrap the published weights: 0..1000 m height
/// difference, 0..1000 m output distance. The original normalization was
/// never published, so outputs are indicative only.
inline constexpr Mlp::Range kTable1InputNorm{0.0, 1000.0};
inline constexpr Mlp::Range kTable1OutputNorm{0.0, 1000.0};

/// The published weights as a network (throws DomainError for unknown
/// scenarios). The single output weight drives every hidden unit.
Mlp table1_network(std::string_view scenario, ApproxTarget target);

enum class ParamSource { Retrained, Table1 };

struct ParamsResult {
  ApproxParams params;
  /// Non-empty when the result carries a caveat (published weights).
  std::string warning;
};

/// Height-dependent (d1, d2) for a scenario. `Retrained` forwards through
/// `retrained` (required); `Table1` through the published weights.
ParamsResult params_for_scenario(const ScenarioPreset& scenario,
                                 double delta_h, ParamSource source,
                                 const ApproxModel* retrained = nullptr);

}  // namespace a2g
