// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace a2g {

/// Statistical built-up area description (ITU-R P.1410 triple).
struct Environment {
  double alpha = 0.0;  ///< fraction of land covered by buildings, (0, 1]
  double beta = 0.0;   ///< mean number of buildings per km^2
  double gamma = 0.0;  ///< Rayleigh scale of building height, m

  void validate() const;
};

struct ScenarioPreset {
  std::string name;
  Environment env;
};

/// Named environments loaded from a plain-text table. Each non-empty line
/// is `name alpha beta gamma`; '#' starts a comment.
class ScenarioTable {
 public:
  ScenarioTable() = default;
  explicit ScenarioTable(std::vector<ScenarioPreset> presets);

  static ScenarioTable parse(std::string_view text);
  static ScenarioTable load(const std::filesystem::path& path);

  const std::vector<ScenarioPreset>& presets() const { return presets_; }

  /// Case-insensitive lookup ignoring '-', '_' and spaces. A key also
  /// matches a preset whose name is the key followed by "urban", so
  /// "high-rise" finds HighRiseUrban and "dense" finds DenseUrban.
  std::optional<ScenarioPreset> find(std::string_view name) const;

 private:
  std::vector<ScenarioPreset> presets_;
};

/// Rayleigh building-height density. Throws DomainError for h < 0.
double height_pdf(double gamma, double h);

/// P(building height < h); 0 for h <= 0.
double height_cdf(double gamma, double h);

/// Mean number of buildings crossed by a path of horizontal length d_rx:
/// floor(d_rx sqrt(alpha beta) / 1000).
long building_count(const Environment& env, double d_rx);

/// Mean building width 1000 sqrt(alpha / beta), m.
double mean_width(const Environment& env);

/// Distance from the transmitter to the i-th (1-based) building along the
/// path. `width` defaults to mean_width(env).
double building_position(const Environment& env, double d_rx, long i,
                         std::optional<double> width = std::nullopt);

}  // namespace a2g
