// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/environment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "a2g/error.hpp"

namespace a2g {

namespace {

std::string normalize_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == '_' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

void Environment::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("environment: alpha must lie in (0, 1]");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("environment: beta must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("environment: gamma must be positive");
}

ScenarioTable::ScenarioTable(std::vector<ScenarioPreset> presets) : presets_(std::move(presets)) {
  for (const auto& p : presets_) p.env.validate();
}

ScenarioTable ScenarioTable::parse(std::string_view text) {
  std::vector<ScenarioPreset> presets;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    ScenarioPreset p;
    if (!(fields >> p.name)) continue;
    std::string extra;
    if (!(fields >> p.env.alpha >> p.env.beta >> p.env.gamma) || (fields >> extra))
      throw ParseError("scenario table line " + std::to_string(lineno) +
                       ": expected `name alpha beta gamma`");
    try {
      p.env.validate();
    } catch (const DomainError& e) {
      throw ParseError("scenario table line " + std::to_string(lineno) + ": " + e.what());
    }
    presets.push_back(std::move(p));
  }
  return ScenarioTable(std::move(presets));
}

ScenarioTable ScenarioTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<ScenarioPreset> ScenarioTable::find(std::string_view name) const {
  const std::string key = normalize_name(name);
  for (const auto& p : presets_)
    if (normalize_name(p.name) == key) return p;
  for (const auto& p : presets_)
    if (normalize_name(p.name) == key + "urban") return p;
  return std::nullopt;
}

double height_pdf(double gamma, double h) {
  if (!(gamma > 0.0)) throw DomainError("height_pdf: gamma must be positive");
  if (!(h >= 0.0)) throw DomainError("height_pdf: negative height");
  const double g2 = gamma * gamma;
  return h / g2 * std::exp(-h * h / (2.0 * g2));
}

double height_cdf(double gamma, double h) {
  if (!(gamma > 0.0)) throw DomainError("height_cdf: gamma must be positive");
  if (!(h > 0.0)) return 0.0;
  return -std::expm1(-h * h / (2.0 * gamma * gamma));
}

long building_count(const Environment& env, double d_rx) {
  if (!(d_rx >= 0.0)) throw DomainError("building_count: negative distance");
  return static_cast<long>(std::floor(d_rx * std::sqrt(env.alpha * env.beta) / 1000.0));
}

double mean_width(const Environment& env) {
  env.validate();
  return 1000.0 * std::sqrt(env.alpha / env.beta);
}

double building_position(const Environment& env, double d_rx, long i, std::optional<double> width) {
  const long n = building_count(env, d_rx);
  if (n < 1) throw DomainError("building_position: no buildings along the path");
  if (i < 1 || i > n)
    throw DomainError("building_position: index " + std::to_string(i) + " outside [1, " +
                      std::to_string(n) + "]");
  const double w = width.value_or(mean_width(env));
  return (static_cast<double>(i) - 0.5) * d_rx / static_cast<double>(n) + w / 2.0;
}

}  // namespace a2g
