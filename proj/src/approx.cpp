// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/approx.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "a2g/error.hpp"

namespace a2g {

double p_los_approx(double d_rx, const ApproxParams& params) {
  if (!(d_rx >= 0.0)) throw DomainError("p_los_approx: negative distance");
  if (!(params.d1 > 0.0 && params.d2 > 0.0))
    throw DomainError("p_los_approx: d1 and d2 must be positive");
  if (d_rx <= params.d1) return 1.0;
  const double decay = std::exp(-d_rx / params.d2);
  return params.d1 / d_rx * (1.0 - decay) + decay;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_doubles(std::istringstream& in, const std::string& tag) {
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw ParseError("network file: bad number '" + tok + "' in " + tag + " line");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Mlp::Mlp(std::size_t hidden, Range input_norm, Range output_norm)
    : hidden_(hidden), params_(3 * hidden + 1, 0.0), input_norm_(input_norm),
      output_norm_(output_norm) {
  check();
}

Mlp::Mlp(std::vector<double> input_weights, std::vector<double> input_biases,
         std::vector<double> output_weights, double output_bias, Range input_norm,
         Range output_norm)
    : hidden_(input_weights.size()), input_norm_(input_norm), output_norm_(output_norm) {
  if (input_biases.size() != hidden_ || output_weights.size() != hidden_)
    throw DomainError("network: tensor sizes disagree");
  params_.reserve(3 * hidden_ + 1);
  params_.insert(params_.end(), input_weights.begin(), input_weights.end());
  params_.insert(params_.end(), input_biases.begin(), input_biases.end());
  params_.insert(params_.end(), output_weights.begin(), output_weights.end());
  params_.push_back(output_bias);
  check();
}

void Mlp::check() const {
  if (hidden_ < 1) throw DomainError("network: needs at least one hidden neuron");
  if (!(input_norm_.max > input_norm_.min) || !(output_norm_.max > output_norm_.min))
    throw DomainError("network: normalization ranges must satisfy max > min");
}

double Mlp::forward_normalized(double x) const {
  const auto iw = input_weights();
  const auto ib = input_biases();
  const auto ow = output_weights();
  double out = output_bias();
  for (std::size_t j = 0; j < hidden_; ++j) out += ow[j] * sigmoid(iw[j] * x + ib[j]);
  return out;
}

double Mlp::forward(double delta_h) const {
  return output_norm_.unscale(forward_normalized(input_norm_.scale(delta_h)));
}

std::string Mlp::to_text() const {
  std::string out;
  auto line = [&](const char* tag, std::span<const double> values) {
    out += tag;
    for (double v : values) out += ' ' + format_double(v);
    out += '\n';
  };
  line("iw", input_weights());
  line("ib", input_biases());
  line("ow", output_weights());
  const double ob = output_bias();
  line("ob", {&ob, 1});
  const double in[] = {input_norm_.min, input_norm_.max};
  const double on[] = {output_norm_.min, output_norm_.max};
  line("inorm", in);
  line("onorm", on);
  return out;
}

Mlp Mlp::from_text(std::string_view text) {
  std::map<std::string, std::vector<double>> tensors;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;
    if (tag != "iw" && tag != "ib" && tag != "ow" && tag != "ob" && tag != "inorm" && tag != "onorm")
      throw ParseError("network file: unknown tag '" + tag + "'");
    if (tensors.count(tag)) throw ParseError("network file: duplicate tag '" + tag + "'");
    tensors[tag] = parse_doubles(fields, tag);
  }
  for (const char* tag : {"iw", "ib", "ow", "ob", "inorm", "onorm"})
    if (!tensors.count(tag)) throw ParseError(std::string("network file: missing tag '") + tag + "'");
  if (tensors["ob"].size() != 1) throw ParseError("network file: ob takes one value");
  if (tensors["inorm"].size() != 2 || tensors["onorm"].size() != 2)
    throw ParseError("network file: inorm and onorm take two values");
  try {
    return Mlp(tensors["iw"], tensors["ib"], tensors["ow"], tensors["ob"][0],
               {tensors["inorm"][0], tensors["inorm"][1]},
               {tensors["onorm"][0], tensors["onorm"][1]});
  } catch (const DomainError& e) {
    throw ParseError(std::string("network file: ") + e.what());
  }
}

void Mlp::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_text();
  if (!out) throw IoError("write failed for " + path.string());
}

Mlp Mlp::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

ApproxParams ApproxModel::params(double delta_h) const {
  return {std::max(kMinApproxDistance, d1.forward(delta_h)),
          std::max(kMinApproxDistance, d2.forward(delta_h))};
}

namespace {

// Columns: Suburban, Urban, Dense urban, High-rise urban.
struct PublishedColumn {
  double w[4];
  double wo;
  double b[4];
  double bo;
};

constexpr PublishedColumn kTable1D1[4] = {
    {{16.2579, -5.5254, 15.4283, 9.6738}, 5.1456, {-3.0018, -1.3995, -0.8644, 1.0262}, -6.6230},
    {{-1.6587, 5.1759, 9.1645, 4.9191}, 3.4246, {-1.2296, -3.2076, -1.7848, -3.1057}, -1.4798},
    {{2.4455, -3.5892, 2.5314, 5.2872}, 3.9771, {-2.7575, -0.8322, -2.7720, -1.3142}, -2.3955},
    {{1.2291, -0.3727, 3.0045, -0.7202}, 2.6658, {-1.7200, -1.1132, -2.1148, -1.0177}, -1.9291},
};

constexpr PublishedColumn kTable1D2[4] = {
    {{6.5142, -10.6197, -3.9213, -0.6352}, 3.1422, {-0.2573, 0.7117, -2.7229, -1.4552}, -2.8366},
    {{-13.0707, 8.4525, -1.3332, 7.2757}, 4.1644, {2.8829, -0.5461, -1.9083, 0.1436}, -7.8225},
    {{4.6853, 0.3355, 5.7374, -7.3002}, 3.1653, {-0.1744, -0.8997, 0.3100, 2.9326}, -6.7432},
    {{-2.3706, 6.1472, 1.0547, 3.8038}, 1.3593, {1.1160, -0.8216, 1.6107, -0.3733}, -2.6654},
};

std::optional<int> table1_column(std::string_view scenario) {
  const ScenarioTable names({{"Suburban", {0.1, 750, 8}},
                             {"Urban", {0.3, 500, 15}},
                             {"DenseUrban", {0.5, 300, 20}},
                             {"HighRiseUrban", {0.5, 300, 50}}});
  const auto hit = names.find(scenario);
  if (!hit) return std::nullopt;
  for (int k = 0; k < 4; ++k)
    if (names.presets()[k].name == hit->name) return k;
  return std::nullopt;
}

}  // namespace

std::optional<TableIEntry> table1_weights(std::string_view scenario, ApproxTarget target) {
  const auto col = table1_column(scenario);
  if (!col) return std::nullopt;
  const auto& c = (target == ApproxTarget::D1 ? kTable1D1 : kTable1D2)[*col];
  return TableIEntry{{c.w[0], c.w[1], c.w[2], c.w[3]}, {c.b[0], c.b[1], c.b[2], c.b[3]}, c.wo, c.bo};
}

Mlp table1_network(std::string_view scenario, ApproxTarget target) {
  const auto entry = table1_weights(scenario, target);
  if (!entry)
    throw DomainError("no published weights for scenario '" + std::string(scenario) + "'");
  return Mlp({entry->hidden_weights.begin(), entry->hidden_weights.end()},
             {entry->hidden_biases.begin(), entry->hidden_biases.end()},
             std::vector<double>(4, entry->output_weight), entry->output_bias, kTable1InputNorm,
             kTable1OutputNorm);
}

ParamsResult params_for_scenario(const ScenarioPreset& scenario, double delta_h,
                                 ParamSource source, const ApproxModel* retrained) {
  if (!(delta_h > 0.0)) throw DomainError("params_for_scenario: delta_h must be positive");
  if (source == ParamSource::Retrained) {
    if (retrained == nullptr)
      throw DomainError("params_for_scenario: retrained source needs a trained model");
    return {retrained->params(delta_h), {}};
  }
  const ApproxModel published{table1_network(scenario.name, ApproxTarget::D1),
                              table1_network(scenario.name, ApproxTarget::D2)};
  return {published.params(delta_h),
          "published weights evaluated under an assumed 0-1000 m min-max normalization; "
          "the original normalization is unknown, values are indicative only"};
}

}  // namespace a2g
