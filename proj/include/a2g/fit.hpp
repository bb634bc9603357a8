// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "a2g/analytic.hpp"
#include "a2g/approx.hpp"

namespace a2g {

struct FitRecord {
  double delta_h = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  /// Mean squared error of the parametric curve against the analytic one.
  double residual_mse = 0.0;
};

/// (delta_h -> d1, d2) training data plus the inputs that produced it.
struct FitDataset {
  std::vector<FitRecord> records;
  Environment env;
  FresnelSpec spec;
  double h_rx = 0.0;

  std::size_t size() const { return records.size(); }
  std::vector<double> delta_h() const;
  std::vector<double> targets(ApproxTarget target) const;

  /// Header `delta_h,d1,d2` preceded by `# alpha=.. beta=.. gamma=..
  /// lambda=.. order=.. h_rx=..` provenance comments.
  std::string to_csv() const;
  static FitDataset from_csv(std::string_view text);
};

struct CurveFit {
  ApproxParams params;
  double mse = 0.0;
};

/// Least-squares fit of the parametric model to samples (d, p): exhaustive
/// search over d1 in [1, 600], d2 in [1, 2000] (1 m steps), then coordinate
/// descent with steps 1, 0.1 and 0.01 m. Result does not depend on sample
/// order.
CurveFit fit_approx_curve(std::span<const double> d, std::span<const double> p);

/// Sum of squared residuals of the parametric model over (d, p).
double approx_sse(std::span<const double> d, std::span<const double> p,
                  const ApproxParams& params);

struct RejectedRecord {
  double delta_h = 0.0;
  std::string reason;
};

struct DatasetBuild {
  FitDataset dataset;
  std::vector<RejectedRecord> rejected;
};

/// For every height difference in `delta_h_grid` (h_tx = h_rx + delta_h),
/// fit the parametric model to the analytic curve over `d_grid`. Curves that
/// never leave 1 are rejected. Fits run in parallel; output follows the
/// sorted grid.
DatasetBuild build_dataset(const Environment& env, const FresnelSpec& spec,
                           double h_rx, std::span<const double> delta_h_grid,
                           std::span<const double> d_grid);

/// Random 70/30 partition (ceil(0.7 N) train records). Needs N >= 10.
/// Both halves keep ascending delta_h order.
std::pair<FitDataset, FitDataset> split_dataset(const FitDataset& ds,
                                                std::uint64_t seed);

struct TrainConfig {
  std::size_t hidden = 4;
  double learning_rate = 0.05;
  int epochs = 20'000;
  double eta = 0.0;  ///< L2 weight penalty (biases are not penalized)
  std::uint64_t seed = 1;
  /// Learning-rate multiplier after an accepted step. A rejected step
  /// (training cost went up) is undone and the rate halved.
  double lr_growth = 1.05;

  void validate() const;
};

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = 0;
  double train_rmse = 0.0;     ///< m, best model
  double validate_rmse = 0.0;  ///< m, best model
  double final_learning_rate = 0.0;
  /// Training cost after every epoch, normalized units.
  std::vector<double> cost_history;
};

struct TrainResult {
  Mlp model;
  TrainReport report;
};

/// Full-batch gradient descent on mean squared error plus (eta/2)|w|^2 in
/// normalized space. Returns the epoch with the lowest validation RMSE.
/// Throws FitError if the cost stops being finite.
TrainResult train(const FitDataset& train_set, const FitDataset& validate_set,
                  ApproxTarget target, const TrainConfig& cfg);

/// Splits `ds` with cfg.seed and trains on the 70% part.
TrainResult train(const FitDataset& ds, ApproxTarget target,
                  const TrainConfig& cfg);

/// Root mean squared prediction error over `ds`, meters.
double rmse(const Mlp& mlp, const FitDataset& ds, ApproxTarget target);

struct CostGradient {
  double cost = 0.0;
  std::vector<double> gradient;  ///< same layout as Mlp::parameters()
};

/// Training cost over normalized samples and its gradient by
/// backpropagation.
CostGradient cost_and_gradient(const Mlp& mlp, std::span<const double> x,
                               std::span<const double> y, double eta);

struct ApproxRow {
  double delta_h = 0.0;
  ApproxParams params;
  double mse = 0.0;
  double max_abs = 0.0;
};

struct ApproxEvaluation {
  double mse = 0.0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::vector<ApproxRow> rows;
};

/// Parametric model driven by `model` against the analytic model over the
/// (delta_h, d) grid.
ApproxEvaluation evaluate_approx(const Environment& env,
                                 const FresnelSpec& spec, double h_rx,
                                 const ApproxModel& model,
                                 std::span<const double> delta_h_grid,
                                 std::span<const double> d_grid);

}  // namespace a2g
