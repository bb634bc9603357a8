// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include "a2g/fit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "a2g/error.hpp"
#include "a2g/parallel.hpp"

namespace a2g {

namespace {

constexpr int kGridD1Max = 600;
constexpr int kGridD2Max = 2000;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view tok, const std::string& what) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("dataset: bad number '" + std::string(tok) + "' for " + what);
  return v;
}

// Analytic model with the P(0) = 1 convention for grids that start at 0.
double analytic_at(double h_tx, double h_rx, double d, const Environment& env,
                   const FresnelSpec& spec) {
  if (d == 0.0) return 1.0;
  return p_los(LinkGeometry{h_tx, h_rx, d}, env, spec);
}

// Exhaustive (d1, d2) search on the integer grid. For a fixed d2 the SSE is
// a quadratic in d1 over the samples beyond d1, so prefix/suffix sums make
// each d1 an O(1) evaluation. Samples must be sorted by d.
ApproxParams grid_search(std::span<const double> d, std::span<const double> p) {
  const std::size_t k = d.size();
  std::vector<double> head(k + 1, 0.0);  // sum (1 - p)^2 over the first m samples
  for (std::size_t i = 0; i < k; ++i) head[i + 1] = head[i] + (1.0 - p[i]) * (1.0 - p[i]);

  std::vector<double> saa(k + 1), sab(k + 1), sbb(k + 1);
  double best = std::numeric_limits<double>::infinity();
  ApproxParams best_params{1.0, 1.0};
  for (int d2 = 1; d2 <= kGridD2Max; ++d2) {
    saa[k] = sab[k] = sbb[k] = 0.0;
    for (std::size_t i = k; i-- > 0;) {
      const double e = std::exp(-d[i] / d2);
      const double a = d[i] > 0.0 ? (1.0 - e) / d[i] : 0.0;
      const double b = e - p[i];
      saa[i] = saa[i + 1] + a * a;
      sab[i] = sab[i + 1] + a * b;
      sbb[i] = sbb[i + 1] + b * b;
    }
    std::size_t m = 0;
    for (int d1 = 1; d1 <= kGridD1Max; ++d1) {
      while (m < k && d[m] <= d1) ++m;
      const double x = d1;
      const double sse = head[m] + x * x * saa[m] + 2.0 * x * sab[m] + sbb[m];
      if (sse < best) {
        best = sse;
        best_params = {x, static_cast<double>(d2)};
      }
    }
  }
  return best_params;
}


// Levenberg-Marquardt polish of a pattern-search result. Returns the input
// unchanged unless the SSE strictly drops.
ApproxParams lm_polish(std::span<const double> d, std::span<const double> p, ApproxParams x,
                       double& sse) {
  double mu = 1e-3;
  for (int it = 0; it < 200; ++it) {
    double jtj[2][2] = {{0, 0}, {0, 0}}, jtr[2] = {0, 0};
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] <= x.d1) continue;  // plateau: residual independent of both parameters
      const double e = std::exp(-d[i] / x.d2);
      const double r = x.d1 / d[i] + e * (1.0 - x.d1 / d[i]) - p[i];
      const double g1 = (1.0 - e) / d[i];
      const double g2 = (1.0 - x.d1 / d[i]) * e * d[i] / (x.d2 * x.d2);
      jtj[0][0] += g1 * g1;
      jtj[0][1] += g1 * g2;
      jtj[1][1] += g2 * g2;
      jtr[0] += g1 * r;
      jtr[1] += g2 * r;
    }
    bool accepted = false;
    while (mu < 1e12) {
      const double a = jtj[0][0] * (1.0 + mu), b = jtj[0][1], c = jtj[1][1] * (1.0 + mu);
      const double det = a * c - b * b;
      if (!(det > 0.0)) {
        mu *= 10.0;
        continue;
      }
      const ApproxParams cand{x.d1 - (c * jtr[0] - b * jtr[1]) / det,
                              x.d2 - (a * jtr[1] - b * jtr[0]) / det};
      if (cand.d1 > 0.0 && cand.d2 > 0.0) {
        const double s = approx_sse(d, p, cand);
        if (s < sse) {
          x = cand;
          sse = s;
          mu = std::max(mu / 10.0, 1e-12);
          accepted = true;
          break;
        }
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }
  return x;
}

}  // namespace

double approx_sse(std::span<const double> d, std::span<const double> p, const ApproxParams& params) {
  double sse = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = p_los_approx(d[i], params) - p[i];
    sse += r * r;
  }
  return sse;
}

CurveFit fit_approx_curve(std::span<const double> d_in, std::span<const double> p_in) {
  if (d_in.size() != p_in.size() || d_in.empty())
    throw DomainError("fit_approx_curve: need equally sized, non-empty samples");
  std::vector<std::size_t> order(d_in.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d_in[a] < d_in[b] || (d_in[a] == d_in[b] && p_in[a] < p_in[b]);
  });
  std::vector<double> d(order.size()), p(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    d[i] = d_in[order[i]];
    p[i] = p_in[order[i]];
    if (!(d[i] >= 0.0)) throw DomainError("fit_approx_curve: negative distance");
  }

  ApproxParams cur = grid_search(d, p);
  double cur_sse = approx_sse(d, p, cur);
  // Compass moves plus diagonals, so narrow valleys oblique to the axes
  // do not stall the search.
  constexpr double kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (double step : {1.0, 0.1, 0.01}) {
    for (int guard = 0; guard < 1'000'000; ++guard) {
      bool moved = false;
      for (const auto& m : kMoves) {
        const ApproxParams cand{cur.d1 + m[0] * step, cur.d2 + m[1] * step};
        if (!(cand.d1 > 0.0) || !(cand.d2 > 0.0)) continue;
        const double sse = approx_sse(d, p, cand);
        if (sse < cur_sse) {
          cur = cand;
          cur_sse = sse;
          moved = true;
        }
      }
      if (!moved) break;
    }
  }
  cur = lm_polish(d, p, cur, cur_sse);
  return {cur, cur_sse / static_cast<double>(d.size())};
}

std::vector<double> FitDataset::delta_h() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.delta_h);
  return out;
}

std::vector<double> FitDataset::targets(ApproxTarget target) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(target == ApproxTarget::D1 ? r.d1 : r.d2);
  return out;
}

std::string FitDataset::to_csv() const {
  std::string out = "# alpha=" + fmt(env.alpha) + " beta=" + fmt(env.beta) +
                    " gamma=" + fmt(env.gamma) + " lambda=" + fmt(spec.wavelength) +
                    " order=" + std::to_string(spec.order) + " h_rx=" + fmt(h_rx) + "\n";
  out += "delta_h,d1,d2\n";
  for (const auto& r : records) out += fmt(r.delta_h) + ',' + fmt(r.d1) + ',' + fmt(r.d2) + '\n';
  return out;
}

FitDataset FitDataset::from_csv(std::string_view text) {
  FitDataset ds;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream kv(line.substr(1));
      std::string item;
      while (kv >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = item.substr(0, eq);
        const std::string_view val = std::string_view(item).substr(eq + 1);
        if (key == "alpha") ds.env.alpha = parse_number(val, key);
        else if (key == "beta") ds.env.beta = parse_number(val, key);
        else if (key == "gamma") ds.env.gamma = parse_number(val, key);
        else if (key == "lambda") ds.spec.wavelength = parse_number(val, key);
        else if (key == "order") ds.spec.order = static_cast<int>(parse_number(val, key));
        else if (key == "h_rx") ds.h_rx = parse_number(val, key);
      }
      continue;
    }
    if (!header) {
      if (line != "delta_h,d1,d2") throw ParseError("dataset: expected header delta_h,d1,d2");
      header = true;
      continue;
    }
    std::string_view rest = line;
    double v[3];
    for (int c = 0; c < 3; ++c) {
      const auto comma = rest.find(',');
      if ((c < 2) == (comma == std::string_view::npos))
        throw ParseError("dataset: expected three columns in '" + line + "'");
      v[c] = parse_number(rest.substr(0, comma), "column " + std::to_string(c + 1));
      rest = c < 2 ? rest.substr(comma + 1) : std::string_view{};
    }
    if (!ds.records.empty() && !(v[0] > ds.records.back().delta_h))
      throw ParseError("dataset: delta_h must be strictly increasing");
    if (!(v[1] > 0.0 && v[2] > 0.0)) throw ParseError("dataset: d1 and d2 must be positive");
    ds.records.push_back({v[0], v[1], v[2], 0.0});
  }
  if (!header) throw ParseError("dataset: missing header");
  return ds;
}

DatasetBuild build_dataset(const Environment& env, const FresnelSpec& spec, double h_rx,
                           std::span<const double> delta_h_grid, std::span<const double> d_grid) {
  env.validate();
  spec.validate();
  if (delta_h_grid.empty() || d_grid.empty())
    throw DomainError("build_dataset: grids must be non-empty");
  std::vector<double> dhs(delta_h_grid.begin(), delta_h_grid.end());
  std::sort(dhs.begin(), dhs.end());
  if (std::adjacent_find(dhs.begin(), dhs.end()) != dhs.end())
    throw DomainError("build_dataset: duplicate delta_h values");
  for (double d : d_grid)
    if (!(d >= 0.0)) throw DomainError("build_dataset: negative distance in grid");

  struct Slot {
    bool rejected = false;
    FitRecord record;
  };
  std::vector<Slot> slots(dhs.size());
  parallel_for(dhs.size(), [&](std::size_t k) {
    const double dh = dhs[k];
    if (!(dh >= 0.0)) throw DomainError("build_dataset: negative delta_h");
    std::vector<double> p(d_grid.size());
    for (std::size_t i = 0; i < d_grid.size(); ++i)
      p[i] = analytic_at(h_rx + dh, h_rx, d_grid[i], env, spec);
    if (std::all_of(p.begin(), p.end(), [](double v) { return v == 1.0; })) {
      slots[k].rejected = true;
      slots[k].record.delta_h = dh;
      return;
    }
    const CurveFit fit = fit_approx_curve(d_grid, p);
    slots[k].record = {dh, fit.params.d1, fit.params.d2, fit.mse};
  });

  DatasetBuild out;
  out.dataset.env = env;
  out.dataset.spec = spec;
  out.dataset.h_rx = h_rx;
  for (const auto& s : slots) {
    if (s.rejected)
      out.rejected.push_back({s.record.delta_h, "analytic curve equals 1 on the whole distance grid"});
    else
      out.dataset.records.push_back(s.record);
  }
  return out;
}

std::pair<FitDataset, FitDataset> split_dataset(const FitDataset& ds, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n < 10) throw DomainError("split_dataset: need at least 10 records, got " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, 0));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng() % (i + 1)]);

  const std::size_t n_train = (7 * n + 9) / 10;
  std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::sort(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());

  FitDataset train_set{{}, ds.env, ds.spec, ds.h_rx};
  FitDataset validate_set{{}, ds.env, ds.spec, ds.h_rx};
  for (std::size_t i = 0; i < n; ++i)
    (i < n_train ? train_set : validate_set).records.push_back(ds.records[idx[i]]);
  return {std::move(train_set), std::move(validate_set)};
}

void TrainConfig::validate() const {
  if (hidden < 1) throw DomainError("train: hidden must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw DomainError("train: learning_rate must be positive");
  if (epochs < 1) throw DomainError("train: epochs must be >= 1");
  if (!(eta >= 0.0)) throw DomainError("train: eta must be non-negative");
  if (!(lr_growth >= 1.0)) throw DomainError("train: lr_growth must be >= 1");
}

CostGradient cost_and_gradient(const Mlp& mlp, std::span<const double> x, std::span<const double> y,
                               double eta) {
  if (x.size() != y.size() || x.empty())
    throw DomainError("cost_and_gradient: need equally sized, non-empty samples");
  const std::size_t hidden = mlp.hidden();
  const auto iw = mlp.input_weights();
  const auto ib = mlp.input_biases();
  const auto ow = mlp.output_weights();
  const double inv_n = 1.0 / static_cast<double>(x.size());

  CostGradient cg;
  cg.gradient.assign(mlp.parameters().size(), 0.0);
  double* g_iw = cg.gradient.data();
  double* g_ib = g_iw + hidden;
  double* g_ow = g_ib + hidden;
  double& g_ob = cg.gradient[3 * hidden];

  std::vector<double> act(hidden);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double out = mlp.output_bias();
    for (std::size_t j = 0; j < hidden; ++j) {
      act[j] = 1.0 / (1.0 + std::exp(-(iw[j] * x[n] + ib[j])));
      out += ow[j] * act[j];
    }
    const double err = out - y[n];
    cg.cost += err * err * inv_n;
    const double delta = 2.0 * err * inv_n;
    g_ob += delta;
    for (std::size_t j = 0; j < hidden; ++j) {
      g_ow[j] += delta * act[j];
      const double back = delta * ow[j] * act[j] * (1.0 - act[j]);
      g_iw[j] += back * x[n];
      g_ib[j] += back;
    }
  }
  for (std::size_t j = 0; j < hidden; ++j) {
    cg.cost += 0.5 * eta * (iw[j] * iw[j] + ow[j] * ow[j]);
    g_iw[j] += eta * iw[j];
    g_ow[j] += eta * ow[j];
  }
  return cg;
}

double rmse(const Mlp& mlp, const FitDataset& ds, ApproxTarget target) {
  if (ds.records.empty()) throw DomainError("rmse: empty dataset");
  double sum = 0.0;
  for (const auto& r : ds.records) {
    const double e = mlp.forward(r.delta_h) - (target == ApproxTarget::D1 ? r.d1 : r.d2);
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(ds.records.size()));
}

TrainResult train(const FitDataset& train_set, const FitDataset& validate_set, ApproxTarget target,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.records.empty()) throw DomainError("train: empty training set");

  const auto xs = train_set.delta_h();
  const auto ys = train_set.targets(target);
  auto range_of = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return Mlp::Range{*lo, *hi > *lo ? *hi : *lo + 1.0};
  };
  Mlp mlp(cfg.hidden, range_of(xs), range_of(ys));

  std::mt19937_64 rng(derive_seed(cfg.seed, 1));
  for (double& w : mlp.parameters())
    w = static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5;

  std::vector<double> xn(xs.size()), yn(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xn[i] = mlp.input_norm().scale(xs[i]);
    yn[i] = mlp.output_norm().scale(ys[i]);
  }

  const FitDataset& select_set = validate_set.records.empty() ? train_set : validate_set;
  TrainResult best{mlp, {}};
  double best_score = rmse(mlp, select_set, target);

  CostGradient cur = cost_and_gradient(mlp, xn, yn, cfg.eta);
  if (!std::isfinite(cur.cost)) throw FitError("train: initial cost is not finite");
  double lr = cfg.learning_rate;
  TrainReport report;
  report.cost_history.reserve(static_cast<std::size_t>(cfg.epochs));

  Mlp cand = mlp;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    auto p = cand.parameters();
    const auto base = mlp.parameters();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = base[i] - lr * cur.gradient[i];
    CostGradient next = cost_and_gradient(cand, xn, yn, cfg.eta);
    if (!std::isfinite(next.cost))
      throw FitError("train: cost diverged at epoch " + std::to_string(epoch) +
                     "; learning_rate " + fmt(cfg.learning_rate) + " is too large");
    if (next.cost > cur.cost) {
      lr *= 0.5;
    } else {
      std::swap(mlp, cand);
      cur = std::move(next);
      lr *= cfg.lr_growth;
    }
    report.cost_history.push_back(cur.cost);

    const double score = rmse(mlp, select_set, target);
    if (score < best_score) {
      best_score = score;
      best.model = mlp;
      report.best_epoch = epoch;
    }
    report.epochs_run = epoch;
  }
  report.final_learning_rate = lr;
  report.train_rmse = rmse(best.model, train_set, target);
  report.validate_rmse = validate_set.records.empty() ? report.train_rmse
                                                      : rmse(best.model, validate_set, target);
  best.report = std::move(report);
  return best;
}

TrainResult train(const FitDataset& ds, ApproxTarget target, const TrainConfig& cfg) {
  auto [train_set, validate_set] = split_dataset(ds, cfg.seed);
  return train(train_set, validate_set, target, cfg);
}

ApproxEvaluation evaluate_approx(const Environment& env, const FresnelSpec& spec, double h_rx,
                                 const ApproxModel& model, std::span<const double> delta_h_grid,
                                 std::span<const double> d_grid) {
  if (delta_h_grid.empty() || d_grid.empty())
    throw DomainError("evaluate_approx: grids must be non-empty");
  ApproxEvaluation eval;
  eval.rows.resize(delta_h_grid.size());
  std::vector<double> abs_sums(delta_h_grid.size());
  parallel_for(delta_h_grid.size(), [&](std::size_t k) {
    const double dh = delta_h_grid[k];
    ApproxRow& row = eval.rows[k];
    row.delta_h = dh;
    row.params = model.params(dh);
    double sq = 0.0, ab = 0.0;
    for (double d : d_grid) {
      const double e = std::abs(p_los_approx(d, row.params) - analytic_at(h_rx + dh, h_rx, d, env, spec));
      sq += e * e;
      ab += e;
      row.max_abs = std::max(row.max_abs, e);
    }
    row.mse = sq / static_cast<double>(d_grid.size());
    abs_sums[k] = ab;
  });
  double sq = 0.0, ab = 0.0;
  for (std::size_t k = 0; k < eval.rows.size(); ++k) {
    sq += eval.rows[k].mse;
    ab += abs_sums[k];
    eval.max_abs = std::max(eval.max_abs, eval.rows[k].max_abs);
  }
  eval.mse = sq / static_cast<double>(eval.rows.size());
  eval.mean_abs = ab / static_cast<double>(eval.rows.size() * d_grid.size());
  return eval;
}

}  // namespace a2g
