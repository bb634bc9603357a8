// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0
//
// a2g-los: sweeps, fitting, Monte-Carlo simulation and model comparison for
// air-to-ground line-of-sight probability. Every command writes CSV preceded
// by a `#` header that echoes the parameters needed to regenerate it.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "a2g_los.h"

#ifndef A2G_SCENARIO_FILE
#define A2G_SCENARIO_FILE "scenarios.txt"
#endif

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(a2g_status s) {
  if (s != A2G_OK) throw RuntimeError(a2g_last_error());
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kMinApproxDistance = 1e-3;

// ---------------------------------------------------------------- handles

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ScenariosPtr = std::unique_ptr<a2g_scenarios, Deleter<a2g_scenarios, a2g_scenarios_free>>;
using MlpPtr = std::unique_ptr<a2g_mlp, Deleter<a2g_mlp, a2g_mlp_free>>;
using DatasetPtr = std::unique_ptr<a2g_dataset, Deleter<a2g_dataset, a2g_dataset_free>>;
using ScenePtr = std::unique_ptr<a2g_scene, Deleter<a2g_scene, a2g_scene_free>>;

template <class Fn, class... Args>
std::string fetch_text(Fn fn, Args... args) {
  size_t len = 0;
  check(fn(args..., nullptr, 0, &len));
  std::string text(len + 1, '\0');
  check(fn(args..., text.data(), text.size(), &len));
  text.resize(len);
  return text;
}

// ---------------------------------------------------------------- grids

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("malformed number '" + s + "' in " + what);
  return v;
}

// `start:stop:step`, inclusive of stop when step divides the span, or a
// single value.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (!spec.empty() && spec.back() == ':') parts.emplace_back();
  if (parts.size() == 1) return {parse_number(parts[0], what)};
  if (parts.size() != 3)
    throw UsageError(what + ": expected start:stop:step, got '" + spec + "'");
  const double start = parse_number(parts[0], what);
  const double stop = parse_number(parts[1], what);
  const double step = parse_number(parts[2], what);
  if (!(step > 0.0)) throw UsageError(what + ": step must be positive");
  if (stop < start) throw UsageError(what + ": stop is below start");
  const double span = (stop - start) / step;
  if (span > 1e7) throw UsageError(what + ": grid too large");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

// ---------------------------------------------------------------- output

class Csv {
 public:
  void meta(const std::string& key, const std::string& value) {
    header_ += "# " + key + "=" + value + "\n";
  }
  void meta(const std::string& key, double value) { meta(key, num(value)); }
  void comment(const std::string& line) { footer_ += "# " + line + "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }
  void raw(const std::string& text) { body_ += text; }
  std::string str() const { return header_ + body_ + footer_; }

 private:
  std::string header_;
  std::string body_;
  std::string footer_;
};

// Whole-file write through a sibling temp file so a failed run never leaves
// a truncated output behind.
void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw RuntimeError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw RuntimeError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_atomic(out_path, text);
  }
}

// ---------------------------------------------------------------- shared options

struct EnvOptions {
  std::string scenario;
  std::optional<double> alpha, beta, gamma;
  std::string scenario_file = A2G_SCENARIO_FILE;

  void attach(CLI::App* app) {
    app->add_option("--scenario", scenario, "Preset name (suburban, urban, dense-urban, high-rise)");
    app->add_option("--alpha", alpha, "Built-up land fraction");
    app->add_option("--beta", beta, "Buildings per km^2");
    app->add_option("--gamma", gamma, "Rayleigh height scale, m");
    app->add_option("--scenario-file", scenario_file, "Preset table")->capture_default_str();
  }

  // Resolved environment plus its display name.
  std::pair<a2g_environment, std::string> resolve() const {
    const bool explicit_env = alpha || beta || gamma;
    if (!scenario.empty() && explicit_env)
      throw UsageError("--scenario conflicts with --alpha/--beta/--gamma");
    if (!scenario.empty()) {
      a2g_scenarios* raw = nullptr;
      check(a2g_scenarios_load(scenario_file.c_str(), &raw));
      ScenariosPtr table(raw);
      const char* name = nullptr;
      a2g_environment env{};
      if (a2g_scenarios_find(table.get(), scenario.c_str(), &name, &env) != A2G_OK)
        throw UsageError(a2g_last_error());
      return {env, name};
    }
    if (!(alpha && beta && gamma))
      throw UsageError("give --scenario or all of --alpha, --beta, --gamma");
    return {{*alpha, *beta, *gamma}, "custom"};
  }
};

struct FreqOptions {
  double f_ghz;
  bool f_inf = false;
  int order = 1;

  explicit FreqOptions(double default_ghz) : f_ghz(default_ghz) {}

  void attach(CLI::App* app) {
    auto* f = app->add_option("--f-ghz", f_ghz, "Carrier frequency, GHz")->capture_default_str();
    auto* inf = app->add_flag("--f-inf", f_inf, "Infinite frequency (no Fresnel clearance)");
    f->excludes(inf);
    app->add_option("--order", order, "Fresnel zone order")->capture_default_str();
  }

  a2g_fresnel resolve() const {
    a2g_fresnel spec{0.0, order};
    if (!f_inf) check(a2g_wavelength_from_frequency(f_ghz * 1e9, &spec.wavelength));
    return spec;
  }

  void echo(Csv& csv, const a2g_fresnel& spec) const {
    csv.meta("f_ghz", f_inf ? std::string("inf") : num(f_ghz));
    csv.meta("lambda_m", spec.wavelength);
    csv.meta("fresnel_order", std::to_string(order));
  }
};

void echo_env(Csv& csv, const a2g_environment& env, const std::string& name) {
  csv.meta("scenario", name);
  csv.meta("alpha", env.alpha);
  csv.meta("beta", env.beta);
  csv.meta("gamma", env.gamma);
}

void start_header(Csv& csv, const std::string& command) {
  csv.meta("tool", "a2g-los");
  csv.meta("version", a2g_version());
  csv.meta("command", command);
}

a2g_layout parse_layout(const std::string& s) {
  if (s == "grid") return A2G_LAYOUT_GRID;
  if (s == "uniform") return A2G_LAYOUT_UNIFORM;
  if (s == "uniform-disjoint") return A2G_LAYOUT_UNIFORM_DISJOINT;
  throw UsageError("unknown layout '" + s + "'");
}

// Last grid distance of the leading run with P >= 0.999; nan if none.
double breakpoint(const std::vector<double>& d, const std::vector<double>& p) {
  double last = std::nan("");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(p[i] >= 0.999)) break;
    last = d[i];
  }
  return last;
}

// ---------------------------------------------------------------- training

struct TrainOptions {
  std::string dh_grid = "0:1000:10";
  std::string d_grid = "1:1000:1";
  a2g_train_config cfg = a2g_train_config_default();

  void attach(CLI::App* app) {
    app->add_option("--dh", dh_grid, "Height-difference grid for the dataset")->capture_default_str();
    app->add_option("--fit-d", d_grid, "Distance grid for per-height fits")->capture_default_str();
    app->add_option("--hidden", cfg.hidden, "Hidden neurons")->capture_default_str();
    app->add_option("--lr", cfg.learning_rate, "Initial learning rate")->capture_default_str();
    app->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    app->add_option("--eta", cfg.eta, "L2 weight penalty")->capture_default_str();
    app->add_option("--lr-growth", cfg.lr_growth, "Learning-rate factor after an accepted step")
        ->capture_default_str();
    app->add_option("--train-seed", cfg.seed, "Split and initialization seed")->capture_default_str();
  }

  void echo(Csv& csv) const {
    csv.meta("dh_grid", dh_grid);
    csv.meta("fit_d_grid", d_grid);
    csv.meta("hidden", std::to_string(cfg.hidden));
    csv.meta("learning_rate", cfg.learning_rate);
    csv.meta("epochs", std::to_string(cfg.epochs));
    csv.meta("eta", cfg.eta);
    csv.meta("lr_growth", cfg.lr_growth);
    csv.meta("train_seed", std::to_string(cfg.seed));
  }
};

struct Trained {
  DatasetPtr dataset;
  MlpPtr d1, d2;
  a2g_train_report r1{}, r2{};
};

Trained train_models(const a2g_environment& env, const a2g_fresnel& spec, double h_rx,
                     const TrainOptions& opts) {
  const auto dh = parse_grid(opts.dh_grid, "--dh");
  const auto d = parse_grid(opts.d_grid, "--fit-d");
  Trained t;
  a2g_dataset* ds = nullptr;
  check(a2g_dataset_build(env, spec, h_rx, dh.data(), dh.size(), d.data(), d.size(), &ds));
  t.dataset.reset(ds);
  a2g_mlp* m = nullptr;
  check(a2g_train(ds, A2G_TARGET_D1, &opts.cfg, &m, &t.r1));
  t.d1.reset(m);
  check(a2g_train(ds, A2G_TARGET_D2, &opts.cfg, &m, &t.r2));
  t.d2.reset(m);
  return t;
}

MlpPtr load_mlp(const fs::path& path) {
  a2g_mlp* m = nullptr;
  check(a2g_mlp_load(path.string().c_str(), &m));
  return MlpPtr(m);
}

a2g_approx_params predict(const a2g_mlp* d1, const a2g_mlp* d2, double dh) {
  a2g_approx_params p{};
  check(a2g_mlp_forward(d1, dh, &p.d1));
  check(a2g_mlp_forward(d2, dh, &p.d2));
  p.d1 = std::max(p.d1, kMinApproxDistance);
  p.d2 = std::max(p.d2, kMinApproxDistance);
  return p;
}

// ---------------------------------------------------------------- analytic

struct AnalyticCmd {
  EnvOptions env;
  FreqOptions freq{6.0};
  double h_tx = 0.0;
  double h_rx = 1.5;
  std::string d_grid = "1:1000:1";
  std::optional<double> width;
  bool baseline = false;
  bool elevation = false;
  std::string theta_grid = "1:89:1";
  std::optional<double> mcd;
  double mcd_range = 20000.0;
  std::string out;

  void attach(CLI::App* app) {
    env.attach(app);
    freq.attach(app);
    app->add_option("--htx", h_tx, "Transmitter height, m")->required();
    app->add_option("--hrx", h_rx, "Receiver height, m")->capture_default_str();
    app->add_option("--d", d_grid, "Distance grid start:stop:step, m")->capture_default_str();
    app->add_option("--width", width, "Override the mean building width, m");
    app->add_flag("--baseline", baseline, "Add the clearance-free reference column");
    app->add_flag("--elevation", elevation, "Sweep the elevation angle instead of distance");
    app->add_option("--theta-deg", theta_grid, "Elevation grid, degrees")->capture_default_str();
    app->add_option("--mcd", mcd, "Append the threshold crossing for this probability");
    app->add_option("--mcd-range", mcd_range, "Search range for the crossing, m")
        ->capture_default_str();
    app->add_option("--out", out, "Output file (default stdout)");
  }

  void run() const {
    const auto [e, name] = env.resolve();
    const auto spec = freq.resolve();
    const double* w = width ? &*width : nullptr;
    Csv csv;
    start_header(csv, "analytic");
    echo_env(csv, e, name);
    freq.echo(csv, spec);
    csv.meta("htx", h_tx);
    csv.meta("hrx", h_rx);
    csv.meta("width", width ? num(*width) : std::string("mean"));

    if (elevation) {
      if (baseline) throw UsageError("--baseline applies to distance sweeps only");
      const auto theta = parse_grid(theta_grid, "--theta-deg");
      csv.meta("theta_deg_grid", theta_grid);
      std::vector<double> rad(theta.size());
      for (std::size_t i = 0; i < theta.size(); ++i) rad[i] = theta[i] * kDeg;
      std::vector<double> p(theta.size());
      check(a2g_p_los_vs_elevation(e, spec, h_tx, h_rx, w, rad.data(), rad.size(), p.data()));
      csv.row({"theta_deg", "p_los"});
      for (std::size_t i = 0; i < theta.size(); ++i) csv.row({num(theta[i]), num(p[i])});
      if (mcd) {
        double x = 0.0;
        const auto s = a2g_threshold_crossing(theta.data(), p.data(), p.size(), *mcd, &x);
        if (s != A2G_OK && s != A2G_ERR_NO_CROSSING) check(s);
        csv.comment("summary threshold=" + num(*mcd) +
                    " theta_crossing_deg=" + (s == A2G_OK ? num(x) : std::string("none")));
      }
    } else {
      const auto d = parse_grid(d_grid, "--d");
      csv.meta("d_grid", d_grid);
      std::vector<double> p(d.size());
      check(a2g_p_los_curve(h_tx, h_rx, e, spec, w, d.data(), d.size(), p.data()));
      std::vector<double> pb;
      if (baseline) {
        pb.resize(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (d[i] == 0.0) {
            pb[i] = 1.0;
            continue;
          }
          check(a2g_p_los_baseline({h_tx, h_rx, d[i]}, e, &pb[i]));
        }
        csv.row({"d", "p_los", "p_baseline"});
      } else {
        csv.row({"d", "p_los"});
      }
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (baseline)
          csv.row({num(d[i]), num(p[i]), num(pb[i])});
        else
          csv.row({num(d[i]), num(p[i])});
      }
      if (mcd) {
        double x = 0.0;
        const auto s = a2g_max_comm_distance(h_tx, h_rx, e, spec, w, *mcd, mcd_range, &x);
        if (s != A2G_OK && s != A2G_ERR_NO_CROSSING) check(s);
        csv.comment("summary threshold=" + num(*mcd) +
                    " mcd_m=" + (s == A2G_OK ? num(x) : std::string("none")));
      }
    }
    emit(out, csv.str());
  }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
  EnvOptions env;
  FreqOptions freq{6.0};
  double h_rx = 1.5;
  TrainOptions train;
  std::string eval_d = "0:1000:1";
  std::string out_dir;

  void attach(CLI::App* app) {
    env.attach(app);
    freq.attach(app);
    app->add_option("--hrx", h_rx, "Receiver height, m")->capture_default_str();
    train.attach(app);
    app->add_option("--seed", train.cfg.seed, "Alias of --train-seed");
    app->add_option("--eval-d", eval_d, "Distance grid for the final comparison")
        ->capture_default_str();
    app->add_option("--out-dir", out_dir, "Directory for d1.mlp, d2.mlp, dataset.csv, report.csv")
        ->required();
  }

  void run() const {
    const auto [e, name] = env.resolve();
    const auto spec = freq.resolve();
    const auto dh = parse_grid(train.dh_grid, "--dh");
    const auto ed = parse_grid(eval_d, "--eval-d");
    const Trained t = train_models(e, spec, h_rx, train);

    std::vector<double> row_mse(dh.size()), row_max(dh.size());
    a2g_approx_summary summary{};
    check(a2g_evaluate_approx(e, spec, h_rx, t.d1.get(), t.d2.get(), dh.data(), dh.size(),
                              ed.data(), ed.size(), &summary, row_mse.data(), row_max.data()));

    Csv report;
    start_header(report, "fit");
    echo_env(report, e, name);
    freq.echo(report, spec);
    report.meta("hrx", h_rx);
    train.echo(report);
    report.meta("eval_d_grid", eval_d);
    report.row({"delta_h", "fit_d1", "fit_d2", "fit_mse", "pred_d1", "pred_d2", "approx_mse",
                "approx_max_abs"});
    const size_t n_rec = a2g_dataset_size(t.dataset.get());
    size_t rec = 0;
    for (std::size_t i = 0; i < dh.size(); ++i) {
      std::string f1, f2, fm;
      double rdh = 0, d1 = 0, d2 = 0, mse = 0;
      if (rec < n_rec) {
        check(a2g_dataset_record(t.dataset.get(), rec, &rdh, &d1, &d2, &mse));
        if (rdh == dh[i]) {
          f1 = num(d1), f2 = num(d2), fm = num(mse);
          ++rec;
        }
      }
      const auto p = predict(t.d1.get(), t.d2.get(), dh[i]);
      report.row({num(dh[i]), f1, f2, fm, num(p.d1), num(p.d2), num(row_mse[i]), num(row_max[i])});
    }
    for (size_t i = 0; i < a2g_dataset_rejected_count(t.dataset.get()); ++i) {
      double rdh = 0;
      const char* reason = nullptr;
      check(a2g_dataset_rejected(t.dataset.get(), i, &rdh, &reason));
      report.comment("rejected delta_h=" + num(rdh) + " reason=" + reason);
    }
    report.comment("summary target=d1 train_rmse=" + num(t.r1.train_rmse) +
                   " validate_rmse=" + num(t.r1.validate_rmse) +
                   " best_epoch=" + std::to_string(t.r1.best_epoch));
    report.comment("summary target=d2 train_rmse=" + num(t.r2.train_rmse) +
                   " validate_rmse=" + num(t.r2.validate_rmse) +
                   " best_epoch=" + std::to_string(t.r2.best_epoch));
    report.comment("summary approx_mse=" + num(summary.mse) +
                   " approx_max_abs=" + num(summary.max_abs) +
                   " approx_mean_abs=" + num(summary.mean_abs));

    Csv dataset;
    start_header(dataset, "fit");
    echo_env(dataset, e, name);
    freq.echo(dataset, spec);
    dataset.meta("hrx", h_rx);
    dataset.raw(fetch_text(a2g_dataset_to_csv, static_cast<const a2g_dataset*>(t.dataset.get())));

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw RuntimeError("cannot create " + dir.string() + ": " + ec.message());
    write_atomic(dir / "d1.mlp", fetch_text(a2g_mlp_to_text, static_cast<const a2g_mlp*>(t.d1.get())));
    write_atomic(dir / "d2.mlp", fetch_text(a2g_mlp_to_text, static_cast<const a2g_mlp*>(t.d2.get())));
    write_atomic(dir / "dataset.csv", dataset.str());
    write_atomic(dir / "report.csv", report.str());
  }
};

// ---------------------------------------------------------------- simulate

struct SimOptionsCli {
  EnvOptions env;
  FreqOptions freq{28.0};
  double h_tx = 0.0;
  double h_rx = 1.5;
  std::string d_grid = "50:3650:50";
  int realizations = 5;
  int links_per_ring = 72;
  std::uint64_t seed = 1;
  std::string layout = "grid";
  bool geometric = false;
  double extent = 0.0;
  bool elevation = false;
  std::string theta_grid = "10:85:5";
  std::string out;

  void attach(CLI::App* app) {
    env.attach(app);
    freq.attach(app);
    app->add_option("--htx", h_tx, "Transmitter height, m")->required();
    app->add_option("--hrx", h_rx, "Receiver height, m")->capture_default_str();
    app->add_option("--d", d_grid, "Ring radii start:stop:step, m")->capture_default_str();
    app->add_option("--realizations", realizations, "Independent city realizations")
        ->capture_default_str();
    app->add_option("--links-per-ring", links_per_ring, "Receivers per ring")->capture_default_str();
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--layout", layout, "grid | uniform | uniform-disjoint")->capture_default_str();
    app->add_flag("--geometric", geometric, "Optical-path blockage instead of Fresnel clearance");
    app->add_option("--extent", extent, "Scene side, m (0 = 2 * max radius + 100)")
        ->capture_default_str();
    app->add_flag("--elevation", elevation, "Sweep the elevation angle instead of distance");
    app->add_option("--theta-deg", theta_grid, "Elevation grid, degrees")->capture_default_str();
    app->add_option("--out", out, "Output file (default stdout)");
  }

  void echo(Csv& csv, const a2g_environment& e, const std::string& name,
            const a2g_fresnel& spec) const {
    echo_env(csv, e, name);
    freq.echo(csv, spec);
    csv.meta("htx", h_tx);
    csv.meta("hrx", h_rx);
    if (elevation)
      csv.meta("theta_deg_grid", theta_grid);
    else
      csv.meta("d_grid", d_grid);
    csv.meta("realizations", std::to_string(realizations));
    csv.meta("links_per_ring", std::to_string(links_per_ring));
    csv.meta("seed", std::to_string(seed));
    csv.meta("layout", layout);
    csv.meta("blockage", geometric ? "geometric" : "fresnel");
    csv.meta("extent", extent > 0.0 ? num(extent) : std::string("auto"));
  }

  // Abscissa shown in the output and the matching ring radii.
  std::pair<std::vector<double>, std::vector<double>> grids() const {
    if (!elevation) {
      auto d = parse_grid(d_grid, "--d");
      return {d, d};
    }
    const auto theta = parse_grid(theta_grid, "--theta-deg");
    std::vector<double> d(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (!(theta[i] > 0.0 && theta[i] < 90.0))
        throw UsageError("--theta-deg values must lie in (0, 90)");
      d[i] = (h_tx - h_rx) / std::tan(theta[i] * kDeg);
    }
    return {theta, d};
  }

  a2g_sim_options options() const {
    a2g_sim_options o = a2g_sim_options_default();
    o.extent = extent;
    o.layout = parse_layout(layout);
    o.fresnel = geometric ? 0 : 1;
    return o;
  }

  std::vector<a2g_sim_point> simulate(const a2g_environment& e, const a2g_fresnel& spec,
                                      const std::vector<double>& d) const {
    const a2g_sim_options o = options();
    std::vector<a2g_sim_point> pts(d.size());
    check(a2g_estimate_p_los(e, spec, h_tx, h_rx, d.data(), d.size(), realizations,
                             links_per_ring, seed, &o, pts.data()));
    return pts;
  }
};

struct SimulateCmd {
  SimOptionsCli sim;
  std::string dump_scene;

  void attach(CLI::App* app) {
    sim.attach(app);
    app->add_option("--dump-scene", dump_scene, "Write the first realization's buildings as CSV");
  }

  void run() const {
    const auto [e, name] = sim.env.resolve();
    const auto spec = sim.freq.resolve();
    const auto [x, d] = sim.grids();
    const auto pts = sim.simulate(e, spec, d);

    Csv csv;
    start_header(csv, "simulate");
    sim.echo(csv, e, name, spec);
    csv.row({sim.elevation ? "theta_deg" : "d", "p_sim", "ci_halfwidth"});
    for (std::size_t i = 0; i < pts.size(); ++i)
      csv.row({num(x[i]), num(pts[i].p), num(pts[i].ci_halfwidth)});

    std::string scene_text;
    if (!dump_scene.empty()) {
      const double d_max = *std::max_element(d.begin(), d.end());
      const double ext = sim.extent > 0.0 ? sim.extent : 2.0 * d_max + 100.0;
      a2g_scene* raw = nullptr;
      check(a2g_scene_synthesize(e, ext, a2g_derive_seed(sim.seed, 0), parse_layout(sim.layout),
                                 &raw));
      ScenePtr scene(raw);
      Csv sc;
      start_header(sc, "simulate");
      echo_env(sc, e, name);
      sc.meta("layout", sim.layout);
      sc.meta("realization", "0");
      sc.raw(fetch_text(a2g_scene_to_csv, static_cast<const a2g_scene*>(scene.get())));
      scene_text = sc.str();
    }
    emit(sim.out, csv.str());
    if (!dump_scene.empty()) write_atomic(dump_scene, scene_text);
  }
};

// ---------------------------------------------------------------- compare

struct CompareCmd {
  SimOptionsCli sim;
  std::vector<std::string> models{"analytic", "approx-retrained", "approx-3gpp", "approx-5gcm"};
  std::string model_dir;
  TrainOptions train;

  void attach(CLI::App* app) {
    sim.attach(app);
    app->add_option("--models", models,
                    "analytic, approx-retrained, approx-3gpp, approx-5gcm, approx-table1")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--model-dir", model_dir, "Directory with d1.mlp and d2.mlp from `fit`");
    train.attach(app);
  }

  void run() const {
    const auto [e, name] = sim.env.resolve();
    const auto spec = sim.freq.resolve();
    const auto [x, d] = sim.grids();
    const double dh = sim.h_tx - sim.h_rx;

    for (const auto& m : models) {
      if (m != "analytic" && m != "approx-retrained" && m != "approx-3gpp" &&
          m != "approx-5gcm" && m != "approx-table1")
        throw UsageError("unknown model '" + m + "'");
    }
    if (std::find(models.begin(), models.end(), "approx-table1") != models.end() &&
        name == "custom")
      throw UsageError("approx-table1 needs --scenario");

    Csv csv;
    start_header(csv, "compare");
    sim.echo(csv, e, name, spec);
    std::string list;
    for (const auto& m : models) list += (list.empty() ? "" : ",") + m;
    csv.meta("models", list);

    std::vector<std::vector<double>> cols;
    for (const auto& m : models) {
      std::vector<double> p(d.size());
      if (m == "analytic") {
        check(a2g_p_los_curve(sim.h_tx, sim.h_rx, e, spec, nullptr, d.data(), d.size(), p.data()));
      } else {
        a2g_approx_params params{};
        if (m == "approx-3gpp") {
          params = {18.0, 63.0};
        } else if (m == "approx-5gcm") {
          params = {20.0, 66.0};
        } else if (m == "approx-table1") {
          a2g_scenarios* raw = nullptr;
          check(a2g_scenarios_load(sim.env.scenario_file.c_str(), &raw));
          ScenariosPtr table(raw);
          const char* warning = nullptr;
          check(a2g_params_for_scenario(table.get(), name.c_str(), dh, A2G_SOURCE_TABLE1, nullptr,
                                        nullptr, &params, &warning));
          if (warning && *warning) csv.meta("approx_table1_note", warning);
        } else if (!model_dir.empty()) {
          const auto d1 = load_mlp(fs::path(model_dir) / "d1.mlp");
          const auto d2 = load_mlp(fs::path(model_dir) / "d2.mlp");
          params = predict(d1.get(), d2.get(), dh);
          csv.meta("retrained_source", model_dir);
        } else {
          const Trained t = train_models(e, spec, sim.h_rx, train);
          params = predict(t.d1.get(), t.d2.get(), dh);
          csv.meta("retrained_source", "trained");
          train.echo(csv);
        }
        csv.meta(m + "_d1", params.d1);
        csv.meta(m + "_d2", params.d2);
        for (std::size_t i = 0; i < d.size(); ++i) check(a2g_p_los_approx(d[i], params, &p[i]));
      }
      cols.push_back(std::move(p));
    }

    const auto pts = sim.simulate(e, spec, d);
    std::vector<double> ps(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ps[i] = pts[i].p;

    std::vector<std::string> head{sim.elevation ? "theta_deg" : "d", "p_sim", "ci_halfwidth"};
    for (const auto& m : models) head.push_back("p_" + m);
    csv.row(head);
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::vector<std::string> r{num(x[i]), num(ps[i]), num(pts[i].ci_halfwidth)};
      for (const auto& c : cols) r.push_back(num(c[i]));
      csv.row(r);
    }

    // distances for the breakpoint are ring radii even in elevation mode
    csv.comment("summary model=sim breakpoint_m=" + num(breakpoint(d, ps)));
    for (std::size_t k = 0; k < models.size(); ++k) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::isnan(ps[i])) continue;
        sum += std::abs(cols[k][i] - ps[i]);
        ++n;
      }
      csv.comment("summary model=" + models[k] +
                  " mad_vs_sim=" + num(n ? sum / static_cast<double>(n) : std::nan("")) +
                  " breakpoint_m=" + num(breakpoint(d, cols[k])));
    }
    emit(sim.out, csv.str());
  }
};

// ---------------------------------------------------------------- scene

struct SceneCmd {
  EnvOptions env;
  double extent = 1000.0;
  std::uint64_t seed = 1;
  std::string layout = "grid";
  std::string out;

  void attach(CLI::App* app) {
    env.attach(app);
    app->add_option("--extent", extent, "Scene side, m")->capture_default_str();
    app->add_option("--seed", seed, "Scene seed")->capture_default_str();
    app->add_option("--layout", layout, "grid | uniform | uniform-disjoint")->capture_default_str();
    app->add_option("--out", out, "Output file (default stdout)");
  }

  void run() const {
    const auto [e, name] = env.resolve();
    a2g_scene* raw = nullptr;
    check(a2g_scene_synthesize(e, extent, seed, parse_layout(layout), &raw));
    ScenePtr scene(raw);
    Csv csv;
    start_header(csv, "scene");
    echo_env(csv, e, name);
    csv.meta("layout", layout);
    csv.meta("buildings", std::to_string(a2g_scene_building_count(scene.get())));
    csv.meta("triangles", std::to_string(a2g_scene_triangle_count(scene.get())));
    csv.raw(fetch_text(a2g_scene_to_csv, static_cast<const a2g_scene*>(scene.get())));
    emit(out, csv.str());
  }
};

void apply_thread_env() {
  const char* v = std::getenv("A2G_LOS_THREADS");
  if (v == nullptr || *v == '\0') return;
  unsigned n = 0;
  const auto r = std::from_chars(v, v + std::strlen(v), n);
  if (r.ec != std::errc() || *r.ptr != '\0')
    throw UsageError(std::string("A2G_LOS_THREADS must be a non-negative integer, got '") + v + "'");
  a2g_set_thread_count(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Air-to-ground line-of-sight probability toolkit", "a2g-los"};
  app.set_version_flag("--version", std::string(a2g_version()));
  app.require_subcommand(1);

  AnalyticCmd analytic;
  FitCmd fit;
  SimulateCmd simulate;
  CompareCmd compare;
  SceneCmd scene;
  auto* a = app.add_subcommand("analytic", "Analytic LoS probability over distance or elevation");
  auto* f = app.add_subcommand("fit", "Build the (D1, D2) dataset and train both networks");
  auto* s = app.add_subcommand("simulate", "Ray-tracing Monte-Carlo estimate over synthetic cities");
  auto* c = app.add_subcommand("compare", "Simulation alongside analytic and parametric models");
  auto* sc = app.add_subcommand("scene", "Dump one synthetic city as CSV");
  analytic.attach(a);
  fit.attach(f);
  simulate.attach(s);
  compare.attach(c);
  scene.attach(sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    apply_thread_env();
    if (*a) analytic.run();
    if (*f) fit.run();
    if (*s) simulate.run();
    if (*c) compare.run();
    if (*sc) scene.run();
  } catch (const UsageError& e) {
    std::cerr << "a2g-los: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "a2g-los: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
