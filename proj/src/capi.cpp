// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <new>
#include <string>

#include "a2g/analytic.hpp"
#include "a2g/approx.hpp"
#include "a2g/error.hpp"
#include "a2g/fit.hpp"
#include "a2g/parallel.hpp"
#include "a2g/rt_sim.hpp"
#include "a2g_los.h"

struct a2g_scenarios {
  a2g::ScenarioTable table;
};

struct a2g_mlp {
  a2g::Mlp net;
};

struct a2g_dataset {
  a2g::FitDataset data;
  std::vector<a2g::RejectedRecord> rejected;
};

struct a2g_scene {
  a2g::Scene scene;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument {
  const char* what;
};

struct NoCrossing {};

struct NotFound {
  std::string name;
};

thread_local std::string g_warning;

template <class F>
a2g_status guarded(F&& body) {
  try {
    body();
    return A2G_OK;
  } catch (const NullArgument& e) {
    g_last_error = std::string("null argument: ") + e.what;
    return A2G_ERR_NULL;
  } catch (const NotFound& e) {
    g_last_error = "unknown scenario '" + e.name + "'";
    return A2G_ERR_NOT_FOUND;
  } catch (const NoCrossing&) {
    g_last_error = "threshold not crossed within the search range";
    return A2G_ERR_NO_CROSSING;
  } catch (const a2g::DomainError& e) {
    g_last_error = e.what();
    return A2G_ERR_DOMAIN;
  } catch (const a2g::ParseError& e) {
    g_last_error = e.what();
    return A2G_ERR_PARSE;
  } catch (const a2g::IoError& e) {
    g_last_error = e.what();
    return A2G_ERR_IO;
  } catch (const a2g::GeometryError& e) {
    g_last_error = e.what();
    return A2G_ERR_GEOMETRY;
  } catch (const a2g::FitError& e) {
    g_last_error = e.what();
    return A2G_ERR_FIT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return A2G_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return A2G_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return A2G_ERR_INTERNAL;
  }
}

template <class T>
T& need(T* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return *p;
}

a2g::Environment env_of(a2g_environment e) { return {e.alpha, e.beta, e.gamma}; }
a2g_environment env_out(const a2g::Environment& e) { return {e.alpha, e.beta, e.gamma}; }
const char* cstr(const char* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return p;
}

a2g::LinkGeometry link_of(a2g_link l) { return {l.h_tx, l.h_rx, l.d_rx}; }
a2g::FresnelSpec spec_of(a2g_fresnel f) { return {f.wavelength, f.order}; }
a2g::ApproxTarget target_of(a2g_target t) {
  return t == A2G_TARGET_D2 ? a2g::ApproxTarget::D2 : a2g::ApproxTarget::D1;
}
a2g::Vec3 vec_of(const double* p, const char* name) {
  if (p == nullptr) throw NullArgument{name};
  return {p[0], p[1], p[2]};
}

a2g::Layout layout_of(a2g_layout l) {
  switch (l) {
    case A2G_LAYOUT_GRID: return a2g::Layout::Grid;
    case A2G_LAYOUT_UNIFORM: return a2g::Layout::Uniform;
    case A2G_LAYOUT_UNIFORM_DISJOINT: return a2g::Layout::UniformDisjoint;
  }
  throw a2g::DomainError("unknown layout");
}

a2g::AnalyticOptions options_of(const double* width_override) {
  a2g::AnalyticOptions opts;
  if (width_override != nullptr) opts.width_override = *width_override;
  return opts;
}

std::span<const double> span_of(const double* p, std::size_t n, const char* name) {
  if (n > 0 && p == nullptr) throw NullArgument{name};
  return {p, n};
}

a2g_status export_text(const std::string& text, char* buf, size_t cap, size_t* len) {
  if (len == nullptr) {
    g_last_error = "null argument: len";
    return A2G_ERR_NULL;
  }
  *len = text.size();
  if (buf == nullptr) return A2G_OK;
  if (cap < text.size() + 1) {
    g_last_error = "buffer too small";
    return A2G_ERR_BUFFER;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return A2G_OK;
}

}  // namespace

extern "C" {

const char* a2g_version(void) { return A2G_LOS_VERSION; }
const char* a2g_last_error(void) { return g_last_error.c_str(); }
void a2g_set_thread_count(unsigned n) { a2g::set_thread_count(n); }
unsigned a2g_thread_count(void) { return a2g::thread_count(); }
uint64_t a2g_derive_seed(uint64_t seed, uint64_t stream) { return a2g::derive_seed(seed, stream); }

// geometry

a2g_status a2g_wavelength_from_frequency(double frequency_hz, double* wavelength) {
  return guarded([&] { need(wavelength, "wavelength") = a2g::wavelength_from_frequency(frequency_hz); });
}

a2g_status a2g_fresnel_axes_of(a2g_fresnel spec, double d_rx, a2g_fresnel_axes* out) {
  return guarded([&] {
    const auto ax = a2g::fresnel_axes(spec_of(spec), d_rx);
    need(out, "out") = {ax.x_semi, ax.y_semi, ax.z_semi};
  });
}

a2g_status a2g_fresnel_radius_at(a2g_fresnel spec, double d_rx, double d_los, double* out) {
  return guarded([&] { need(out, "out") = a2g::fresnel_radius_at(spec_of(spec), d_rx, d_los); });
}

a2g_status a2g_allowed_height(a2g_link link, a2g_fresnel spec, double d_los, double* out) {
  return guarded([&] { need(out, "out") = a2g::allowed_height(link_of(link), spec_of(spec), d_los); });
}

a2g_status a2g_elevation_angle(a2g_link link, double* out) {
  return guarded([&] { need(out, "out") = a2g::elevation_angle(link_of(link)); });
}

// environment

a2g_status a2g_height_pdf(double gamma, double h, double* out) {
  return guarded([&] { need(out, "out") = a2g::height_pdf(gamma, h); });
}

a2g_status a2g_height_cdf(double gamma, double h, double* out) {
  return guarded([&] { need(out, "out") = a2g::height_cdf(gamma, h); });
}

a2g_status a2g_building_count(a2g_environment env, double d_rx, long* out) {
  return guarded([&] {
    env_of(env).validate();
    need(out, "out") = a2g::building_count(env_of(env), d_rx);
  });
}

a2g_status a2g_mean_width(a2g_environment env, double* out) {
  return guarded([&] { need(out, "out") = a2g::mean_width(env_of(env)); });
}

a2g_status a2g_building_position(a2g_environment env, double d_rx, long i, double width, double* out) {
  return guarded([&] {
    env_of(env).validate();
    std::optional<double> w;
    if (width >= 0.0) w = width;
    need(out, "out") = a2g::building_position(env_of(env), d_rx, i, w);
  });
}

a2g_status a2g_scenarios_load(const char* path, a2g_scenarios** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_scenarios{a2g::ScenarioTable::load(cstr(path, "path"))};
  });
}

a2g_status a2g_scenarios_parse(const char* text, a2g_scenarios** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_scenarios{a2g::ScenarioTable::parse(cstr(text, "text"))};
  });
}

void a2g_scenarios_free(a2g_scenarios* table) { delete table; }

size_t a2g_scenarios_count(const a2g_scenarios* table) {
  return table ? table->table.presets().size() : 0;
}

a2g_status a2g_scenarios_at(const a2g_scenarios* table, size_t index, const char** name,
                            a2g_environment* env) {
  return guarded([&] {
    const auto& presets = need(table, "table").table.presets();
    if (index >= presets.size()) throw a2g::DomainError("scenario index out of range");
    if (name) *name = presets[index].name.c_str();
    if (env) *env = env_out(presets[index].env);
  });
}

a2g_status a2g_scenarios_find(const a2g_scenarios* table, const char* name,
                              const char** canonical_name, a2g_environment* env) {
  return guarded([&] {
    const auto& t = need(table, "table").table;
    const auto hit = t.find(cstr(name, "name"));
    if (hit) {
      for (const auto& p : t.presets()) {
        if (p.name != hit->name) continue;
        if (canonical_name) *canonical_name = p.name.c_str();
        if (env) *env = env_out(p.env);
        return;
      }
    }
    throw NotFound{name};
  });
}

// analytic model

a2g_status a2g_p_los_baseline(a2g_link link, a2g_environment env, double* out) {
  return guarded([&] { need(out, "out") = a2g::p_los_baseline(link_of(link), env_of(env)); });
}

a2g_status a2g_p_los(a2g_link link, a2g_environment env, a2g_fresnel spec,
                     const double* width_override, double* out) {
  return guarded([&] {
    need(out, "out") =
        a2g::p_los(link_of(link), env_of(env), spec_of(spec), options_of(width_override));
  });
}

a2g_status a2g_p_los_curve(double h_tx, double h_rx, a2g_environment env, a2g_fresnel spec,
                           const double* width_override, const double* d_grid, size_t n,
                           double* out) {
  return guarded([&] {
    const auto grid = span_of(d_grid, n, "d_grid");
    if (n > 0 && out == nullptr) throw NullArgument{"out"};
    const auto p =
        a2g::p_los_curve(h_tx, h_rx, env_of(env), spec_of(spec), grid, options_of(width_override));
    std::copy(p.begin(), p.end(), out);
  });
}

a2g_status a2g_max_comm_distance(double h_tx, double h_rx, a2g_environment env, a2g_fresnel spec,
                                 const double* width_override, double threshold,
                                 double max_range, double* out) {
  return guarded([&] {
    need(out, "out");
    a2g::McdOptions mcd;
    if (max_range > 0.0) mcd.max_range = max_range;
    const auto r = a2g::max_comm_distance(h_tx, h_rx, env_of(env), spec_of(spec), threshold,
                                          options_of(width_override), mcd);
    if (!r) throw NoCrossing{};
    *out = *r;
  });
}

a2g_status a2g_p_los_vs_elevation(a2g_environment env, a2g_fresnel spec, double h_tx, double h_rx,
                                  const double* width_override, const double* angles, size_t n,
                                  double* out) {
  return guarded([&] {
    const auto a = span_of(angles, n, "angles");
    if (n > 0 && out == nullptr) throw NullArgument{"out"};
    const auto p = a2g::p_los_vs_elevation(env_of(env), spec_of(spec), h_tx, h_rx, a,
                                           options_of(width_override));
    std::copy(p.begin(), p.end(), out);
  });
}

a2g_status a2g_threshold_crossing(const double* xs, const double* ps, size_t n, double threshold,
                                  double* out) {
  return guarded([&] {
    need(out, "out");
    const auto r = a2g::threshold_crossing(span_of(xs, n, "xs"), span_of(ps, n, "ps"), threshold);
    if (!r) throw NoCrossing{};
    *out = *r;
  });
}

// parametric model and networks

a2g_status a2g_p_los_approx(double d_rx, a2g_approx_params params, double* out) {
  return guarded([&] { need(out, "out") = a2g::p_los_approx(d_rx, a2g::ApproxParams{params.d1, params.d2}); });
}

a2g_status a2g_mlp_load(const char* path, a2g_mlp** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_mlp{a2g::Mlp::load(cstr(path, "path"))};
  });
}

a2g_status a2g_mlp_parse(const char* text, a2g_mlp** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_mlp{a2g::Mlp::from_text(cstr(text, "text"))};
  });
}

a2g_status a2g_mlp_table1(const char* scenario, a2g_target target, a2g_mlp** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_mlp{a2g::table1_network(cstr(scenario, "scenario"), target_of(target))};
  });
}

void a2g_mlp_free(a2g_mlp* mlp) { delete mlp; }

a2g_status a2g_mlp_forward(const a2g_mlp* mlp, double delta_h, double* out) {
  return guarded([&] { need(out, "out") = need(mlp, "mlp").net.forward(delta_h); });
}

a2g_status a2g_mlp_to_text(const a2g_mlp* mlp, char* buf, size_t cap, size_t* len) {
  std::string text;
  const auto status = guarded([&] { text = need(mlp, "mlp").net.to_text(); });
  return status == A2G_OK ? export_text(text, buf, cap, len) : status;
}

a2g_status a2g_params_for_scenario(const a2g_scenarios* table, const char* scenario,
                                   double delta_h, a2g_param_source source, const a2g_mlp* d1_net,
                                   const a2g_mlp* d2_net, a2g_approx_params* out,
                                   const char** warning) {
  return guarded([&] {
    need(out, "out");
    const auto preset = need(table, "table").table.find(cstr(scenario, "scenario"));
    if (!preset) throw NotFound{scenario};
    std::optional<a2g::ApproxModel> model;
    a2g::ParamSource src = a2g::ParamSource::Table1;
    if (source == A2G_SOURCE_RETRAINED) {
      src = a2g::ParamSource::Retrained;
      model = a2g::ApproxModel{need(d1_net, "d1_net").net, need(d2_net, "d2_net").net};
    }
    const auto r = a2g::params_for_scenario(*preset, delta_h, src, model ? &*model : nullptr);
    *out = {r.params.d1, r.params.d2};
    if (warning) {
      g_warning = r.warning;
      *warning = g_warning.c_str();
    }
  });
}

// fitting

a2g_train_config a2g_train_config_default(void) {
  const a2g::TrainConfig c;
  return {c.hidden, c.learning_rate, c.epochs, c.eta, c.seed, c.lr_growth};
}

a2g_status a2g_dataset_build(a2g_environment env, a2g_fresnel spec, double h_rx,
                             const double* delta_h_grid, size_t n_dh, const double* d_grid,
                             size_t n_d, a2g_dataset** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    auto b = a2g::build_dataset(env_of(env), spec_of(spec), h_rx,
                                span_of(delta_h_grid, n_dh, "delta_h_grid"),
                                span_of(d_grid, n_d, "d_grid"));
    *out = new a2g_dataset{std::move(b.dataset), std::move(b.rejected)};
  });
}

a2g_status a2g_dataset_load(const char* path, a2g_dataset** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    std::ifstream in(cstr(path, "path"), std::ios::binary);
    if (!in) throw a2g::IoError(std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    *out = new a2g_dataset{a2g::FitDataset::from_csv(ss.str()), {}};
  });
}

void a2g_dataset_free(a2g_dataset* ds) { delete ds; }

size_t a2g_dataset_size(const a2g_dataset* ds) { return ds ? ds->data.size() : 0; }

a2g_status a2g_dataset_record(const a2g_dataset* ds, size_t index, double* delta_h, double* d1,
                              double* d2, double* residual_mse) {
  return guarded([&] {
    const auto& recs = need(ds, "ds").data.records;
    if (index >= recs.size()) throw a2g::DomainError("dataset index out of range");
    const auto& r = recs[index];
    if (delta_h) *delta_h = r.delta_h;
    if (d1) *d1 = r.d1;
    if (d2) *d2 = r.d2;
    if (residual_mse) *residual_mse = r.residual_mse;
  });
}

size_t a2g_dataset_rejected_count(const a2g_dataset* ds) { return ds ? ds->rejected.size() : 0; }

a2g_status a2g_dataset_rejected(const a2g_dataset* ds, size_t index, double* delta_h,
                                const char** reason) {
  return guarded([&] {
    const auto& rej = need(ds, "ds").rejected;
    if (index >= rej.size()) throw a2g::DomainError("rejected index out of range");
    if (delta_h) *delta_h = rej[index].delta_h;
    if (reason) *reason = rej[index].reason.c_str();
  });
}

a2g_status a2g_dataset_to_csv(const a2g_dataset* ds, char* buf, size_t cap, size_t* len) {
  std::string text;
  const auto status = guarded([&] { text = need(ds, "ds").data.to_csv(); });
  return status == A2G_OK ? export_text(text, buf, cap, len) : status;
}

a2g_status a2g_train(const a2g_dataset* ds, a2g_target target, const a2g_train_config* config,
                     a2g_mlp** out, a2g_train_report* report) {
  return guarded([&] {
    need(out, "out") = nullptr;
    a2g::TrainConfig cfg;
    if (config) {
      cfg.hidden = config->hidden;
      cfg.learning_rate = config->learning_rate;
      cfg.epochs = config->epochs;
      cfg.eta = config->eta;
      cfg.seed = config->seed;
      cfg.lr_growth = config->lr_growth;
    }
    auto r = a2g::train(need(ds, "ds").data, target_of(target), cfg);
    if (report) {
      *report = {r.report.epochs_run, r.report.best_epoch, r.report.train_rmse,
                 r.report.validate_rmse, r.report.final_learning_rate};
    }
    *out = new a2g_mlp{std::move(r.model)};
  });
}

a2g_status a2g_rmse(const a2g_mlp* mlp, const a2g_dataset* ds, a2g_target target, double* out) {
  return guarded([&] {
    need(out, "out") = a2g::rmse(need(mlp, "mlp").net, need(ds, "ds").data, target_of(target));
  });
}

a2g_status a2g_evaluate_approx(a2g_environment env, a2g_fresnel spec, double h_rx,
                               const a2g_mlp* d1_net, const a2g_mlp* d2_net,
                               const double* delta_h_grid, size_t n_dh, const double* d_grid,
                               size_t n_d, a2g_approx_summary* summary, double* row_mse,
                               double* row_max_abs) {
  return guarded([&] {
    const a2g::ApproxModel model{need(d1_net, "d1_net").net, need(d2_net, "d2_net").net};
    const auto ev = a2g::evaluate_approx(env_of(env), spec_of(spec), h_rx, model,
                                         span_of(delta_h_grid, n_dh, "delta_h_grid"),
                                         span_of(d_grid, n_d, "d_grid"));
    if (summary) *summary = {ev.mse, ev.max_abs, ev.mean_abs};
    for (std::size_t i = 0; i < ev.rows.size(); ++i) {
      if (row_mse) row_mse[i] = ev.rows[i].mse;
      if (row_max_abs) row_max_abs[i] = ev.rows[i].max_abs;
    }
  });
}

// ray tracing

a2g_status a2g_scene_synthesize(a2g_environment env, double extent, uint64_t seed,
                                a2g_layout layout, a2g_scene** out) {
  return guarded([&] {
    need(out, "out") = nullptr;
    *out = new a2g_scene{a2g::synthesize_scene(env_of(env), extent, seed, layout_of(layout))};
  });
}

void a2g_scene_free(a2g_scene* scene) { delete scene; }

size_t a2g_scene_building_count(const a2g_scene* scene) {
  return scene ? scene->scene.buildings().size() : 0;
}

size_t a2g_scene_triangle_count(const a2g_scene* scene) {
  return scene ? scene->scene.triangles().size() : 0;
}

a2g_status a2g_scene_building(const a2g_scene* scene, size_t index, a2g_building* out) {
  return guarded([&] {
    const auto& bs = need(scene, "scene").scene.buildings();
    if (index >= bs.size()) throw a2g::DomainError("building index out of range");
    const auto& b = bs[index];
    need(out, "out") = {b.center_x, b.center_y, b.width, b.height};
  });
}

a2g_status a2g_scene_to_csv(const a2g_scene* scene, char* buf, size_t cap, size_t* len) {
  std::string text;
  const auto status = guarded([&] { text = need(scene, "scene").scene.to_csv(); });
  return status == A2G_OK ? export_text(text, buf, cap, len) : status;
}

a2g_status a2g_ray_triangle_intersect(const double origin[3], const double direction[3],
                                      const double v0[3], const double v1[3], const double v2[3],
                                      int* hit, double* s, double* u, double* v) {
  return guarded([&] {
    const a2g::Ray ray{vec_of(origin, "origin"), vec_of(direction, "direction")};
    const a2g::Triangle tri{vec_of(v0, "v0"), vec_of(v1, "v1"), vec_of(v2, "v2")};
    const auto h = a2g::ray_triangle_intersect(ray, tri);
    need(hit, "hit") = h ? 1 : 0;
    if (!h) return;
    if (s) *s = h->s;
    if (u) *u = h->u;
    if (v) *v = h->v;
  });
}

a2g_status a2g_los_blocked_geometric(const a2g_scene* scene, const double tx[3],
                                     const double rx[3], int* blocked) {
  return guarded([&] {
    need(blocked, "blocked") =
        a2g::los_blocked_geometric(need(scene, "scene").scene, vec_of(tx, "tx"), vec_of(rx, "rx"))
            ? 1
            : 0;
  });
}

a2g_status a2g_los_blocked_fresnel(const a2g_scene* scene, const double tx[3], const double rx[3],
                                   a2g_fresnel spec, int* blocked) {
  return guarded([&] {
    need(blocked, "blocked") = a2g::los_blocked_fresnel(need(scene, "scene").scene,
                                                        vec_of(tx, "tx"), vec_of(rx, "rx"),
                                                        spec_of(spec))
                                   ? 1
                                   : 0;
  });
}

a2g_sim_options a2g_sim_options_default(void) {
  const a2g::SimOptions o;
  return {o.extent, A2G_LAYOUT_GRID, o.fresnel ? 1 : 0};
}

a2g_status a2g_estimate_p_los(a2g_environment env, a2g_fresnel spec, double h_tx, double h_rx,
                              const double* d_grid, size_t n, int realizations,
                              int links_per_ring, uint64_t seed, const a2g_sim_options* options,
                              a2g_sim_point* out) {
  return guarded([&] {
    const auto grid = span_of(d_grid, n, "d_grid");
    if (n > 0 && out == nullptr) throw NullArgument{"out"};
    a2g::SimOptions opts;
    if (options) {
      opts.extent = options->extent;
      opts.layout = layout_of(options->layout);
      opts.fresnel = options->fresnel != 0;
    }
    const auto pts = a2g::estimate_p_los(env_of(env), spec_of(spec), h_tx, h_rx, grid,
                                         realizations, links_per_ring, seed, opts);
    for (std::size_t i = 0; i < pts.size(); ++i)
      out[i] = {pts[i].d, pts[i].p, pts[i].ci_halfwidth, pts[i].links};
  });
}

}  // extern "C"
