// Copyright 2026 The a2g-los Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "a2g_los.h"
#include "doctest.h"
#include "oracles.hpp"

namespace {
const a2g_environment kUrban{0.3, 500.0, 15.0};
}

TEST_SUITE("capi") {

TEST_CASE("library info") {
  CHECK(std::string(a2g_version()) == "1.0.0");
  a2g_set_thread_count(2);
  CHECK(a2g_thread_count() == 2);
  a2g_set_thread_count(0);
  CHECK(a2g_thread_count() >= 1);
  CHECK(a2g_derive_seed(1, 0) != a2g_derive_seed(1, 1));
}

TEST_CASE("status codes and messages") {
  double out = 0.0;
  CHECK(a2g_wavelength_from_frequency(0.0, &out) == A2G_ERR_DOMAIN);
  CHECK(std::strlen(a2g_last_error()) > 0);
  CHECK(a2g_wavelength_from_frequency(1e9, nullptr) == A2G_ERR_NULL);
  CHECK(a2g_wavelength_from_frequency(299792458.0, &out) == A2G_OK);
  CHECK(out == 1.0);
}

TEST_CASE("error messages are per thread") {
  double out = 0.0;
  CHECK(a2g_height_pdf(-1.0, 1.0, &out) == A2G_ERR_DOMAIN);
  const std::string mine = a2g_last_error();
  std::thread([] {
    double v = 0.0;
    a2g_wavelength_from_frequency(-5.0, &v);
  }).join();
  CHECK(std::string(a2g_last_error()) == mine);
}

TEST_CASE("geometry and environment") {
  a2g_fresnel_axes ax{};
  REQUIRE(a2g_fresnel_axes_of({0.05, 1}, 1000.0, &ax) == A2G_OK);
  CHECK(ax.x_semi == doctest::Approx(std::sqrt(50.0) / 2));
  double r = 0.0;
  CHECK(a2g_fresnel_radius_at({0.05, 1}, 1000.0, 2000.0, &r) == A2G_ERR_DOMAIN);
  CHECK(a2g_allowed_height({70.0, 1.5, 1000.0}, {0.0, 1}, 500.0, &r) == A2G_OK);
  CHECK(r == doctest::Approx(35.75));
  CHECK(a2g_elevation_angle({100.0, 0.0, 100.0}, &r) == A2G_OK);
  CHECK(r == doctest::Approx(M_PI / 4));
  long n = 0;
  CHECK(a2g_building_count(kUrban, 1000.0, &n) == A2G_OK);
  CHECK(n == 12);
  CHECK(a2g_building_position(kUrban, 1000.0, 1, -1.0, &r) == A2G_OK);
  CHECK(r == doctest::Approx(1000.0 / 24.0 + 500.0 * std::sqrt(0.3 / 500.0)));
  CHECK(a2g_building_position(kUrban, 1000.0, 13, -1.0, &r) == A2G_ERR_DOMAIN);
  CHECK(a2g_height_cdf(15.0, 30.0, &r) == A2G_OK);
  CHECK(r == doctest::Approx(1.0 - std::exp(-2.0)));
}

TEST_CASE("scenario table handle") {
  a2g_scenarios* t = nullptr;
  REQUIRE(a2g_scenarios_load(A2G_SCENARIO_FILE, &t) == A2G_OK);
  CHECK(a2g_scenarios_count(t) == 4);
  const char* name = nullptr;
  a2g_environment env{};
  CHECK(a2g_scenarios_at(t, 3, &name, &env) == A2G_OK);
  CHECK(std::string(name) == "HighRiseUrban");
  CHECK(env.gamma == 50.0);
  CHECK(a2g_scenarios_at(t, 4, &name, &env) == A2G_ERR_DOMAIN);
  CHECK(a2g_scenarios_find(t, "dense-urban", &name, &env) == A2G_OK);
  CHECK(std::string(name) == "DenseUrban");
  CHECK(a2g_scenarios_find(t, "rural", &name, &env) == A2G_ERR_NOT_FOUND);
  a2g_scenarios_free(t);
  a2g_scenarios_free(nullptr);

  a2g_scenarios* bad = nullptr;
  CHECK(a2g_scenarios_parse("X 0.3 500\n", &bad) == A2G_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(a2g_scenarios_load("/nonexistent/x.txt", &bad) == A2G_ERR_IO);
}

TEST_CASE("analytic entry points") {
  double p = 0.0;
  const a2g_fresnel spec{0.05, 1};
  CHECK(a2g_p_los({70.0, 1.5, 700.0}, kUrban, spec, nullptr, &p) == A2G_OK);
  CHECK(p == doctest::Approx(oracle::p_full(70.0, 1.5, 700.0, 0.3, 500.0, 15.0, 0.05)).epsilon(1e-12));
  const double w = 0.0;
  CHECK(a2g_p_los({70.0, 1.5, 700.0}, kUrban, {0.0, 1}, &w, &p) == A2G_OK);
  double pb = 0.0;
  CHECK(a2g_p_los_baseline({70.0, 1.5, 700.0}, kUrban, &pb) == A2G_OK);
  CHECK(std::abs(p - pb) <= 1e-12);

  const double d[] = {0.0, 100.0, 900.0};
  double curve[3];
  CHECK(a2g_p_los_curve(70.0, 1.5, kUrban, spec, nullptr, d, 3, curve) == A2G_OK);
  CHECK(curve[0] == 1.0);
  CHECK(a2g_p_los_curve(70.0, 1.5, kUrban, spec, nullptr, nullptr, 3, curve) == A2G_ERR_NULL);

  double mcd = 0.0;
  const a2g_environment hr{0.5, 300.0, 50.0};
  CHECK(a2g_max_comm_distance(30.0, 1.5, hr, spec, nullptr, 0.6, 0.0, &mcd) == A2G_OK);
  CHECK(mcd == doctest::Approx(1000.0 / std::sqrt(150.0)).epsilon(0.002));
  CHECK(a2g_max_comm_distance(30.0, 1.5, hr, spec, nullptr, 0.6, 40.0, &mcd) == A2G_ERR_NO_CROSSING);
  CHECK(a2g_max_comm_distance(30.0, 1.5, hr, spec, nullptr, 1.0, 0.0, &mcd) == A2G_ERR_DOMAIN);

  const double th[] = {0.3, 1.0};
  double pe[2];
  CHECK(a2g_p_los_vs_elevation(kUrban, spec, 500.0, 2.0, nullptr, th, 2, pe) == A2G_OK);
  CHECK(pe[1] >= pe[0]);
  const double xs[] = {0, 1, 2}, ps[] = {0.2, 0.4, 0.9};
  double x = 0.0;
  CHECK(a2g_threshold_crossing(xs, ps, 3, 0.6, &x) == A2G_OK);
  CHECK(x == doctest::Approx(1.4));
  CHECK(a2g_threshold_crossing(xs, ps, 3, 0.95, &x) == A2G_ERR_NO_CROSSING);
}

TEST_CASE("networks") {
  double p = 0.0;
  CHECK(a2g_p_los_approx(100.0, {18.0, 63.0}, &p) == A2G_OK);
  CHECK(p == doctest::Approx(oracle::p_approx(100.0, 18.0, 63.0)));

  a2g_mlp* net = nullptr;
  REQUIRE(a2g_mlp_table1("urban", A2G_TARGET_D1, &net) == A2G_OK);
  size_t len = 0;
  CHECK(a2g_mlp_to_text(net, nullptr, 0, &len) == A2G_OK);
  std::string small(4, '\0');
  CHECK(a2g_mlp_to_text(net, small.data(), small.size(), &len) == A2G_ERR_BUFFER);
  std::string text(len + 1, '\0');
  CHECK(a2g_mlp_to_text(net, text.data(), text.size(), &len) == A2G_OK);
  text.resize(len);
  CHECK(text.rfind("iw -1.6587", 0) == 0);

  a2g_mlp* copy = nullptr;
  REQUIRE(a2g_mlp_parse(text.c_str(), &copy) == A2G_OK);
  double a = 0.0, b = 0.0;
  a2g_mlp_forward(net, 250.0, &a);
  a2g_mlp_forward(copy, 250.0, &b);
  CHECK(a == b);
  a2g_mlp_free(copy);
  a2g_mlp_free(net);

  CHECK(a2g_mlp_parse("garbage 1\n", &copy) == A2G_ERR_PARSE);
  CHECK(a2g_mlp_load("/nonexistent/net.mlp", &copy) == A2G_ERR_IO);
  CHECK(a2g_mlp_table1("rural", A2G_TARGET_D1, &copy) == A2G_ERR_DOMAIN);

  a2g_scenarios* t = nullptr;
  REQUIRE(a2g_scenarios_load(A2G_SCENARIO_FILE, &t) == A2G_OK);
  a2g_approx_params params{};
  const char* warning = nullptr;
  CHECK(a2g_params_for_scenario(t, "Urban", 100.0, A2G_SOURCE_TABLE1, nullptr, nullptr, &params,
                                &warning) == A2G_OK);
  CHECK(std::strlen(warning) > 0);
  CHECK(a2g_params_for_scenario(t, "Urban", 100.0, A2G_SOURCE_RETRAINED, nullptr, nullptr, &params,
                                &warning) == A2G_ERR_NULL);
  CHECK(a2g_params_for_scenario(t, "Nowhere", 100.0, A2G_SOURCE_TABLE1, nullptr, nullptr, &params,
                                &warning) == A2G_ERR_NOT_FOUND);
  a2g_scenarios_free(t);
}

TEST_CASE("dataset and training") {
  std::vector<double> dh, d;
  for (int i = 0; i < 12; ++i) dh.push_back(20.0 + 40.0 * i);
  for (double x = 1.0; x <= 1000.0; x += 4.0) d.push_back(x);
  a2g_dataset* ds = nullptr;
  REQUIRE(a2g_dataset_build(kUrban, {0.05, 1}, 1.5, dh.data(), dh.size(), d.data(), d.size(), &ds) ==
          A2G_OK);
  CHECK(a2g_dataset_size(ds) == 12);
  CHECK(a2g_dataset_rejected_count(ds) == 0);
  double rdh = 0, d1 = 0, d2 = 0;
  CHECK(a2g_dataset_record(ds, 0, &rdh, &d1, &d2, nullptr) == A2G_OK);
  CHECK(rdh == 20.0);
  CHECK(a2g_dataset_record(ds, 12, &rdh, &d1, &d2, nullptr) == A2G_ERR_DOMAIN);
  size_t len = 0;
  CHECK(a2g_dataset_to_csv(ds, nullptr, 0, &len) == A2G_OK);
  CHECK(len > 20);

  a2g_train_config cfg = a2g_train_config_default();
  CHECK(cfg.hidden == 4);
  CHECK(cfg.epochs == 20000);
  cfg.epochs = 300;
  a2g_mlp* net = nullptr;
  a2g_train_report rep{};
  REQUIRE(a2g_train(ds, A2G_TARGET_D1, &cfg, &net, &rep) == A2G_OK);
  CHECK(rep.epochs_run == 300);
  double r = 0.0;
  CHECK(a2g_rmse(net, ds, A2G_TARGET_D1, &r) == A2G_OK);
  CHECK(std::isfinite(r));

  a2g_approx_summary sum{};
  std::vector<double> row(dh.size());
  CHECK(a2g_evaluate_approx(kUrban, {0.05, 1}, 1.5, net, net, dh.data(), dh.size(), d.data(), d.size(),
                            &sum, row.data(), nullptr) == A2G_OK);
  CHECK(sum.max_abs >= 0.0);

  cfg.learning_rate = 1e300;
  a2g_mlp* bad = nullptr;
  CHECK(a2g_train(ds, A2G_TARGET_D1, &cfg, &bad, &rep) == A2G_ERR_FIT);
  CHECK(std::string(a2g_last_error()).find("learning_rate") != std::string::npos);
  CHECK(bad == nullptr);
  a2g_mlp_free(net);
  a2g_dataset_free(ds);

  const double dh2[] = {10.0};
  const double d_short[] = {1.0, 20.0};
  REQUIRE(a2g_dataset_build(kUrban, {0.05, 1}, 1.5, dh2, 1, d_short, 2, &ds) == A2G_OK);
  CHECK(a2g_dataset_rejected_count(ds) == 1);
  const char* reason = nullptr;
  CHECK(a2g_dataset_rejected(ds, 0, &rdh, &reason) == A2G_OK);
  CHECK(rdh == 10.0);
  CHECK(std::strlen(reason) > 0);
  a2g_dataset_free(ds);
}

TEST_CASE("scenes and blockage") {
  a2g_scene* s = nullptr;
  REQUIRE(a2g_scene_synthesize(kUrban, 1000.0, 3, A2G_LAYOUT_GRID, &s) == A2G_OK);
  CHECK(a2g_scene_building_count(s) == 484);
  CHECK(a2g_scene_triangle_count(s) == 4840);
  a2g_building b{};
  CHECK(a2g_scene_building(s, 0, &b) == A2G_OK);
  CHECK(b.width == doctest::Approx(24.495).epsilon(1e-4));
  size_t len = 0;
  CHECK(a2g_scene_to_csv(s, nullptr, 0, &len) == A2G_OK);
  const double tx[] = {0, 0, 300}, rx[] = {400, 10, 2};
  int g = -1, f = -1;
  CHECK(a2g_los_blocked_geometric(s, tx, rx, &g) == A2G_OK);
  CHECK(a2g_los_blocked_fresnel(s, tx, rx, {0.0107, 1}, &f) == A2G_OK);
  if (g) CHECK(f);
  CHECK(a2g_los_blocked_geometric(s, tx, tx, &g) == A2G_ERR_DOMAIN);
  a2g_scene_free(s);

  a2g_scene* bad = nullptr;
  CHECK(a2g_scene_synthesize({1.0, 500.0, 15.0}, 1000.0, 3, A2G_LAYOUT_GRID, &bad) == A2G_ERR_GEOMETRY);

  const double o[] = {1.0 / 3, 1.0 / 3, 2}, dir[] = {0, 0, -1};
  const double v0[] = {0, 0, 0}, v1[] = {1, 0, 0}, v2[] = {0, 1, 0};
  int hit = 0;
  double ss = 0, u = 0, v = 0;
  CHECK(a2g_ray_triangle_intersect(o, dir, v0, v1, v2, &hit, &ss, &u, &v) == A2G_OK);
  CHECK(hit == 1);
  CHECK(ss == doctest::Approx(2.0));
  CHECK(u == doctest::Approx(1.0 / 3));
}

TEST_CASE("simulation entry point") {
  const double d[] = {60.0, 200.0};
  a2g_sim_point pts[2];
  a2g_sim_options o = a2g_sim_options_default();
  CHECK(o.layout == A2G_LAYOUT_GRID);
  CHECK(o.fresnel == 1);
  REQUIRE(a2g_estimate_p_los(kUrban, {0.0107, 1}, 300.0, 2.0, d, 2, 2, 16, 9, &o, pts) == A2G_OK);
  CHECK(pts[0].d == 60.0);
  CHECK(pts[1].links > 0);
  CHECK(a2g_estimate_p_los(kUrban, {0.0107, 1}, 300.0, 2.0, d, 2, 0, 16, 9, &o, pts) == A2G_ERR_DOMAIN);
}

}  // TEST_SUITE
