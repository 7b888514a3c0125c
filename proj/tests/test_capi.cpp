// Exercises the shared library strictly through the C interface.

#include <doctest.h>

#include <gol/gol.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

const double kTestEllipse[5] = {10.0, 20.0, 5.0, 2.0, 0.7};

std::string temp_path(const char* name) {
  return std::string("/tmp/gol_capi_") + name;
}

}  // namespace

TEST_CASE("ellipse/gaussian round trip and error reporting") {
  double gaussian[5], back[5];
  REQUIRE(gol_ellipse_to_gaussian(kTestEllipse, gaussian) == GOL_OK);
  REQUIRE(gol_gaussian_to_ellipse(gaussian, back) == GOL_OK);
  for (int i = 0; i < 5; ++i) CHECK(back[i] == doctest::Approx(kTestEllipse[i]).epsilon(1e-9));

  const double bad[5] = {0, 0, -1, 1, 0};  // not positive definite
  CHECK(gol_gaussian_to_ellipse(bad, back) == GOL_ERR_INVALID);
  CHECK(std::string(gol_last_error()).size() > 0);
}

TEST_CASE("projection pipeline matches the centered-sphere closed form") {
  const gol_intrinsics k{1000, 1000, 0, 0};
  const double quat[4] = {1, 0, 0, 0};
  const double translation[3] = {0, 0, 10};
  double proj[12];
  REQUIRE(gol_projection_matrix(&k, quat, translation, proj) == GOL_OK);

  // dual quadric of a half-unit sphere via compose
  const double center[3] = {0, 0, 0};
  const double axes[3] = {0.5, 0.5, 0.5};
  const double identity[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  double quadric[10];
  REQUIRE(gol_compose_dual_quadric(center, axes, identity, quadric) == GOL_OK);

  double conic[6], gaussian[5], ellipse[5];
  REQUIRE(gol_project_ellipsoid(quadric, proj, conic) == GOL_OK);
  REQUIRE(gol_conic_to_gaussian(conic, gaussian) == GOL_OK);
  REQUIRE(gol_gaussian_to_ellipse(gaussian, ellipse) == GOL_OK);
  const double radius = 500.0 / std::sqrt(99.75);
  CHECK(ellipse[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ellipse[2] == doctest::Approx(radius).epsilon(1e-9));
  CHECK(ellipse[3] == doctest::Approx(radius).epsilon(1e-9));
}

TEST_CASE("label generation, render, GOHM round trip and extraction") {
  const gol_intrinsics k{600, 600, 320, 240};
  const double quat[4] = {1, 0, 0, 0};
  const double translation[3] = {0, 0, 10};
  const double half_dims[3] = {0.40, 0.375, 0.16};
  double gaussian[5], ellipse[5], truncation = -1.0;
  REQUIRE(gol_label_from_pose(&k, quat, translation, half_dims, 640, 480, 64, 64, gaussian,
                              ellipse, &truncation) == GOL_OK);
  CHECK(truncation >= 0.0);
  CHECK(truncation < 1e-6);  // tiny, well-centred target

  std::vector<double> heatmap(64 * 64);
  REQUIRE(gol_render_heatmap(gaussian, 64, 64, heatmap.data()) == GOL_OK);
  double sum = 0;
  for (double v : heatmap) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const std::string path = temp_path("roundtrip.gohm");
  REQUIRE(gol_gohm_write(path.c_str(), 64, 64, heatmap.data()) == GOL_OK);
  int w = 0, h = 0;
  double* loaded = nullptr;
  REQUIRE(gol_gohm_read(path.c_str(), &w, &h, &loaded) == GOL_OK);
  CHECK(w == 64);
  CHECK(h == 64);

  double g_norm[5], g_px[5];
  REQUIRE(gol_edsnt_extract(loaded, w, h, g_norm) == GOL_OK);
  REQUIRE(gol_normalized_to_pixel(g_norm, w, h, g_px) == GOL_OK);
  CHECK(g_px[0] == doctest::Approx(gaussian[0]).epsilon(1e-3));
  CHECK(g_px[1] == doctest::Approx(gaussian[1]).epsilon(1e-3));
  gol_free(loaded);
  std::remove(path.c_str());

  CHECK(gol_gohm_read("/nonexistent/nope.gohm", &w, &h, &loaded) == GOL_ERR_IO);
}

TEST_CASE("losses and metrics through the C surface") {
  double g[5];
  REQUIRE(gol_ellipse_to_gaussian(kTestEllipse, g) == GOL_OK);
  double value = -1, grad[5];
  REQUIRE(gol_wasserstein(g, g, &value, grad) == GOL_OK);
  CHECK(value == doctest::Approx(0.0).epsilon(1e-12));

  const int n = 4;
  std::vector<double> za(n * n, 1.0 / (n * n)), zb(n * n, 0.0);
  zb[0] = 1.0;
  std::vector<double> js_grad(n * n);
  double js = -1;
  REQUIRE(gol_js_heatmaps(za.data(), zb.data(), n, n, &js, js_grad.data()) == GOL_OK);
  CHECK(js > 0.0);
  CHECK(js <= std::log(2.0) + 1e-12);

  double metrics[5];
  int degenerate = 1;
  const double circle10[5] = {0, 0, 10, 10, 0};
  const double circle20[5] = {0, 0, 20, 20, 0};
  REQUIRE(gol_evaluate_pair(circle10, circle20, 4, 720, metrics, &degenerate) == GOL_OK);
  CHECK(metrics[0] == doctest::Approx(0.25).epsilon(0.01));
  CHECK(metrics[1] == doctest::Approx(1.00).epsilon(0.01));
  CHECK(metrics[2] == doctest::Approx(0.40).epsilon(0.01));
  CHECK(metrics[3] == doctest::Approx(0.75).epsilon(0.01));
  CHECK(degenerate == 0);
}

TEST_CASE("triangulation rejects too few views") {
  double proj[24] = {0};
  double conics[12] = {0};
  double quadric[10];
  CHECK(gol_triangulate_ellipsoid(2, proj, conics, quadric) == GOL_ERR_INVALID);
}

TEST_CASE("fit trace handle lifecycle") {
  double g[5];
  const double target_ellipse[5] = {32.0, 30.0, 5.0, 3.0, 0.4};
  REQUIRE(gol_ellipse_to_gaussian(target_ellipse, g) == GOL_OK);

  gol_fit_config cfg;
  gol_fit_config_defaults(&cfg);
  cfg.iterations = 200;
  gol_fit_trace* trace = nullptr;
  REQUIRE(gol_fit_run(g, &cfg, &trace) == GOL_OK);
  REQUIRE(trace != nullptr);
  const int iters = gol_fit_trace_iterations(trace);
  CHECK(iters == 200);
  CHECK(gol_fit_trace_loss(trace, iters - 1) < gol_fit_trace_loss(trace, 0));

  double g_norm[5], g_px[5], ellipse[5], metrics[5];
  gol_fit_trace_final_params(trace, g_norm, g_px, ellipse);
  gol_fit_trace_metrics(trace, metrics);
  CHECK(metrics[0] > 0.0);
  std::vector<double> heatmap(cfg.width * cfg.height);
  gol_fit_trace_heatmap(trace, heatmap.data());
  double sum = 0;
  for (double v : heatmap) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  gol_fit_trace_free(trace);
}
