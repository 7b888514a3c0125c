#include "gol/gol.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "gol/conic_geometry.hpp"
#include "gol/edsnt.hpp"
#include "gol/fit.hpp"
#include "gol/gaussian_occupancy.hpp"
#include "gol/gohm.hpp"
#include "gol/losses.hpp"
#include "gol/metrics.hpp"
#include "gol/reconstruction.hpp"

namespace {

thread_local std::string g_last_error;

gol_status fail(gol_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
gol_status guarded(Fn&& fn, gol_status numeric_code = GOL_ERR_NUMERIC) {
  try {
    fn();
    return GOL_OK;
  } catch (const std::invalid_argument& e) {
    return fail(GOL_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(numeric_code, e.what());
  }
}

gol::GaussianParams unpack_gaussian(const double g[5], gol::Frame frame) {
  gol::GaussianParams out;
  out.mu = Eigen::Vector2d(g[0], g[1]);
  out.sigma << g[2], g[4], g[4], g[3];
  out.frame = frame;
  return out;
}

void pack_gaussian(const gol::GaussianParams& g, double out[5]) {
  out[0] = g.mu(0);
  out[1] = g.mu(1);
  out[2] = g.sigma(0, 0);
  out[3] = g.sigma(1, 1);
  out[4] = g.sigma(0, 1);
}

gol::EllipseGeom unpack_ellipse(const double e[5]) {
  return gol::EllipseGeom{e[0], e[1], e[2], e[3], e[4]};
}

void pack_ellipse(const gol::EllipseGeom& e, double out[5]) {
  out[0] = e.x0;
  out[1] = e.y0;
  out[2] = e.a;
  out[3] = e.b;
  out[4] = e.theta;
}

gol::DualConic unpack_conic(const double c[6]) {
  gol::DualConic m;
  m << c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5];
  return m;
}

void pack_conic(const gol::DualConic& m, double out[6]) {
  out[0] = m(0, 0);
  out[1] = m(0, 1);
  out[2] = m(0, 2);
  out[3] = m(1, 1);
  out[4] = m(1, 2);
  out[5] = m(2, 2);
}

gol::DualQuadric unpack_quadric(const double q[10]) {
  gol::DualQuadric m;
  m << q[0], q[1], q[2], q[3],
       q[1], q[4], q[5], q[6],
       q[2], q[5], q[7], q[8],
       q[3], q[6], q[8], q[9];
  return m;
}

void pack_quadric(const gol::DualQuadric& m, double out[10]) {
  const int idx[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                          {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
  for (int k = 0; k < 10; ++k) out[k] = m(idx[k][0], idx[k][1]);
}

Eigen::Matrix<double, 3, 4> unpack_proj(const double p[12]) {
  Eigen::Matrix<double, 3, 4> m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = p[4 * r + c];
  return m;
}

gol::HeatmapGrid unpack_heatmap(const double* values, int w, int h) {
  if (w < 1 || h < 1 || values == nullptr) {
    throw std::invalid_argument("heatmap buffer: invalid dimensions or null pointer");
  }
  gol::HeatmapGrid grid;
  grid.width = w;
  grid.height = h;
  grid.values.resize(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) grid.values(i, j) = values[i * w + j];
  return grid;
}

void pack_grid(const Eigen::ArrayXXd& values, double* out) {
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j) out[i * values.cols() + j] = values(i, j);
}

gol::Pose unpack_pose(const double quat[4], const double translation[3]) {
  gol::Pose pose;
  pose.rotation = gol::quat_to_rotation(Eigen::Vector4d(quat[0], quat[1], quat[2], quat[3]));
  pose.translation = Eigen::Vector3d(translation[0], translation[1], translation[2]);
  return pose;
}

gol::EllipsoidEstimate unpack_estimate(const double center[3], const double axes[3],
                                       const double rot[9]) {
  gol::EllipsoidEstimate e;
  e.center = Eigen::Vector3d(center[0], center[1], center[2]);
  e.half_axes = Eigen::Vector3d(axes[0], axes[1], axes[2]);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) e.orientation(r, c) = rot[3 * r + c];
  return e;
}

}  // namespace

extern "C" {

const char* gol_last_error(void) { return g_last_error.c_str(); }

gol_status gol_quat_to_rotation(const double quat[4], double rotation[9]) {
  return guarded([&] {
    const Eigen::Matrix3d r =
        gol::quat_to_rotation(Eigen::Vector4d(quat[0], quat[1], quat[2], quat[3]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rotation[3 * i + j] = r(i, j);
  });
}

gol_status gol_gaussian_to_ellipse(const double gaussian[5], double ellipse[5]) {
  return guarded([&] {
    pack_ellipse(gol::gaussian_to_ellipse(unpack_gaussian(gaussian, gol::Frame::Pixel)), ellipse);
  });
}

gol_status gol_ellipse_to_gaussian(const double ellipse[5], double gaussian[5]) {
  return guarded(
      [&] { pack_gaussian(gol::ellipse_to_gaussian(unpack_ellipse(ellipse)), gaussian); });
}

gol_status gol_ellipse_from_bbox(const double bbox[4], double ellipse[5]) {
  return guarded([&] {
    pack_ellipse(gol::ellipse_from_bbox(gol::BoundingBox{bbox[0], bbox[1], bbox[2], bbox[3]}),
                 ellipse);
  });
}

gol_status gol_projection_matrix(const gol_intrinsics* k, const double quat[4],
                                 const double translation[3], double proj[12]) {
  return guarded([&] {
    const gol::Intrinsics kk{k->fx, k->fy, k->cx, k->cy};
    const auto p = gol::projection_matrix(kk, unpack_pose(quat, translation));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) proj[4 * r + c] = p(r, c);
  });
}

gol_status gol_project_ellipsoid(const double quadric[10], const double proj[12],
                                 double conic[6]) {
  return guarded([&] {
    pack_conic(gol::project_ellipsoid(unpack_quadric(quadric), unpack_proj(proj)), conic);
  });
}

gol_status gol_conic_to_gaussian(const double conic[6], double gaussian[5]) {
  return guarded([&] { pack_gaussian(gol::conic_to_gaussian(unpack_conic(conic)), gaussian); });
}

gol_status gol_gaussian_to_conic(const double gaussian[5], double conic[6]) {
  return guarded([&] {
    pack_conic(gol::gaussian_to_conic(unpack_gaussian(gaussian, gol::Frame::Pixel)), conic);
  });
}

gol_status gol_label_from_pose(const gol_intrinsics* k, const double quat[4],
                               const double translation[3], const double half_dims[3],
                               int image_w, int image_h, int heatmap_w, int heatmap_h,
                               double gaussian_px[5], double ellipse[5], double* truncation) {
  return guarded([&] {
    const gol::Intrinsics kk{k->fx, k->fy, k->cx, k->cy};
    const gol::EllipsoidDims dims{half_dims[0], half_dims[1], half_dims[2]};
    const gol::LabelRecord rec = gol::labels_from_pose(kk, unpack_pose(quat, translation), dims,
                                                       image_w, image_h, heatmap_w, heatmap_h);
    pack_gaussian(rec.gaussian, gaussian_px);
    pack_ellipse(rec.ellipse, ellipse);
    if (truncation != nullptr) *truncation = rec.truncation_fraction;
  });
}

gol_status gol_render_heatmap(const double gaussian_px[5], int w, int h, double* heatmap) {
  return guarded([&] {
    const gol::HeatmapGrid grid =
        gol::render_gaussian_heatmap(unpack_gaussian(gaussian_px, gol::Frame::Pixel), w, h);
    pack_grid(grid.values, heatmap);
  });
}

gol_status gol_truncation_fraction(const double gaussian_px[5], int w, int h, double* out) {
  return guarded([&] {
    *out = gol::truncation_fraction(unpack_gaussian(gaussian_px, gol::Frame::Pixel), w, h);
  });
}

gol_status gol_pixel_to_normalized(const double gaussian_px[5], int w, int h,
                                   double gaussian_norm[5]) {
  return guarded([&] {
    pack_gaussian(gol::pixel_to_normalized(unpack_gaussian(gaussian_px, gol::Frame::Pixel), w, h),
                  gaussian_norm);
  });
}

gol_status gol_normalized_to_pixel(const double gaussian_norm[5], int w, int h,
                                   double gaussian_px[5]) {
  return guarded([&] {
    pack_gaussian(
        gol::normalized_to_pixel(unpack_gaussian(gaussian_norm, gol::Frame::Normalized), w, h),
        gaussian_px);
  });
}

gol_status gol_gohm_write(const char* path, int w, int h, const double* heatmap) {
  return guarded([&] { gol::gohm_write(path, unpack_heatmap(heatmap, w, h)); }, GOL_ERR_IO);
}

gol_status gol_gohm_read(const char* path, int* w, int* h, double** heatmap) {
  return guarded(
      [&] {
        const gol::HeatmapGrid grid = gol::gohm_read(path);
        double* buffer =
            static_cast<double*>(std::malloc(sizeof(double) * grid.width * grid.height));
        if (buffer == nullptr) throw std::runtime_error("gol_gohm_read: allocation failure");
        pack_grid(grid.values, buffer);
        *w = grid.width;
        *h = grid.height;
        *heatmap = buffer;
      },
      GOL_ERR_IO);
}

void gol_free(void* p) { std::free(p); }

gol_status gol_softmax_normalize(const double* logits, int w, int h, double* heatmap) {
  return guarded([&] {
    gol::LogitGrid grid;
    grid.width = w;
    grid.height = h;
    grid.values = unpack_heatmap(logits, w, h).values;
    pack_grid(gol::softmax_normalize(grid).values, heatmap);
  });
}

gol_status gol_edsnt_extract(const double* heatmap, int w, int h, double gaussian_norm[5]) {
  return guarded(
      [&] { pack_gaussian(gol::edsnt_extract(unpack_heatmap(heatmap, w, h)), gaussian_norm); });
}

gol_status gol_wasserstein(const double gaussian_pd[5], const double gaussian_gt[5],
                           double* value, double grad[5]) {
  return guarded([&] {
    gol::ParamGradient g;
    const double v = gol::wasserstein(unpack_gaussian(gaussian_pd, gol::Frame::Normalized),
                                      unpack_gaussian(gaussian_gt, gol::Frame::Normalized),
                                      grad != nullptr ? &g : nullptr);
    *value = v;
    if (grad != nullptr)
      for (int i = 0; i < 5; ++i) grad[i] = g(i);
  });
}

gol_status gol_js_heatmaps(const double* z_pd, const double* z_gt, int w, int h, double* value,
                           double* grad) {
  return guarded([&] {
    Eigen::ArrayXXd g;
    const double v = gol::js_heatmaps(unpack_heatmap(z_pd, w, h), unpack_heatmap(z_gt, w, h),
                                      grad != nullptr ? &g : nullptr);
    *value = v;
    if (grad != nullptr) pack_grid(g, grad);
  });
}

gol_status gol_evaluate_pair(const double pred_ellipse[5], const double gt_ellipse[5],
                             int supersample, int mhd_points, double out[5], int* degenerate) {
  return guarded([&] {
    const gol::MetricReport r = gol::evaluate_pair(unpack_ellipse(pred_ellipse),
                                                   unpack_ellipse(gt_ellipse), supersample,
                                                   mhd_points);
    out[0] = r.iou;
    out[1] = r.overlap;
    out[2] = r.dice;
    out[3] = r.rvd;
    out[4] = r.mhd;
    if (degenerate != nullptr) *degenerate = r.degenerate ? 1 : 0;
  });
}

gol_status gol_triangulate_ellipsoid(int n_views, const double* proj, const double* conics,
                                     double quadric[10]) {
  return guarded([&] {
    if (n_views < 1 || proj == nullptr || conics == nullptr) {
      throw std::invalid_argument("gol_triangulate_ellipsoid: bad arguments");
    }
    std::vector<gol::ViewObservation> views(n_views);
    for (int v = 0; v < n_views; ++v) {
      views[v].p = unpack_proj(proj + 12 * v);
      views[v].conic = unpack_conic(conics + 6 * v);
    }
    pack_quadric(gol::triangulate_ellipsoid(views), quadric);
  });
}

gol_status gol_decompose_dual_quadric(const double quadric[10], double center[3],
                                      double half_axes[3], double rotation[9]) {
  return guarded([&] {
    const gol::EllipsoidEstimate e = gol::decompose_dual_quadric(unpack_quadric(quadric));
    for (int i = 0; i < 3; ++i) {
      center[i] = e.center(i);
      half_axes[i] = e.half_axes(i);
      for (int j = 0; j < 3; ++j) rotation[3 * i + j] = e.orientation(i, j);
    }
  });
}

gol_status gol_compose_dual_quadric(const double center[3], const double half_axes[3],
                                    const double rotation[9], double quadric[10]) {
  return guarded([&] {
    pack_quadric(gol::compose_dual_quadric(unpack_estimate(center, half_axes, rotation)),
                 quadric);
  });
}

gol_status gol_reconstruction_errors(const double est_center[3], const double est_axes[3],
                                     const double est_rot[9], const double gt_center[3],
                                     const double gt_axes[3], const double gt_rot[9],
                                     double* position_cm, double* orientation_deg,
                                     double* size_cm) {
  return guarded([&] {
    const gol::ReconError e =
        gol::reconstruction_errors(unpack_estimate(est_center, est_axes, est_rot),
                                   unpack_estimate(gt_center, gt_axes, gt_rot));
    *position_cm = e.position_cm;
    *orientation_deg = e.orientation_deg;
    *size_cm = e.size_cm;
  });
}

gol_status gol_reprojection_residual(const double quadric[10], int n_views, const double* proj,
                                     const double* conics, double* residual) {
  return guarded([&] {
    std::vector<gol::ViewObservation> views(n_views);
    for (int v = 0; v < n_views; ++v) {
      views[v].p = unpack_proj(proj + 12 * v);
      views[v].conic = unpack_conic(conics + 6 * v);
    }
    *residual = gol::reprojection_residual(unpack_quadric(quadric), views);
  });
}

/* ---- fit ---- */

struct gol_fit_trace {
  gol::FitTrace trace;
};

void gol_fit_config_defaults(gol_fit_config* cfg) {
  const gol::FitConfig d;
  cfg->width = d.width;
  cfg->height = d.height;
  cfg->iterations = d.iterations;
  cfg->learning_rate = d.learning_rate;
  cfg->lambda = d.lambda;
  cfg->seed = d.seed;
  cfg->variant = GOL_LOSS_WJS;
}

gol_status gol_fit_run(const double target_gaussian_px[5], const gol_fit_config* cfg,
                       gol_fit_trace** out) {
  return guarded([&] {
    gol::FitConfig c;
    c.width = cfg->width;
    c.height = cfg->height;
    c.iterations = cfg->iterations;
    c.learning_rate = cfg->learning_rate;
    c.lambda = cfg->lambda;
    c.seed = cfg->seed;
    c.variant = cfg->variant == GOL_LOSS_W    ? gol::LossVariant::Wasserstein
                : cfg->variant == GOL_LOSS_JS ? gol::LossVariant::JensenShannon
                                              : gol::LossVariant::Combined;

    gol::LabelRecord target;
    target.gaussian = unpack_gaussian(target_gaussian_px, gol::Frame::Pixel);
    target.ellipse = gol::gaussian_to_ellipse(target.gaussian);
    target.heatmap_width = c.width;
    target.heatmap_height = c.height;
    target.truncation_fraction =
        gol::truncation_fraction(target.gaussian, c.width, c.height);

    auto trace = std::make_unique<gol_fit_trace>();
    trace->trace = gol::fit_heatmap(target, c);
    *out = trace.release();
  });
}

int gol_fit_trace_iterations(const gol_fit_trace* t) {
  return static_cast<int>(t->trace.losses.size());
}

double gol_fit_trace_loss(const gol_fit_trace* t, int iteration) {
  return t->trace.losses.at(iteration);
}

void gol_fit_trace_final_params(const gol_fit_trace* t, double gaussian_norm[5],
                                double gaussian_px[5], double ellipse[5]) {
  if (gaussian_norm != nullptr) pack_gaussian(t->trace.final_normalized, gaussian_norm);
  if (gaussian_px != nullptr) pack_gaussian(t->trace.final_pixel, gaussian_px);
  if (ellipse != nullptr) pack_ellipse(t->trace.final_ellipse, ellipse);
}

void gol_fit_trace_metrics(const gol_fit_trace* t, double metrics[5]) {
  metrics[0] = t->trace.report.iou;
  metrics[1] = t->trace.report.overlap;
  metrics[2] = t->trace.report.dice;
  metrics[3] = t->trace.report.rvd;
  metrics[4] = t->trace.report.mhd;
}

double gol_fit_trace_gradient_norm(const gol_fit_trace* t) {
  return t->trace.final_gradient_norm;
}

void gol_fit_trace_heatmap(const gol_fit_trace* t, double* heatmap) {
  pack_grid(t->trace.final_heatmap.values, heatmap);
}

void gol_fit_trace_free(gol_fit_trace* t) { delete t; }

}  // extern "C"
