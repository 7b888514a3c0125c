/* C API for the 3D-aware Gaussian occupancy label toolkit.
 *
 * Conventions:
 *  - gaussian[5]  = (mu_x, mu_y, sigma_xx, sigma_yy, sigma_xy)
 *  - ellipse[5]   = (x0, y0, a, b, theta), a >= b > 0, theta in [0, pi)
 *  - rotation[9]  = 3x3 row-major
 *  - proj[12]     = 3x4 row-major projection matrix
 *  - conic[6]     = vech of the symmetric dual conic: (c00,c01,c02,c11,c12,c22)
 *  - quadric[10]  = vech of the symmetric dual quadric, upper triangle row-wise
 *  - heatmaps     = row-major, top row first, height*width entries
 *  - quaternions  = scalar-first Hamilton (w, x, y, z)
 *
 * All functions return GOL_OK on success; on failure gol_last_error() holds a
 * message for the calling thread.
 */
#ifndef GOL_GOL_H
#define GOL_GOL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gol_status {
  GOL_OK = 0,
  GOL_ERR_INVALID = 1, /* bad arguments / malformed input */
  GOL_ERR_NUMERIC = 2, /* degeneracy or numeric failure */
  GOL_ERR_IO = 3       /* file I/O failure */
} gol_status;

const char* gol_last_error(void);

typedef struct gol_intrinsics {
  double fx, fy, cx, cy;
} gol_intrinsics;

/* ---- projective conic geometry ---- */

gol_status gol_quat_to_rotation(const double quat[4], double rotation[9]);
gol_status gol_gaussian_to_ellipse(const double gaussian[5], double ellipse[5]);
gol_status gol_ellipse_to_gaussian(const double ellipse[5], double gaussian[5]);
/* bbox = (xc, yc, width, height) */
gol_status gol_ellipse_from_bbox(const double bbox[4], double ellipse[5]);
/* half_dims: ellipsoid half-axes in meters */
gol_status gol_projection_matrix(const gol_intrinsics* k, const double quat[4],
                                 const double translation[3], double proj[12]);
gol_status gol_project_ellipsoid(const double quadric[10], const double proj[12],
                                 double conic[6]);
gol_status gol_conic_to_gaussian(const double conic[6], double gaussian[5]);
gol_status gol_gaussian_to_conic(const double gaussian[5], double conic[6]);

/* ---- labels and heatmaps ---- */

gol_status gol_label_from_pose(const gol_intrinsics* k, const double quat[4],
                               const double translation[3], const double half_dims[3],
                               int image_w, int image_h, int heatmap_w, int heatmap_h,
                               double gaussian_px[5], double ellipse[5], double* truncation);
gol_status gol_render_heatmap(const double gaussian_px[5], int w, int h, double* heatmap);
gol_status gol_truncation_fraction(const double gaussian_px[5], int w, int h, double* out);
gol_status gol_pixel_to_normalized(const double gaussian_px[5], int w, int h,
                                   double gaussian_norm[5]);
gol_status gol_normalized_to_pixel(const double gaussian_norm[5], int w, int h,
                                   double gaussian_px[5]);

gol_status gol_gohm_write(const char* path, int w, int h, const double* heatmap);
gol_status gol_gohm_read(const char* path, int* w, int* h, double** heatmap);
void gol_free(void* p);

/* ---- E-DSNT ---- */

gol_status gol_softmax_normalize(const double* logits, int w, int h, double* heatmap);
/* gaussian_norm: normalized-frame parameters extracted from the heatmap */
gol_status gol_edsnt_extract(const double* heatmap, int w, int h, double gaussian_norm[5]);

/* ---- losses ---- */

gol_status gol_wasserstein(const double gaussian_pd[5], const double gaussian_gt[5],
                           double* value, double grad[5]);
gol_status gol_js_heatmaps(const double* z_pd, const double* z_gt, int w, int h, double* value,
                           double* grad);

/* ---- metrics ---- */

/* out[5] = (iou, overlap, dice, rvd, mhd); degenerate != 0 flags sub-pixel axes */
gol_status gol_evaluate_pair(const double pred_ellipse[5], const double gt_ellipse[5],
                             int supersample, int mhd_points, double out[5], int* degenerate);

/* ---- reconstruction ---- */

gol_status gol_triangulate_ellipsoid(int n_views, const double* proj /* n*12 */,
                                     const double* conics /* n*6 */, double quadric[10]);
gol_status gol_decompose_dual_quadric(const double quadric[10], double center[3],
                                      double half_axes[3], double rotation[9]);
gol_status gol_compose_dual_quadric(const double center[3], const double half_axes[3],
                                    const double rotation[9], double quadric[10]);
gol_status gol_reconstruction_errors(const double est_center[3], const double est_axes[3],
                                     const double est_rot[9], const double gt_center[3],
                                     const double gt_axes[3], const double gt_rot[9],
                                     double* position_cm, double* orientation_deg,
                                     double* size_cm);
gol_status gol_reprojection_residual(const double quadric[10], int n_views, const double* proj,
                                     const double* conics, double* residual);

/* ---- fit harness ---- */

typedef enum gol_loss_variant {
  GOL_LOSS_W = 0,
  GOL_LOSS_JS = 1,
  GOL_LOSS_WJS = 2
} gol_loss_variant;

typedef struct gol_fit_config {
  int width, height;
  int iterations;
  double learning_rate;
  double lambda;
  uint32_t seed;
  gol_loss_variant variant;
} gol_fit_config;

void gol_fit_config_defaults(gol_fit_config* cfg);

typedef struct gol_fit_trace gol_fit_trace; /* opaque */

/* target gaussian is pixel-frame at (cfg->width x cfg->height) resolution */
gol_status gol_fit_run(const double target_gaussian_px[5], const gol_fit_config* cfg,
                       gol_fit_trace** out);
int gol_fit_trace_iterations(const gol_fit_trace* t);
double gol_fit_trace_loss(const gol_fit_trace* t, int iteration);
void gol_fit_trace_final_params(const gol_fit_trace* t, double gaussian_norm[5],
                                double gaussian_px[5], double ellipse[5]);
/* metrics[5] = (iou, overlap, dice, rvd, mhd) of the final ellipse vs target */
void gol_fit_trace_metrics(const gol_fit_trace* t, double metrics[5]);
double gol_fit_trace_gradient_norm(const gol_fit_trace* t);
/* heatmap buffer must hold width*height doubles */
void gol_fit_trace_heatmap(const gol_fit_trace* t, double* heatmap);
void gol_fit_trace_free(gol_fit_trace* t);

#ifdef __cplusplus
}
#endif

#endif /* GOL_GOL_H */
