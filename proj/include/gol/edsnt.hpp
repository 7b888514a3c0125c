#pragma once

#include "gol/types.hpp"

namespace gol {

struct LogitGrid {
  int width = 0;
  int height = 0;
  Eigen::ArrayXXd values;  // unconstrained reals
};

// Flattening softmax over the whole grid.
HeatmapGrid softmax_normalize(const LogitGrid& logits);

// Five outputs in the normalized coordinate frame:
// mu = (<Z,X>, <Z,Y>), Sigma from centred second moments.
GaussianParams edsnt_extract(const HeatmapGrid& z);

// Gradient of sum_k upstream_k * out_k with respect to heatmap values,
// treating the heatmap entries as free variables (no re-normalization).
// upstream order: (mu_x, mu_y, Sigma_xx, Sigma_yy, Sigma_xy).
Eigen::ArrayXXd edsnt_backward(const HeatmapGrid& z, const Eigen::Matrix<double, 5, 1>& upstream);

// Same, chained through the softmax Jacobian onto the logits.
Eigen::ArrayXXd edsnt_backward_logits(const LogitGrid& logits,
                                      const Eigen::Matrix<double, 5, 1>& upstream);

// Gradient of sum_ij g_z(i,j) * z(i,j) through the softmax: z .* (g - <z,g>).
Eigen::ArrayXXd softmax_backward(const HeatmapGrid& z, const Eigen::ArrayXXd& grad_z);

}  // namespace gol
