#pragma once

#include "gol/edsnt.hpp"
#include "gol/types.hpp"

namespace gol {

struct LossValue {
  double total = 0.0;
  double wasserstein_term = 0.0;
  double js_term = 0.0;
  double lambda = 0.0;
};

// Gradient with respect to the prediction parameters, packed as
// (mu_x, mu_y, Sigma_xx, Sigma_yy, Sigma_xy).
using ParamGradient = Eigen::Matrix<double, 5, 1>;

// Closed-form square root of a 2x2 SPD matrix.
Eigen::Matrix2d spd_sqrt_2x2(const Eigen::Matrix2d& m);

// Squared 2-Wasserstein distance between Gaussians, with analytic gradient
// with respect to the prediction (first argument).
double wasserstein(const GaussianParams& pred, const GaussianParams& gt,
                   ParamGradient* grad = nullptr);

double kl_heatmaps(const HeatmapGrid& d1, const HeatmapGrid& d2);

// JS divergence between heatmaps; optional gradient w.r.t. the prediction
// values (first argument).
double js_heatmaps(const HeatmapGrid& pred, const HeatmapGrid& gt,
                   Eigen::ArrayXXd* grad = nullptr);

enum class LossVariant { Wasserstein, JensenShannon, Combined };

// Full chain: softmax -> E-DSNT -> Wasserstein on normalized parameters,
// plus lambda * JS between the softmax heatmap and the label heatmap.
// gt_normalized must be in the normalized frame at the logits' resolution;
// gt_heatmap is the rendered label heatmap.
LossValue total_loss(const LogitGrid& logits, const GaussianParams& gt_normalized,
                     const HeatmapGrid& gt_heatmap, double lambda,
                     Eigen::ArrayXXd* grad_logits = nullptr,
                     LossVariant variant = LossVariant::Combined);

}  // namespace gol
