#include "gol/fit.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gol/conic_geometry.hpp"
#include "gol/gaussian_occupancy.hpp"

namespace gol {

FitTrace fit_heatmap(const LabelRecord& target, const FitConfig& cfg) {
  if (cfg.iterations < 1 || cfg.learning_rate <= 0.0) {
    throw std::invalid_argument("fit_heatmap: invalid iterations or learning rate");
  }
  const int w = cfg.width, h = cfg.height;
  GaussianParams gt_px = target.gaussian;
  if (target.heatmap_width != w || target.heatmap_height != h) {
    throw std::invalid_argument("fit_heatmap: target resolution does not match config");
  }
  const GaussianParams gt_norm = pixel_to_normalized(gt_px, w, h);
  const HeatmapGrid gt_heatmap = render_gaussian_heatmap(gt_px, w, h);

  LogitGrid logits;
  logits.width = w;
  logits.height = h;
  logits.values.resize(h, w);
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> init(-0.01, 0.01);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      logits.values(i, j) = init(rng);
    }
  }

  FitTrace trace;
  trace.losses.reserve(cfg.iterations);
  Eigen::ArrayXXd grad;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    const LossValue loss =
        total_loss(logits, gt_norm, gt_heatmap, cfg.lambda, &grad, cfg.variant);
    if (!std::isfinite(loss.total) || !grad.isFinite().all()) {
      throw std::runtime_error("fit_heatmap: divergence at iteration " + std::to_string(iter));
    }
    trace.losses.push_back(loss.total);
    logits.values -= cfg.learning_rate * grad;
  }

  const LossValue final_loss =
      total_loss(logits, gt_norm, gt_heatmap, cfg.lambda, &grad, cfg.variant);
  trace.final_gradient_norm = std::sqrt((grad * grad).sum());
  trace.final_heatmap = softmax_normalize(logits);
  trace.final_normalized = edsnt_extract(trace.final_heatmap);
  trace.final_pixel = normalized_to_pixel(trace.final_normalized, w, h);
  trace.final_ellipse = gaussian_to_ellipse(trace.final_pixel);
  trace.report = evaluate_pair(trace.final_ellipse, target.ellipse);
  (void)final_loss;
  return trace;
}

VariantComparison compare_variants(const LabelRecord& target, const FitConfig& base) {
  VariantComparison out;
  FitConfig cfg = base;
  cfg.variant = LossVariant::Wasserstein;
  out.wasserstein = fit_heatmap(target, cfg);
  cfg.variant = LossVariant::Combined;
  out.combined = fit_heatmap(target, cfg);
  cfg.variant = LossVariant::JensenShannon;
  out.jensen_shannon = fit_heatmap(target, cfg);
  return out;
}

}  // namespace gol
