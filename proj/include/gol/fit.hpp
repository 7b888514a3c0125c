#pragma once

#include <cstdint>
#include <vector>

#include "gol/losses.hpp"
#include "gol/metrics.hpp"
#include "gol/types.hpp"

namespace gol {

struct FitConfig {
  int width = 64;
  int height = 64;
  int iterations = 2000;
  // Chosen by a coarse sweep over {100, 200, 400, 600, 800} on well-contained
  // 64x64 targets: 800 oscillates, <= 400 converges visibly slower.
  double learning_rate = 600.0;
  double lambda = 1.0;
  std::uint32_t seed = 0;
  LossVariant variant = LossVariant::Combined;
};

struct FitTrace {
  std::vector<double> losses;         // per iteration, before the update
  GaussianParams final_normalized;
  GaussianParams final_pixel;
  EllipseGeom final_ellipse;
  MetricReport report;                // vs target ellipse
  double final_gradient_norm = 0.0;
  HeatmapGrid final_heatmap;
};

// Plain gradient descent on raw logits through softmax -> E-DSNT -> loss,
// toward the target label's Gaussian.
FitTrace fit_heatmap(const LabelRecord& target, const FitConfig& cfg);

struct VariantComparison {
  FitTrace wasserstein;
  FitTrace combined;
  FitTrace jensen_shannon;
};

// All three loss variants from the same seed.
VariantComparison compare_variants(const LabelRecord& target, const FitConfig& base);

}  // namespace gol
