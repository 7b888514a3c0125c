#pragma once

#include "gol/types.hpp"

namespace gol {

// Normalized coordinate grids: X_{i,j} = (2j-(W+1))/W, Y_{i,j} = (2i-(H+1))/H
// with 1-based i, j.
CoordGrids coord_grids(int width, int height);

GaussianParams pixel_to_normalized(const GaussianParams& g, int width, int height);
GaussianParams normalized_to_pixel(const GaussianParams& g, int width, int height);

// Bivariate Gaussian PDF sampled at pixel centres, renormalized to sum 1.
HeatmapGrid render_gaussian_heatmap(const GaussianParams& g, int width, int height);

// Share of the analytic Gaussian mass falling outside the grid, in [0, 1].
double truncation_fraction(const GaussianParams& g, int width, int height);

// Full label from pose + half-dims + intrinsics. Intrinsics are rescaled by
// (heatmap/image) before projection; the stored Gaussian is in pixel frame at
// heatmap resolution.
LabelRecord labels_from_pose(const Intrinsics& k, const Pose& pose, const EllipsoidDims& dims,
                             int image_width, int image_height, int heatmap_width,
                             int heatmap_height, const std::string& id = "");

}  // namespace gol
