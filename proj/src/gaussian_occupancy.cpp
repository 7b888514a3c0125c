#include "gol/gaussian_occupancy.hpp"

#include <cmath>

#include "gol/conic_geometry.hpp"

namespace gol {

CoordGrids coord_grids(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("coord_grids: grid dimensions must be >= 1");
  }
  CoordGrids grids;
  grids.x.resize(height, width);
  grids.y.resize(height, width);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      grids.x(i, j) = (2.0 * (j + 1) - (width + 1)) / width;
      grids.y(i, j) = (2.0 * (i + 1) - (height + 1)) / height;
    }
  }
  return grids;
}

GaussianParams pixel_to_normalized(const GaussianParams& g, int width, int height) {
  if (g.frame != Frame::Pixel) {
    throw std::invalid_argument("pixel_to_normalized: expected pixel-frame input");
  }
  GaussianParams out;
  out.mu(0) = (2.0 * g.mu(0) - (width + 1)) / width;
  out.mu(1) = (2.0 * g.mu(1) - (height + 1)) / height;
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = 2.0 / width;
  d(1, 1) = 2.0 / height;
  out.sigma = d * g.sigma * d;
  out.frame = Frame::Normalized;
  return out;
}

GaussianParams normalized_to_pixel(const GaussianParams& g, int width, int height) {
  if (g.frame != Frame::Normalized) {
    throw std::invalid_argument("normalized_to_pixel: expected normalized-frame input");
  }
  GaussianParams out;
  out.mu(0) = 0.5 * (g.mu(0) * width + (width + 1));
  out.mu(1) = 0.5 * (g.mu(1) * height + (height + 1));
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = 0.5 * width;
  d(1, 1) = 0.5 * height;
  out.sigma = d * g.sigma * d;
  out.frame = Frame::Pixel;
  return out;
}

namespace {

// Raw PDF samples at pixel centres; sum approximates the in-grid mass
// (cell area is 1 in pixel units).
Eigen::ArrayXXd sample_pdf(const GaussianParams& g, int width, int height) {
  if (g.frame != Frame::Pixel) {
    throw std::invalid_argument("heatmap rendering expects pixel-frame parameters");
  }
  double l1, l2;
  eig2x2_sym(g.sigma, l1, l2);
  if (l2 <= 0.0) {
    throw std::invalid_argument("heatmap rendering: covariance not positive-definite");
  }
  const double det = g.sigma.determinant();
  const Eigen::Matrix2d inv = g.sigma.inverse();
  const double norm = 1.0 / (2.0 * M_PI * std::sqrt(det));
  Eigen::ArrayXXd values(height, width);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const Eigen::Vector2d d(j + 1 - g.mu(0), i + 1 - g.mu(1));
      values(i, j) = norm * std::exp(-0.5 * d.dot(inv * d));
    }
  }
  return values;
}

}  // namespace

HeatmapGrid render_gaussian_heatmap(const GaussianParams& g, int width, int height) {
  HeatmapGrid grid;
  grid.width = width;
  grid.height = height;
  grid.values = sample_pdf(g, width, height);
  const double total = grid.values.sum();
  if (total <= 0.0) {
    throw std::runtime_error("render_gaussian_heatmap: zero in-grid mass");
  }
  grid.values /= total;
  return grid;
}

double truncation_fraction(const GaussianParams& g, int width, int height) {
  const double mass = sample_pdf(g, width, height).sum();
  return std::min(std::max(1.0 - mass, 0.0), 1.0);
}

LabelRecord labels_from_pose(const Intrinsics& k, const Pose& pose, const EllipsoidDims& dims,
                             int image_width, int image_height, int heatmap_width,
                             int heatmap_height, const std::string& id) {
  if (heatmap_width > image_width || heatmap_height > image_height) {
    throw std::invalid_argument("labels_from_pose: heatmap size exceeds image size");
  }
  const double max_half = std::max(dims.a, std::max(dims.b, dims.c));
  if (pose.translation(2) <= max_half) {
    throw std::runtime_error("labels_from_pose: object centre behind or at camera plane");
  }
  Intrinsics scaled = k;
  const double sx = static_cast<double>(heatmap_width) / image_width;
  const double sy = static_cast<double>(heatmap_height) / image_height;
  scaled.fx *= sx;
  scaled.fy *= sy;
  scaled.cx *= sx;
  scaled.cy *= sy;

  const DualQuadric q = ellipsoid_dual_quadric(dims);
  const auto p = projection_matrix(scaled, pose);
  const DualConic c = project_ellipsoid(q, p);

  LabelRecord rec;
  rec.id = id;
  rec.gaussian = conic_to_gaussian(c);
  rec.ellipse = gaussian_to_ellipse(rec.gaussian);
  rec.truncation_fraction = truncation_fraction(rec.gaussian, heatmap_width, heatmap_height);
  rec.pose = pose;
  rec.intrinsics = k;
  rec.dims = dims;
  rec.image_width = image_width;
  rec.image_height = image_height;
  rec.heatmap_width = heatmap_width;
  rec.heatmap_height = heatmap_height;
  return rec;
}

}  // namespace gol
