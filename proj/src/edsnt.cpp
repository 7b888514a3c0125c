#include "gol/edsnt.hpp"

#include <cmath>

#include "gol/gaussian_occupancy.hpp"

namespace gol {

HeatmapGrid softmax_normalize(const LogitGrid& logits) {
  if (logits.width < 1 || logits.height < 1 ||
      logits.values.rows() != logits.height || logits.values.cols() != logits.width) {
    throw std::invalid_argument("softmax_normalize: inconsistent grid dimensions");
  }
  if (!logits.values.isFinite().all()) {
    throw std::invalid_argument("softmax_normalize: non-finite logits");
  }
  HeatmapGrid z;
  z.width = logits.width;
  z.height = logits.height;
  const double shift = logits.values.maxCoeff();
  z.values = (logits.values - shift).exp();
  z.values /= z.values.sum();
  return z;
}

GaussianParams edsnt_extract(const HeatmapGrid& z) {
  const double total = z.values.sum();
  if (std::abs(total - 1.0) > 1e-4) {
    throw std::invalid_argument("edsnt_extract: heatmap is not normalized");
  }
  const CoordGrids grids = coord_grids(z.width, z.height);
  GaussianParams out;
  out.frame = Frame::Normalized;
  const double mx = (z.values * grids.x).sum();
  const double my = (z.values * grids.y).sum();
  const Eigen::ArrayXXd dx = grids.x - mx;
  const Eigen::ArrayXXd dy = grids.y - my;
  out.mu = Eigen::Vector2d(mx, my);
  out.sigma(0, 0) = (z.values * dx * dx).sum();
  out.sigma(1, 1) = (z.values * dy * dy).sum();
  out.sigma(0, 1) = out.sigma(1, 0) = (z.values * dx * dy).sum();
  return out;
}

Eigen::ArrayXXd edsnt_backward(const HeatmapGrid& z, const Eigen::Matrix<double, 5, 1>& upstream) {
  const CoordGrids grids = coord_grids(z.width, z.height);
  const double mx = (z.values * grids.x).sum();
  const double my = (z.values * grids.y).sum();
  const Eigen::ArrayXXd dx = grids.x - mx;
  const Eigen::ArrayXXd dy = grids.y - my;
  // The chain terms through mu vanish because sum z*(X-mu_x) = 0 for a
  // normalized heatmap, so each output's gradient is its own integrand.
  return upstream(0) * grids.x + upstream(1) * grids.y + upstream(2) * dx * dx +
         upstream(3) * dy * dy + upstream(4) * dx * dy;
}

Eigen::ArrayXXd softmax_backward(const HeatmapGrid& z, const Eigen::ArrayXXd& grad_z) {
  const double dot = (z.values * grad_z).sum();
  return z.values * (grad_z - dot);
}

Eigen::ArrayXXd edsnt_backward_logits(const LogitGrid& logits,
                                      const Eigen::Matrix<double, 5, 1>& upstream) {
  const HeatmapGrid z = softmax_normalize(logits);
  return softmax_backward(z, edsnt_backward(z, upstream));
}

}  // namespace gol
