#include "gol/conic_geometry.hpp"

#include <cmath>

namespace gol {

namespace {

constexpr double kDegenerateConicEps = 1e-15;
constexpr double kCircleTieBreak = 1e-12;

}  // namespace

Eigen::Matrix3d quat_to_rotation(const Eigen::Vector4d& q) {
  const double n = q.norm();
  if (n < 1e-12) {
    throw std::invalid_argument("quat_to_rotation: zero-norm quaternion");
  }
  const double w = q(0) / n, x = q(1) / n, y = q(2) / n, z = q(3) / n;
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

DualQuadric ellipsoid_dual_quadric(const EllipsoidDims& dims) {
  if (dims.a <= 0.0 || dims.b <= 0.0 || dims.c <= 0.0) {
    throw std::invalid_argument("ellipsoid_dual_quadric: non-positive half-axis");
  }
  DualQuadric q = DualQuadric::Zero();
  q(0, 0) = dims.a * dims.a;
  q(1, 1) = dims.b * dims.b;
  q(2, 2) = dims.c * dims.c;
  q(3, 3) = -1.0;
  return q;
}

Eigen::Matrix<double, 3, 4> projection_matrix(const Intrinsics& k, const Pose& pose) {
  if (k.fx <= 0.0 || k.fy <= 0.0) {
    throw std::invalid_argument("projection_matrix: non-positive focal length");
  }
  Eigen::Matrix3d km;
  km << k.fx, 0.0, k.cx, 0.0, k.fy, k.cy, 0.0, 0.0, 1.0;
  Eigen::Matrix<double, 3, 4> rt;
  rt.leftCols<3>() = pose.rotation;
  rt.col(3) = pose.translation;
  return km * rt;
}

DualConic project_ellipsoid(const DualQuadric& q, const Eigen::Matrix<double, 3, 4>& p) {
  DualConic c = p * q * p.transpose();
  c = 0.5 * (c + c.transpose());  // kill rounding asymmetry
  if (std::abs(c(2, 2)) < kDegenerateConicEps) {
    throw std::runtime_error("project_ellipsoid: degenerate projection");
  }
  // Validate that the normalized conic carries a PD covariance block.
  conic_to_gaussian(c);
  return c;
}

GaussianParams conic_to_gaussian(const DualConic& c) {
  const double s = c(2, 2);
  if (std::abs(s) < kDegenerateConicEps) {
    throw std::runtime_error("conic_to_gaussian: degenerate conic");
  }
  const DualConic cn = c / (-s);  // entry (3,3) becomes -1
  const double x0 = -cn(0, 2);
  const double y0 = -cn(1, 2);
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 2) = -x0;
  t(1, 2) = -y0;
  const Eigen::Matrix3d centered = t * cn * t.transpose();
  const Eigen::Matrix2d sigma = 0.5 * (centered.topLeftCorner<2, 2>() +
                                       centered.topLeftCorner<2, 2>().transpose());
  double l1, l2;
  eig2x2_sym(sigma, l1, l2);
  if (l2 <= 0.0) {
    throw std::runtime_error("conic_to_gaussian: degenerate conic");
  }
  GaussianParams g;
  g.mu = Eigen::Vector2d(x0, y0);
  g.sigma = sigma;
  g.frame = Frame::Pixel;
  return g;
}

DualConic gaussian_to_conic(const GaussianParams& g) {
  DualConic c;
  c.topLeftCorner<2, 2>() = g.sigma - g.mu * g.mu.transpose();
  c(0, 2) = c(2, 0) = -g.mu(0);
  c(1, 2) = c(2, 1) = -g.mu(1);
  c(2, 2) = -1.0;
  return c;
}

void eig2x2_sym(const Eigen::Matrix2d& m, double& lambda1, double& lambda2) {
  const double tr = m(0, 0) + m(1, 1);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
  lambda1 = 0.5 * tr + disc;
  lambda2 = 0.5 * tr - disc;
}

EllipseGeom gaussian_to_ellipse(const GaussianParams& g) {
  double l1, l2;
  eig2x2_sym(g.sigma, l1, l2);
  if (l2 <= 0.0) {
    throw std::invalid_argument("gaussian_to_ellipse: covariance not positive-definite");
  }
  EllipseGeom e;
  e.x0 = g.mu(0);
  e.y0 = g.mu(1);
  e.a = std::sqrt(l1);
  e.b = std::sqrt(l2);
  if (l1 - l2 < kCircleTieBreak * std::max(l1, 1.0)) {
    e.theta = 0.0;  // circle: orientation undefined
    return e;
  }
  const double sxx = g.sigma(0, 0), syy = g.sigma(1, 1), sxy = g.sigma(0, 1);
  // Major-axis direction: 2*theta = atan2(2 sxy, sxx - syy). The common
  // (l1 - l2) factor cancels inside atan2, so this stays well-conditioned
  // for near-circles where the explicit eigenvector does not.
  double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  if (theta < 0.0) theta += M_PI;
  if (theta >= M_PI) theta -= M_PI;
  e.theta = theta;
  return e;
}

GaussianParams ellipse_to_gaussian(const EllipseGeom& e) {
  if (e.a <= 0.0 || e.b <= 0.0 || e.a < e.b) {
    throw std::invalid_argument("ellipse_to_gaussian: invalid semi-axes");
  }
  const double c = std::cos(e.theta), s = std::sin(e.theta);
  Eigen::Matrix2d rot;
  rot << c, -s, s, c;
  Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
  d(0, 0) = e.a * e.a;
  d(1, 1) = e.b * e.b;
  GaussianParams g;
  g.mu = Eigen::Vector2d(e.x0, e.y0);
  g.sigma = rot * d * rot.transpose();
  g.sigma = 0.5 * (g.sigma + g.sigma.transpose());
  g.frame = Frame::Pixel;
  return g;
}

EllipseGeom ellipse_from_bbox(const BoundingBox& box) {
  if (box.width <= 0.0 || box.height <= 0.0) {
    throw std::invalid_argument("ellipse_from_bbox: non-positive box dimensions");
  }
  EllipseGeom e;
  e.x0 = box.xc;
  e.y0 = box.yc;
  e.a = 0.5 * std::max(box.width, box.height);
  e.b = 0.5 * std::min(box.width, box.height);
  e.theta = (box.width >= box.height) ? 0.0 : M_PI / 2.0;
  return e;
}

}  // namespace gol
