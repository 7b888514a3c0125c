#include "gol/reconstruction.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace gol {

namespace {

// Upper-triangle, row-wise.
Eigen::Matrix<double, 6, 1> vech3(const Eigen::Matrix3d& m) {
  Eigen::Matrix<double, 6, 1> v;
  v << m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2);
  return v;
}

Eigen::Matrix4d sym4_basis(int k) {
  static const int idx[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                 {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
  Eigen::Matrix4d e = Eigen::Matrix4d::Zero();
  e(idx[k][0], idx[k][1]) = 1.0;
  e(idx[k][1], idx[k][0]) = 1.0;
  return e;
}

Eigen::Matrix4d quadric_from_vech(const Eigen::Matrix<double, 10, 1>& q) {
  Eigen::Matrix4d m;
  m << q(0), q(1), q(2), q(3),
       q(1), q(4), q(5), q(6),
       q(2), q(5), q(7), q(8),
       q(3), q(6), q(8), q(9);
  return m;
}

}  // namespace

DualQuadric triangulate_ellipsoid(const std::vector<ViewObservation>& views) {
  const int n = static_cast<int>(views.size());
  if (n < 3) {
    throw std::invalid_argument("triangulate_ellipsoid: at least 3 views required");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6 * n, 10 + n);
  for (int v = 0; v < n; ++v) {
    const auto& p = views[v].p;
    for (int k = 0; k < 10; ++k) {
      m.block<6, 1>(6 * v, k) = vech3(p * sym4_basis(k) * p.transpose());
    }
    const double scale = views[v].conic.norm();
    if (scale < 1e-15) {
      throw std::invalid_argument("triangulate_ellipsoid: zero conic");
    }
    m.block<6, 1>(6 * v, 10 + v) = -vech3(views[v].conic / scale);
  }

  // Equilibrate columns: the quadric-basis columns scale with f^2 * pixel^2
  // while the normalized conic columns are O(1); without this the rank test
  // and the nullspace both drown in the scale disparity.
  Eigen::VectorXd col_scale(10 + n);
  for (int k = 0; k < 10 + n; ++k) {
    col_scale(k) = m.col(k).norm();
    if (col_scale(k) < 1e-15) {
      throw std::runtime_error("triangulate_ellipsoid: degenerate view configuration");
    }
    m.col(k) /= col_scale(k);
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const int last = static_cast<int>(sv.size()) - 1;
  // A second near-zero singular value means the solution is not unique.
  if (sv(0) <= 0.0 || sv(last - 1) < 1e-10 * sv(0)) {
    throw std::runtime_error("triangulate_ellipsoid: degenerate view configuration");
  }
  Eigen::Matrix<double, 10, 1> q_vech = svd.matrixV().col(last).head<10>();
  q_vech.array() /= col_scale.head<10>().array();
  Eigen::Matrix4d q = quadric_from_vech(q_vech);
  if (std::abs(q(3, 3)) < 1e-12 * q.norm()) {
    throw std::runtime_error("triangulate_ellipsoid: degenerate view configuration");
  }
  q /= -q(3, 3);
  return q;
}

EllipsoidEstimate decompose_dual_quadric(const DualQuadric& q_in) {
  if (std::abs(q_in(3, 3)) < 1e-15) {
    throw std::runtime_error("decompose_dual_quadric: degenerate quadric");
  }
  const Eigen::Matrix4d q = q_in / -q_in(3, 3);  // Q(3,3) = -1
  const Eigen::Vector3d center = -q.block<3, 1>(0, 3);
  const Eigen::Matrix3d centred = q.topLeftCorner<3, 3>() + center * center.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(0.5 * (centred + centred.transpose()));
  if (eig.eigenvalues()(0) <= 0.0) {
    throw std::runtime_error("decompose_dual_quadric: not an ellipsoid");
  }
  EllipsoidEstimate e;
  e.center = center;
  // Eigen returns ascending order; flip to descending half-axes.
  for (int i = 0; i < 3; ++i) {
    e.half_axes(i) = std::sqrt(eig.eigenvalues()(2 - i));
    e.orientation.col(i) = eig.eigenvectors().col(2 - i);
  }
  if (e.orientation.determinant() < 0.0) {
    e.orientation.col(2) *= -1.0;
  }
  return e;
}

DualQuadric compose_dual_quadric(const EllipsoidEstimate& e) {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) d(i, i) = e.half_axes(i) * e.half_axes(i);
  const Eigen::Matrix3d m = e.orientation * d * e.orientation.transpose();
  DualQuadric q;
  q.topLeftCorner<3, 3>() = m - e.center * e.center.transpose();
  q.block<3, 1>(0, 3) = -e.center;
  q.block<1, 3>(3, 0) = -e.center.transpose();
  q(3, 3) = -1.0;
  return q;
}

ReconError reconstruction_errors(const EllipsoidEstimate& est, const EllipsoidEstimate& gt) {
  ReconError err;
  err.position_cm = (est.center - gt.center).norm() * 100.0;
  err.size_cm = 2.0 * (est.half_axes - gt.half_axes).cwiseAbs().mean() * 100.0;

  // Frames are defined up to proper signed permutations that only permute
  // axes of (numerically) equal length.
  const double axis_tol = 1e-9 * std::max(gt.half_axes(0), 1.0);
  const Eigen::Matrix3d rel = gt.orientation.transpose() * est.orientation;
  double best = M_PI;
  int perm[3] = {0, 1, 2};
  std::sort(perm, perm + 3);
  do {
    bool compatible = true;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(gt.half_axes(i) - gt.half_axes(perm[i])) > axis_tol) compatible = false;
    }
    if (!compatible) continue;
    for (int signs = 0; signs < 8; ++signs) {
      Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 3; ++i) {
        s(perm[i], i) = (signs >> i) & 1 ? -1.0 : 1.0;
      }
      if (s.determinant() < 0.0) continue;
      const double c = std::clamp(0.5 * ((rel * s.transpose()).trace() - 1.0), -1.0, 1.0);
      best = std::min(best, std::acos(c));
    }
  } while (std::next_permutation(perm, perm + 3));
  err.orientation_deg = best * 180.0 / M_PI;
  return err;
}

double reprojection_residual(const DualQuadric& q, const std::vector<ViewObservation>& views) {
  double worst = 0.0;
  for (const auto& view : views) {
    Eigen::Matrix3d proj = view.p * q * view.p.transpose();
    proj /= proj.norm();
    const Eigen::Matrix3d obs = view.conic / view.conic.norm();
    worst = std::max(worst, std::min((proj - obs).norm(), (proj + obs).norm()));
  }
  return worst;
}

}  // namespace gol
