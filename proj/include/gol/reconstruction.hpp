#pragma once

#include <vector>

#include "gol/types.hpp"

namespace gol {

struct ViewObservation {
  Eigen::Matrix<double, 3, 4> p;
  DualConic conic;
};

struct EllipsoidEstimate {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();          // meters
  Eigen::Vector3d half_axes = Eigen::Vector3d::Ones();       // sorted descending
  Eigen::Matrix3d orientation = Eigen::Matrix3d::Identity();  // det +1
};

struct ReconError {
  double position_cm = 0.0;
  double orientation_deg = 0.0;
  double size_cm = 0.0;
};

// Null-space least-squares triangulation of a dual quadric from >= 3 views,
// one scale unknown per observed conic. Result normalized to Q(3,3) = -1.
DualQuadric triangulate_ellipsoid(const std::vector<ViewObservation>& views);

// Centre, sorted half-axes and orientation of an ellipsoid dual quadric.
EllipsoidEstimate decompose_dual_quadric(const DualQuadric& q);

DualQuadric compose_dual_quadric(const EllipsoidEstimate& e);

// Position in cm, size as mean absolute difference of full sorted axes in cm,
// orientation as the minimal geodesic angle over the axis sign/permutation
// symmetries consistent with the sorted axis lengths.
ReconError reconstruction_errors(const EllipsoidEstimate& est, const EllipsoidEstimate& gt);

// Max over views of the relative Frobenius distance between the reprojected
// and observed conics, both normalized to unit Frobenius norm.
double reprojection_residual(const DualQuadric& q, const std::vector<ViewObservation>& views);

}  // namespace gol
