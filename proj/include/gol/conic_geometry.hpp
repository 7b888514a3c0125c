#pragma once

#include <Eigen/Dense>

#include "gol/types.hpp"

namespace gol {

// Unit quaternion (scalar-first, Hamilton) to rotation matrix. The
// quaternion is renormalized internally; a zero-norm input throws.
Eigen::Matrix3d quat_to_rotation(const Eigen::Vector4d& q);

// Q* = diag(a'^2, b'^2, c'^2, -1).
DualQuadric ellipsoid_dual_quadric(const EllipsoidDims& dims);

// P = K [R | T].
Eigen::Matrix<double, 3, 4> projection_matrix(const Intrinsics& k, const Pose& pose);

// C* = P Q* P^T, validated to represent a real non-degenerate ellipse.
DualConic project_ellipsoid(const DualQuadric& q, const Eigen::Matrix<double, 3, 4>& p);

// Centre and covariance of the ellipse conic, pixel frame. Scale-invariant.
GaussianParams conic_to_gaussian(const DualConic& c);

// Dual conic from a Gaussian (inverse of conic_to_gaussian up to scale).
DualConic gaussian_to_conic(const GaussianParams& g);

// Eigendecomposition of sigma: a = sqrt(lambda1), b = sqrt(lambda2),
// theta = direction of the major eigenvector folded into [0, pi).
EllipseGeom gaussian_to_ellipse(const GaussianParams& g);

// Sigma = R(theta) diag(a^2, b^2) R(theta)^T.
GaussianParams ellipse_to_gaussian(const EllipseGeom& e);

// Axis-aligned ellipse inscribed in the box.
EllipseGeom ellipse_from_bbox(const BoundingBox& box);

// Closed-form eigenvalues of a symmetric 2x2 matrix, descending order.
void eig2x2_sym(const Eigen::Matrix2d& m, double& lambda1, double& lambda2);

}  // namespace gol
