#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gol {

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

// Object frame -> camera frame.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

// Ellipsoid half-axes in meters.
struct EllipsoidDims {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
};

using DualQuadric = Eigen::Matrix4d;  // 4x4 symmetric
using DualConic = Eigen::Matrix3d;    // 3x3 symmetric, scale-ambiguous

enum class Frame { Pixel, Normalized };

struct GaussianParams {
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
  Frame frame = Frame::Pixel;
};

// Geometric ellipse: centre, semi-axes a >= b > 0, orientation in [0, pi).
struct EllipseGeom {
  double x0 = 0.0;
  double y0 = 0.0;
  double a = 1.0;
  double b = 1.0;
  double theta = 0.0;
};

struct BoundingBox {
  double xc = 0.0;
  double yc = 0.0;
  double width = 1.0;
  double height = 1.0;
};

// Row i, col j addresses pixel with continuous centre (x=j, y=i), 1-based.
struct HeatmapGrid {
  int width = 0;
  int height = 0;
  Eigen::ArrayXXd values;  // height rows, width cols
};

struct CoordGrids {
  Eigen::ArrayXXd x;
  Eigen::ArrayXXd y;
};

struct LabelRecord {
  std::string id;
  GaussianParams gaussian;  // pixel frame, heatmap resolution
  EllipseGeom ellipse;
  double truncation_fraction = 0.0;
  // Provenance.
  Pose pose;
  Intrinsics intrinsics;  // image resolution
  EllipsoidDims dims;
  int image_width = 0;
  int image_height = 0;
  int heatmap_width = 0;
  int heatmap_height = 0;
};

}  // namespace gol
