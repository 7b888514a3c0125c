#include <doctest.h>

#include <cmath>
#include <random>

#include "gol/conic_geometry.hpp"
#include "gol/reconstruction.hpp"
#include "test_util.hpp"

using namespace gol;
using namespace gol::test;

namespace {

// Views on a ring around the object, looking roughly at its centre.
std::vector<ViewObservation> synthetic_views(const DualQuadric& q, int count, std::mt19937& rng,
                                             double zmin = 5.0, double zmax = 15.0) {
  std::vector<ViewObservation> views;
  std::uniform_real_distribution<double> zdist(zmin, zmax);
  std::uniform_real_distribution<double> offset(-0.5, 0.5);
  const Intrinsics k{1000, 1000, 320, 240};
  for (int i = 0; i < count; ++i) {
    Pose pose;
    pose.rotation = random_rotation(rng);
    pose.translation = Eigen::Vector3d(offset(rng), offset(rng), zdist(rng));
    ViewObservation v;
    v.p = projection_matrix(k, pose);
    v.conic = project_ellipsoid(q, v.p);
    views.push_back(v);
  }
  return views;
}

DualQuadric random_ellipsoid_quadric(std::mt19937& rng) {
  std::uniform_real_distribution<double> axis(0.1, 0.8);
  std::uniform_real_distribution<double> pos(-0.5, 0.5);
  EllipsoidEstimate e;
  double ax[3] = {axis(rng), axis(rng), axis(rng)};
  std::sort(ax, ax + 3, std::greater<double>());
  e.half_axes = Eigen::Vector3d(ax[0], ax[1], ax[2]);
  e.center = Eigen::Vector3d(pos(rng), pos(rng), pos(rng));
  e.orientation = random_rotation(rng);
  return compose_dual_quadric(e);
}

}  // namespace

TEST_CASE("triangulate recovers a known ellipsoid from exact conics") {
  std::mt19937 rng(41);
  EllipsoidEstimate gt;
  gt.half_axes = Eigen::Vector3d(0.40, 0.375, 0.16);
  gt.center = Eigen::Vector3d(0.1, -0.2, 0.05);
  gt.orientation = random_rotation(rng);
  const DualQuadric q_gt = compose_dual_quadric(gt);

  SUBCASE("5 views") {
    const auto views = synthetic_views(q_gt, 5, rng);
    const DualQuadric q = triangulate_ellipsoid(views);
    CHECK((q - q_gt).norm() < 1e-8 * q_gt.norm());
    CHECK(reprojection_residual(q, views) < 1e-6);
  }

  SUBCASE("3 views") {
    const auto views = synthetic_views(q_gt, 3, rng);
    const DualQuadric q = triangulate_ellipsoid(views);
    CHECK((q - q_gt).norm() < 1e-6 * q_gt.norm());
  }

  SUBCASE("2 views are under-constrained") {
    const auto views = synthetic_views(q_gt, 2, rng);
    CHECK_THROWS_AS(triangulate_ellipsoid(views), std::invalid_argument);
  }

  SUBCASE("repeated identical views are degenerate") {
    auto views = synthetic_views(q_gt, 1, rng);
    views.push_back(views[0]);
    views.push_back(views[0]);
    views.push_back(views[0]);
    CHECK_THROWS_AS(triangulate_ellipsoid(views), std::runtime_error);
  }
}

TEST_CASE("decompose_dual_quadric") {
  SUBCASE("axis-aligned at origin") {
    const DualQuadric q = ellipsoid_dual_quadric({0.40, 0.375, 0.16});
    const EllipsoidEstimate e = decompose_dual_quadric(q);
    CHECK(e.center.norm() < 1e-12);
    CHECK(e.half_axes.isApprox(Eigen::Vector3d(0.40, 0.375, 0.16), 1e-12));
    CHECK(std::abs(e.orientation.determinant() - 1.0) < 1e-9);
  }

  SUBCASE("random round trips") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
      const DualQuadric q = random_ellipsoid_quadric(rng);
      const EllipsoidEstimate e = decompose_dual_quadric(q);
      const DualQuadric back = compose_dual_quadric(e);
      CHECK((back - q).norm() < 1e-9 * q.norm());
      CHECK(e.half_axes(0) >= e.half_axes(1));
      CHECK(e.half_axes(1) >= e.half_axes(2));
      CHECK((e.orientation.transpose() * e.orientation)
                .isApprox(Eigen::Matrix3d::Identity(), 1e-9));
    }
  }

  SUBCASE("sphere accepts any orthonormal frame") {
    const DualQuadric q = ellipsoid_dual_quadric({0.3, 0.3, 0.3});
    const EllipsoidEstimate e = decompose_dual_quadric(q);
    CHECK(e.half_axes.isApproxToConstant(0.3, 1e-12));
    CHECK((e.orientation.transpose() * e.orientation)
              .isApprox(Eigen::Matrix3d::Identity(), 1e-9));
  }

  SUBCASE("non-ellipsoid rejected") {
    DualQuadric q = ellipsoid_dual_quadric({1, 1, 1});
    q(0, 0) = -4.0;  // hyperboloid-like
    CHECK_THROWS_AS(decompose_dual_quadric(q), std::runtime_error);
  }
}

TEST_CASE("reconstruction_errors") {
  std::mt19937 rng(47);
  EllipsoidEstimate gt;
  gt.half_axes = Eigen::Vector3d(0.40, 0.375, 0.16);
  gt.center = Eigen::Vector3d(0.2, 0.1, -0.3);
  gt.orientation = random_rotation(rng);

  SUBCASE("identity") {
    const ReconError err = reconstruction_errors(gt, gt);
    CHECK(err.position_cm < 1e-9);
    CHECK(err.orientation_deg < 1e-5);
    CHECK(err.size_cm < 1e-9);
  }

  SUBCASE("pure centre offset") {
    EllipsoidEstimate est = gt;
    est.center += Eigen::Vector3d(0.01, 0, 0);  // 1 cm
    const ReconError err = reconstruction_errors(est, gt);
    CHECK(err.position_cm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(err.orientation_deg < 1e-5);
    CHECK(err.size_cm < 1e-9);
  }

  SUBCASE("5 degrees about the major axis") {
    EllipsoidEstimate est = gt;
    const Eigen::Vector3d axis = gt.orientation.col(0);
    est.orientation = Eigen::AngleAxisd(5.0 * M_PI / 180.0, axis) * gt.orientation;
    const ReconError err = reconstruction_errors(est, gt);
    CHECK(err.position_cm < 1e-9);
    CHECK(err.orientation_deg == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(err.size_cm < 1e-9);
  }

  SUBCASE("sign-flipped frame is not an orientation error") {
    EllipsoidEstimate est = gt;
    est.orientation.col(0) *= -1.0;
    est.orientation.col(1) *= -1.0;
    const ReconError err = reconstruction_errors(est, gt);
    // acos near 1 turns eps-level trace noise into ~1e-6 deg
    CHECK(err.orientation_deg < 1e-4);
  }

  SUBCASE("size error from scaled axes") {
    EllipsoidEstimate est = gt;
    est.half_axes += Eigen::Vector3d(0.01, 0.01, 0.01);
    const ReconError err = reconstruction_errors(est, gt);
    // full axes differ by 2 cm each
    CHECK(err.size_cm == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("noiseless closure and scale equivariance") {
  std::mt19937 rng(53);
  const DualQuadric q_gt = random_ellipsoid_quadric(rng);
  const auto views = synthetic_views(q_gt, 8, rng);
  const DualQuadric q = triangulate_ellipsoid(views);
  CHECK(reprojection_residual(q, views) < 1e-6);

  // scaling the whole scene by s scales position/size errors by s
  const EllipsoidEstimate base = decompose_dual_quadric(q_gt);
  EllipsoidEstimate est = base;
  est.center += Eigen::Vector3d(0.01, 0.0, 0.0);
  est.half_axes *= 1.02;
  const ReconError e1 = reconstruction_errors(est, base);

  const double s = 3.0;
  EllipsoidEstimate gt_s = base, est_s = est;
  gt_s.center *= s;
  gt_s.half_axes *= s;
  est_s.center *= s;
  est_s.half_axes *= s;
  const ReconError e2 = reconstruction_errors(est_s, gt_s);
  CHECK(e2.position_cm == doctest::Approx(s * e1.position_cm).epsilon(1e-9));
  CHECK(e2.size_cm == doctest::Approx(s * e1.size_cm).epsilon(1e-9));
  CHECK(e2.orientation_deg == doctest::Approx(e1.orientation_deg).epsilon(1e-9));
}

TEST_CASE("noise monotonicity of median errors") {
  std::mt19937 rng(59);
  EllipsoidEstimate gt;
  gt.half_axes = Eigen::Vector3d(0.40, 0.375, 0.16);
  gt.center = Eigen::Vector3d::Zero();
  gt.orientation = Eigen::Matrix3d::Identity();
  const DualQuadric q_gt = compose_dual_quadric(gt);

  auto median_error = [&](double sigma) {
    std::vector<double> errs;
    std::normal_distribution<double> noise(0.0, sigma);
    for (int trial = 0; trial < 40; ++trial) {
      auto views = synthetic_views(q_gt, 10, rng);
      for (auto& v : views) {
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) v.conic(r, c) *= 1.0 + noise(rng);
        v.conic = 0.5 * (v.conic + v.conic.transpose()).eval();
      }
      try {
        const EllipsoidEstimate est = decompose_dual_quadric(triangulate_ellipsoid(views));
        errs.push_back(reconstruction_errors(est, gt).position_cm);
      } catch (const std::exception&) {
        errs.push_back(1e9);  // failed reconstruction counts as a large error
      }
    }
    std::sort(errs.begin(), errs.end());
    return errs[errs.size() / 2];
  };

  const double e0 = median_error(0.0);
  const double e1 = median_error(0.005);
  const double e2 = median_error(0.02);
  CHECK(e0 <= e1 + 1e-9);
  CHECK(e1 <= e2 + 1e-6);
}
