#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "clouds.hpp"
#include "oracles.hpp"
#include "wastegrasp/error.hpp"
#include "wastegrasp/graspplan.hpp"

namespace wg = wastegrasp;
using namespace wastegrasp::grasp;

namespace {

wg::ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const wg::Error& e) {
    return e.code();
  }
  return wg::ErrorCode::kPrecondition;  // unreachable in passing tests
}

GraspPair expect_matches_brute_force(const PointCloud& cloud, const GraspPlanConfig& cfg) {
  const SurfaceFeatures f = estimate_surface(cloud, cfg.k_neighbors);
  const Plane plane = grasp_plane(cloud);
  const auto brute = oracle::brute_force_grasp(cloud, f.curvature, f.normals, plane.point,
                                               plane.normal, cfg);
  const GraspPair g = select_grasp_pair(cloud, f, plane, cfg);
  EXPECT_TRUE(brute.has_value());
  if (brute) {
    EXPECT_NEAR(g.score, brute->score, 1e-9);
  }
  return g;
}

}  // namespace

TEST(ExtractCloud, EmptyMask) {
  const wg::DepthImage depth(8, 8, 1.0f);
  const wg::Mask mask(8, 8, 0);
  EXPECT_EQ(code_of([&] { extract_object_cloud(depth, mask, {1, 1, 4, 4}); }),
            wg::ErrorCode::kEmptyCloud);
}

TEST(ExtractCloud, SinglePixelAtPrincipalPoint) {
  const wg::DepthImage depth(8, 8, 1.0f);
  wg::Mask mask(8, 8, 0);
  mask.at(4, 4) = 1;
  const auto cloud = extract_object_cloud(depth, mask, {50, 50, 4, 4});
  ASSERT_EQ(cloud.size(), 1u);
  EXPECT_EQ(cloud.position(0), Point3(0, 0, 1));
}

TEST(ExtractCloud, SquarePatchMatchesPinhole) {
  const wg::geometry::Intrinsics k{100, 120, 16, 12};
  const wg::DepthImage depth(40, 30, 2.0f);
  wg::Mask mask(40, 30, 0);
  for (int y = 5; y < 15; ++y) {
    for (int x = 20; x < 30; ++x) {
      mask.at(x, y) = 1;
    }
  }
  const auto cloud = extract_object_cloud(depth, mask, k);
  ASSERT_EQ(cloud.size(), 100u);
  for (const auto& p : cloud.points) {
    EXPECT_EQ(p.position.z(), 2.0);
    EXPECT_GE(p.position.x(), (20 - 16) * 2.0 / 100 - 1e-12);
    EXPECT_LE(p.position.x(), (29 - 16) * 2.0 / 100 + 1e-12);
    EXPECT_GE(p.position.y(), (5 - 12) * 2.0 / 120 - 1e-12);
    EXPECT_LE(p.position.y(), (14 - 12) * 2.0 / 120 + 1e-12);
  }
}

TEST(ExtractCloud, SkipsInvalidDepthAndChecksShape) {
  wg::DepthImage depth(4, 4, 1.0f);
  depth.at(1, 1) = 0.0f;
  const wg::Mask mask(4, 4, 1);
  EXPECT_EQ(extract_object_cloud(depth, mask, {1, 1, 2, 2}).size(), 15u);
  EXPECT_EQ(code_of([&] { extract_object_cloud(depth, wg::Mask(3, 4, 1), {1, 1, 2, 2}); }),
            wg::ErrorCode::kDimension);
}

TEST(Surface, MatchesBruteForcePca) {
  std::mt19937_64 rng(41);
  const auto cloud = clouds::box_surface(rng, 200, {0.04, 0.06, 0.15});
  const auto f = estimate_surface(cloud, 20);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto [curv, normal] = oracle::local_shape(cloud, i, 20);
    EXPECT_NEAR(f.curvature[i], curv, 1e-9);
    // Normals are ill-defined where two eigenvalues nearly coincide.
    if (curv < 0.05) {
      EXPECT_GT(f.normals[i].dot(normal), 1.0 - 1e-6) << i;
    }
  }
}

TEST(Surface, SphereHasPositiveCurvature) {
  std::mt19937_64 rng(43);
  const auto cloud = clouds::sphere_surface(rng, 300, 0.05);
  for (double c : estimate_surface(cloud, 20).curvature) {
    EXPECT_GT(c, 0.0);
    EXPECT_LE(c, 1.0 / 3.0 + 1e-12);
  }
}

TEST(Surface, TooFewPoints) {
  std::mt19937_64 rng(47);
  const auto cloud = clouds::sphere_surface(rng, 10, 0.05);
  EXPECT_EQ(code_of([&] { estimate_surface(cloud, 30); }), wg::ErrorCode::kPrecondition);
}

TEST(GraspPlane, CylinderAxis) {
  // Regular rings keep the off-axis covariance at rounding level.
  PointCloud cloud;
  for (int ring = -10; ring <= 10; ++ring) {
    for (int k = 0; k < 24; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 24.0;
      cloud.points.push_back({Point3(0.03 * std::cos(a), 0.03 * std::sin(a), 0.015 * ring)});
    }
  }
  const Plane plane = grasp_plane(cloud);
  EXPECT_NEAR(std::abs(plane.normal.z()), 1.0, 1e-6);
  EXPECT_LT((plane.point - centroid(cloud)).norm(), 1e-15);
}

TEST(GraspPlane, Degenerate) {
  PointCloud two;
  two.points = {{Point3(0, 0, 0)}, {Point3(1, 0, 0)}};
  EXPECT_EQ(code_of([&] { grasp_plane(two); }), wg::ErrorCode::kDegenerateGeometry);
  PointCloud line;
  for (int i = 0; i < 10; ++i) {
    line.points.push_back({Point3(i, 2 * i, 0)});
  }
  EXPECT_EQ(code_of([&] { grasp_plane(line); }), wg::ErrorCode::kDegenerateGeometry);
}

TEST(SelectGrasp, BoxGivesOpposedLateralFaces) {
  std::mt19937_64 rng(59);
  const Eigen::Vector3d size(0.04, 0.06, 0.15);
  const auto cloud = clouds::box_surface(rng, 2000, size);
  const GraspPlanConfig cfg;
  const GraspPair g = expect_matches_brute_force(cloud, cfg);
  const Plane plane = grasp_plane(cloud);
  EXPECT_LE(plane.distance(g.p_a), cfg.plane_band);
  EXPECT_LE(plane.distance(g.p_b), cfg.plane_band);
  // Opposite faces: same axis at +-half extent.
  bool opposed = false;
  for (int axis = 0; axis < 2; ++axis) {
    const double h = 0.5 * size(axis);
    opposed = opposed || (std::abs(std::abs(g.p_a(axis)) - h) < 1e-12 &&
                          std::abs(std::abs(g.p_b(axis)) - h) < 1e-12 &&
                          g.p_a(axis) * g.p_b(axis) < 0.0);
  }
  EXPECT_TRUE(opposed) << g.p_a.transpose() << " / " << g.p_b.transpose();
  EXPECT_NEAR(g.quality, 1.0 / (1.0 + g.score), 1e-15);
}

TEST(SelectGrasp, SphereIsAntipodalThroughCentre) {
  std::mt19937_64 rng(61);
  const auto cloud = clouds::sphere_surface(rng, 1500, 0.05);
  const GraspPair g = expect_matches_brute_force(cloud, GraspPlanConfig{});
  const Point3 c = centroid(cloud);
  const double cosang = (g.p_a - c).normalized().dot((c - g.p_b).normalized());
  EXPECT_LT(std::acos(std::min(cosang, 1.0)), 5.0 * std::numbers::pi / 180.0);
}

TEST(SelectGrasp, NoOpposedNormals) {
  std::mt19937_64 rng(67);
  const auto cloud = clouds::sphere_cap(rng, 200, 0.05, std::numbers::pi / 6);
  EXPECT_EQ(code_of([&] { select_grasp_pair(cloud, GraspPlanConfig{}); }),
            wg::ErrorCode::kNoGraspFound);
}

TEST(SelectGrasp, RespectsMaxOpening) {
  std::mt19937_64 rng(71);
  const auto cloud = clouds::box_surface(rng, 800, {0.2, 0.16, 0.4});
  GraspPlanConfig cfg;
  EXPECT_EQ(code_of([&] { select_grasp_pair(cloud, cfg); }), wg::ErrorCode::kNoGraspFound);
  cfg.max_opening = 0.3;
  EXPECT_LE(select_grasp_pair(cloud, cfg).width(), 0.3);
}

TEST(SelectGrasp, ConfigValidation) {
  std::mt19937_64 rng(73);
  const auto cloud = clouds::sphere_surface(rng, 100, 0.05);
  GraspPlanConfig cfg;
  cfg.plane_band = 0.0;
  EXPECT_EQ(code_of([&] { select_grasp_pair(cloud, cfg); }), wg::ErrorCode::kInvalidConfig);
}
