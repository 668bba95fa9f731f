#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wastegrasp/error.hpp"
#include "wastegrasp/geometry.hpp"

namespace wg = wastegrasp;
using namespace wastegrasp::geometry;

namespace {

const Intrinsics kK{100.0, 100.0, 320.0, 240.0};

void expect_code(wg::ErrorCode code, const auto& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << wg::to_string(code);
  } catch (const wg::Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Backproject, PrincipalPoint) {
  const Point3 p = backproject({320.0, 240.0, 2.0}, kK);
  EXPECT_EQ(p, Point3(0.0, 0.0, 2.0));
}

TEST(Backproject, OffAxisPixel) {
  const Point3 p = backproject({420.0, 240.0, 1.5}, kK);
  EXPECT_NEAR(p.x(), 1.5, 1e-15);
  EXPECT_NEAR(p.y(), 0.0, 1e-15);
  EXPECT_NEAR(p.z(), 1.5, 1e-15);
}

TEST(Backproject, RejectsNonPositiveDepth) {
  expect_code(wg::ErrorCode::kInvalidDepth, [] { backproject({1.0, 1.0, 0.0}, kK); });
  expect_code(wg::ErrorCode::kInvalidDepth, [] { backproject({1.0, 1.0, -1.0}, kK); });
  expect_code(wg::ErrorCode::kInvalidDepth, [] { backproject({1.0, 1.0, NAN}, kK); });
}

TEST(Backproject, ProjectRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 640.0);
  std::uniform_real_distribution<double> d(0.3, 3.0);
  for (int i = 0; i < 200; ++i) {
    const Pixel px{u(rng), u(rng), d(rng)};
    const Pixel back = project(backproject(px, kK), kK);
    EXPECT_NEAR(back.u, px.u, 1e-9);
    EXPECT_NEAR(back.v, px.v, 1e-9);
    EXPECT_NEAR(back.d, px.d, 1e-12);
  }
}

TEST(RigidTransform, RotationAboutZ) {
  const Point3 p = apply(RigidTransform::rotation_z(std::numbers::pi / 2), {1.0, 0.0, 0.0});
  EXPECT_NEAR(p.x(), 0.0, 1e-12);
  EXPECT_NEAR(p.y(), 1.0, 1e-12);
  EXPECT_NEAR(p.z(), 0.0, 1e-12);
}

TEST(RigidTransform, RejectsNonOrthonormal) {
  Matrix3 scaled = Matrix3::Identity() * 1.001;
  expect_code(wg::ErrorCode::kInvalidTransform, [&] { RigidTransform(scaled, Point3::Zero()); });
  Matrix3 reflect = Matrix3::Identity();
  reflect(2, 2) = -1.0;
  expect_code(wg::ErrorCode::kInvalidTransform, [&] { RigidTransform(reflect, Point3::Zero()); });
  Matrix4 bad = Matrix4::Identity();
  bad(3, 0) = 0.1;
  expect_code(wg::ErrorCode::kInvalidTransform, [&] { RigidTransform::from_matrix(bad); });
}

TEST(RigidTransform, ComposeTranslations) {
  const auto t = compose(RigidTransform::translation(1, 0, 0), RigidTransform::translation(0, 1, 0));
  EXPECT_TRUE(t.is_approx(RigidTransform::translation(1, 1, 0), 1e-15));
}

TEST(RigidTransform, ComposeMatchesSequentialApplication) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_transform(rng, 3.0);
    const auto b = oracle::random_transform(rng, 3.0);
    const Point3 p(0.3 * i, -1.0, 2.0);
    EXPECT_LT((compose(a, b).apply(p) - a.apply(b.apply(p))).norm(), 1e-12);
    EXPECT_LT((compose(a, b).matrix() - a.matrix() * b.matrix()).norm(), 1e-12);
  }
}

TEST(RigidTransform, InverseProperties) {
  EXPECT_TRUE(invert(RigidTransform::identity()).is_approx(RigidTransform::identity(), 0.0));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto t = oracle::random_transform(rng, 5.0);
    EXPECT_TRUE(invert(invert(t)).is_approx(t, 1e-12));
    EXPECT_TRUE(compose(t, invert(t)).is_approx(RigidTransform::identity(), 1e-12));
  }
}

TEST(Localize, IdentityChain) {
  const Point3 p = lidar_to_world({1, 1, 1}, RigidTransform::identity(), {});
  EXPECT_EQ(p, Point3(1, 1, 1));
}

TEST(Localize, MastAndOffset) {
  const Point3 p = lidar_to_world({1, 0, 0}, RigidTransform::translation(0, 0, 0.8), {2, 3, 0});
  EXPECT_NEAR((p - Point3(3, 3, 0.8)).norm(), 0.0, 1e-15);
}

TEST(Localize, FullChainMatchesManualComposition) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto lidar_T_camera = oracle::random_transform(rng, 0.5);
    const auto platform_T_lidar = oracle::random_transform(rng, 1.0);
    const Offset3 off{0.1 * i, -2.0, 0.5};
    const Pixel px{300.0 + i, 200.0 - i, 1.0 + 0.02 * i};
    const Eigen::Vector4d cam((px.u - kK.cx) * px.d / kK.fx, (px.v - kK.cy) * px.d / kK.fy, px.d, 1.0);
    const Eigen::Vector4d world = platform_T_lidar.matrix() * lidar_T_camera.matrix() * cam;
    const Point3 expect = world.head<3>() + off.vector();
    EXPECT_LT((localize(px, kK, lidar_T_camera, platform_T_lidar, off) - expect).norm(), 1e-12);
  }
}

TEST(DhForward, SingleJoint) {
  const DhChain chain{{{0.0, 0.0, 0.5, 0.0}}};
  const std::vector<double> q{std::numbers::pi / 2};
  const auto t = dh_forward(chain, q);
  EXPECT_TRUE(t.is_approx(RigidTransform::from_axis_angle(Point3::UnitZ(), std::numbers::pi / 2,
                                                          Point3(0, 0, 0.5)),
                          1e-12));
}

TEST(DhForward, PlanarTwoLink) {
  const DhChain chain{{{1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}}};
  const std::vector<double> q{0.0, 0.0};
  EXPECT_LT((dh_forward(chain, q).translation() - Point3(2, 0, 0)).norm(), 1e-15);
}

TEST(DhForward, MatchesElementwiseProduct) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> len(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    DhChain chain;
    std::vector<double> q;
    Eigen::Matrix4d expect = Eigen::Matrix4d::Identity();
    for (int j = 0; j < 6; ++j) {
      const DhJoint joint{len(rng), u(rng), len(rng), u(rng)};
      chain.joints.push_back(joint);
      q.push_back(u(rng));
      expect = expect * oracle::dh_matrix(joint.a, joint.alpha, joint.d, q.back() + joint.theta_offset);
    }
    EXPECT_LT((dh_forward(chain, q).matrix() - expect).norm(), 1e-12);
  }
}

TEST(DhForward, JointCountMismatch) {
  const DhChain chain{{{1.0, 0.0, 0.0, 0.0}}};
  const std::vector<double> q{0.0, 0.0};
  expect_code(wg::ErrorCode::kDimension, [&] { dh_forward(chain, q); });
  expect_code(wg::ErrorCode::kDimension, [&] { dh_forward(DhChain{}, std::span<const double>{}); });
}

TEST(GripperPose, Compositions) {
  const auto id = RigidTransform::identity();
  EXPECT_TRUE(gripper_pose(id, id, id).is_approx(id, 0.0));
  const auto up = RigidTransform::translation(0, 0, 1);
  EXPECT_TRUE(gripper_pose(id, up, id).is_approx(up, 1e-15));

  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const auto a = oracle::random_transform(rng, 1.0);
    const auto b = oracle::random_transform(rng, 1.0);
    const auto c = oracle::random_transform(rng, 1.0);
    const Eigen::Matrix4d expect = a.matrix() * b.matrix() * c.matrix();
    EXPECT_LT((gripper_pose(a, b, c).matrix() - expect).norm(), 1e-12);
  }
}
