#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "wastegrasp/io.hpp"
#include "wastegrasp/sim.hpp"

namespace wg = wastegrasp;
using namespace wastegrasp::sim;
using wastegrasp::geometry::RigidTransform;

namespace {

SceneConfig load_scene(const std::string& name) {
  return scene_from_json(
      wg::io::read_json(std::string(WASTEGRASP_SOURCE_DIR) + "/data/scenes/" + name + ".json"));
}

CameraModel small_camera() { return {{50.0, 50.0, 50.0, 50.0}, 101, 101}; }

SceneObject sphere_at(double x, double y, double z, double r, int label = 0) {
  SceneObject o;
  o.shape = Shape::kSphere;
  o.size = {r};
  o.pose = RigidTransform::translation(x, y, z);
  o.label = label;
  return o;
}

std::size_t count(const wg::Mask& m) {
  std::size_t n = 0;
  for (auto v : m.data()) {
    n += v;
  }
  return n;
}

}  // namespace

TEST(Render, EmptyScene) {
  const auto r = render_view({}, small_camera(), RigidTransform::identity(), {}, 1);
  EXPECT_TRUE(r.masks.empty());
  for (float d : r.depth.data()) {
    EXPECT_EQ(d, 0.0f);
  }
}

TEST(Render, UnitSphereOnAxis) {
  const auto cam = small_camera();
  const auto r = render_view({sphere_at(0, 0, 2, 1)}, cam, RigidTransform::identity(), {}, 1);
  ASSERT_EQ(r.masks.size(), 1u);
  float min_depth = 1e9f;
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const double a = (x - cam.intrinsics.cx) / cam.intrinsics.fx;
      const double b = (y - cam.intrinsics.cy) / cam.intrinsics.fy;
      const double rho = a * a + b * b;
      // Ray (a, b, 1) meets the sphere iff 4 - 3 (a^2 + b^2 + 1) >= 0.
      if (std::abs(rho - 1.0 / 3.0) < 1e-9) {
        continue;
      }
      EXPECT_EQ(r.masks[0].mask.at(x, y), rho < 1.0 / 3.0 ? 1 : 0) << x << "," << y;
      if (r.depth.at(x, y) > 0.0f) {
        min_depth = std::min(min_depth, r.depth.at(x, y));
        const double t = (2.0 - std::sqrt(4.0 - 3.0 * (rho + 1.0))) / (rho + 1.0);
        EXPECT_NEAR(r.depth.at(x, y), t, 1e-6);
      }
    }
  }
  EXPECT_EQ(min_depth, 1.0f);
  EXPECT_EQ(r.depth.at(50, 50), 1.0f);
}

TEST(Render, DisjointMasksAndBehindCamera) {
  const auto r = render_view({sphere_at(-0.5, 0, 3, 0.3), sphere_at(0.5, 0, 3, 0.3), sphere_at(0, 0, -2, 0.3)},
                             small_camera(), RigidTransform::identity(), {}, 1);
  ASSERT_EQ(r.masks.size(), 2u);
  EXPECT_GT(count(r.masks[0].mask), 0u);
  EXPECT_GT(count(r.masks[1].mask), 0u);
  for (std::size_t i = 0; i < r.masks[0].mask.size(); ++i) {
    EXPECT_FALSE(r.masks[0].mask[i] && r.masks[1].mask[i]);
  }
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("behind"), std::string::npos);
}

TEST(Render, GlassDropsReturns) {
  auto glass = sphere_at(0, 0, 2, 1);
  glass.material = "glass";
  const auto solid = render_view({sphere_at(0, 0, 2, 1)}, small_camera(), RigidTransform::identity(), {}, 1);
  const auto clear = render_view({glass}, small_camera(), RigidTransform::identity(), {}, 1);
  std::size_t kept = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < solid.depth.size(); ++i) {
    total += solid.depth[i] > 0.0f;
    kept += clear.depth[i] > 0.0f;
  }
  EXPECT_NEAR(static_cast<double>(kept) / total, 0.3, 0.05);
}

TEST(Oracle, NoiseFreeEqualsRender) {
  const auto r = render_view({sphere_at(-0.5, 0, 3, 0.3, 1), sphere_at(0.5, 0, 3, 0.3, 0)}, small_camera(),
                             RigidTransform::identity(), {}, 1);
  const auto dets = oracle_detect(r, {}, 2, 9);
  ASSERT_EQ(dets.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(dets[i].mask, r.masks[i].mask);
    EXPECT_EQ(dets[i].label, r.masks[i].label);
    EXPECT_EQ(dets[i].confidence, 1.0);
    // Tight box around the mask's pixel centres, inclusive of their extent.
    int x0 = 1 << 30, x1 = -1;
    for (int y = 0; y < 101; ++y) {
      for (int x = 0; x < 101; ++x) {
        if (r.masks[i].mask.at(x, y)) {
          x0 = std::min(x0, x);
          x1 = std::max(x1, x);
        }
      }
    }
    EXPECT_DOUBLE_EQ(dets[i].box.w, x1 - x0 + 1);
  }
}

TEST(Oracle, JitterIsSeededAndLabelFlip) {
  const auto r = render_view({sphere_at(0, 0, 3, 0.5, 1)}, small_camera(), RigidTransform::identity(), {}, 1);
  NoiseConfig noise;
  noise.box_jitter_px = 2.0;
  const auto a = oracle_detect(r, noise, 2, 42);
  const auto b = oracle_detect(r, noise, 2, 42);
  const auto c = oracle_detect(r, noise, 2, 43);
  EXPECT_EQ(a[0].box, b[0].box);
  EXPECT_NE(a[0].box, c[0].box);
  EXPECT_LT(a[0].confidence, 1.0);

  NoiseConfig flip;
  flip.label_flip = 1.0;
  EXPECT_EQ(oracle_detect(r, flip, 2, 1)[0].label, 0);
}

TEST(Oracle, ErosionShrinksMask) {
  const auto r = render_view({sphere_at(0, 0, 3, 0.5)}, small_camera(), RigidTransform::identity(), {}, 1);
  NoiseConfig noise;
  noise.mask_erosion = 2;
  const auto d = oracle_detect(r, noise, 1, 1);
  EXPECT_LT(count(d[0].mask), count(r.masks[0].mask));
  for (std::size_t i = 0; i < d[0].mask.size(); ++i) {
    EXPECT_LE(d[0].mask[i], r.masks[0].mask[i]);
  }
}

TEST(Scene, JsonRoundTripAndValidation) {
  const auto cfg = load_scene("three_objects");
  const auto again = scene_from_json(to_json(cfg));
  EXPECT_EQ(to_json(again), to_json(cfg));
  auto bad = to_json(cfg);
  bad["objects"][0]["size"] = {0.1, -0.2, 0.3};
  EXPECT_THROW(scene_from_json(bad), wg::Error);
  bad = to_json(cfg);
  bad["objects"][0]["label"] = 7;
  EXPECT_THROW(scene_from_json(bad), wg::Error);
}

TEST(LookAt, CameraPoseReached) {
  const auto cfg = load_scene("single_box");
  const auto base_T_world = cfg.world_T_base().inverse();
  const Point3 from = base_T_world.apply(cfg.arm.views[0].look_from);
  const Point3 to = base_T_world.apply(cfg.arm.views[0].look_at);
  const auto q = solve_look_at(cfg.arm, from, to);
  const auto cam = wg::geometry::gripper_pose(wg::geometry::dh_forward(cfg.arm.chain, q),
                                              cfg.arm.effector_T_fingers, cfg.arm.fingers_T_camera);
  EXPECT_LT((cam.translation() - from).norm(), 1e-6);
  EXPECT_GT(cam.rotation().col(2).dot((to - from).normalized()), 1.0 - 1e-9);
}

TEST(Pipeline, SingleBoxEndToEnd) {
  const auto report = run_pipeline(load_scene("single_box"));
  ASSERT_EQ(report.objects.size(), 1u);
  const auto& o = report.objects[0];
  EXPECT_TRUE(o.success);
  EXPECT_TRUE(o.errors.empty());
  ASSERT_TRUE(o.grasp.has_value());
  EXPECT_GE(o.grasp->width(), 0.058);
  EXPECT_LE(o.grasp->width(), 0.062);
  ASSERT_TRUE(o.localization_error_m.has_value());
  EXPECT_LT(*o.localization_error_m, 0.005);
  ASSERT_TRUE(o.trace.has_value());
  EXPECT_EQ(o.trace->final_mode, wg::control::Mode::kDone);
  EXPECT_EQ(o.trace->slip_corrections, 1);
  for (const auto& [stage, ms] : o.timing_ms) {
    EXPECT_GE(ms, 0.0) << stage;
  }
  EXPECT_FALSE(report.trajectory.empty());
}

TEST(Pipeline, StageFailuresAreRecorded) {
  const auto report = run_pipeline(load_scene("three_objects"));
  ASSERT_EQ(report.objects.size(), 3u);
  EXPECT_TRUE(report.objects[0].success);
  for (const auto& o : report.objects) {
    EXPECT_EQ(o.success, o.errors.empty() && o.trace && o.trace->final_mode == wg::control::Mode::kDone);
    if (o.success) {
      EXPECT_EQ(report.traces[o.index].back().mode, wg::control::Mode::kDone);
    }
  }
}

TEST(Pipeline, GlassDoesNotCrash) {
  auto cfg = load_scene("glass_box");
  cfg.noise.glass_dropout = 0.97;
  const auto report = run_pipeline(cfg);
  ASSERT_EQ(report.objects.size(), 1u);
  const auto& o = report.objects[0];
  if (!o.success) {
    ASSERT_FALSE(o.errors.empty());
  }
}

TEST(Pipeline, DeterministicApartFromTimings) {
  const auto cfg = load_scene("three_objects");
  auto strip = [](nlohmann::json j) {
    j.erase("timing_ms");
    for (auto& o : j["objects"]) {
      o.erase("timing_ms");
    }
    return j;
  };
  EXPECT_EQ(strip(to_json(run_pipeline(cfg))), strip(to_json(run_pipeline(cfg))));
}
