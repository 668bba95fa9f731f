#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "wastegrasp/error.hpp"
#include "wastegrasp/io.hpp"
#include "wastegrasp/sim.hpp"

namespace wastegrasp::sim {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const std::array<double, 6> kHomeJoints{0.0, -std::numbers::pi / 2, std::numbers::pi / 2,
                                        -std::numbers::pi / 2, -std::numbers::pi / 2, 0.0};

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

// Pose error (position; rotation vector) taking `current` to `target`.
Vector6 pose_error(const RigidTransform& target, const RigidTransform& current) {
  Vector6 e;
  e.head<3>() = target.translation() - current.translation();
  e.tail<3>() = rotation_log(target.rotation() * current.rotation().transpose());
  return e;
}

std::optional<std::vector<double>> dls_solve(const geometry::DhChain& chain,
                                             const RigidTransform& target,
                                             std::vector<double> q) {
  constexpr int kIterations = 400;
  constexpr double kDelta = 1e-7;
  const std::size_t n = q.size();
  for (int it = 0; it < kIterations; ++it) {
    const RigidTransform pose = geometry::dh_forward(chain, q);
    const Vector6 e = pose_error(target, pose);
    if (e.norm() < 1e-10) {
      return q;
    }
    Eigen::Matrix<double, 6, Eigen::Dynamic> jac(6, static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> qd = q;
      qd[j] += kDelta;
      jac.col(static_cast<Eigen::Index>(j)) = pose_error(geometry::dh_forward(chain, qd), pose) / kDelta;
    }
    const double lambda = e.norm() > 1e-3 ? 0.05 : 1e-4;
    const Matrix6 jjt = jac * jac.transpose() + lambda * lambda * Matrix6::Identity();
    Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
    const double norm = dq.norm();
    if (norm > 0.5) {
      dq *= 0.5 / norm;
    }
    for (std::size_t j = 0; j < n; ++j) {
      q[j] += dq(static_cast<Eigen::Index>(j));
    }
  }
  const Vector6 e = pose_error(target, geometry::dh_forward(chain, q));
  if (e.norm() < 1e-8) {
    return q;
  }
  return std::nullopt;
}

void append_segment(std::vector<TrajectorySample>& out, const Point3& from, const Point3& to,
                    double speed, const std::string& stage) {
  constexpr double kDt = 0.1;
  const double start = out.empty() ? 0.0 : out.back().t;
  const double length = (to - from).norm();
  const int steps = std::max(1, static_cast<int>(std::ceil(length / (speed * kDt))));
  for (int s = out.empty() ? 0 : 1; s <= steps; ++s) {
    const double a = static_cast<double>(s) / steps;
    out.push_back({start + s * (length / speed / steps), from + a * (to - from), stage});
  }
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), r.ptr};
}

struct ArmViewData {
  RigidTransform base_T_camera;
  Point3 camera_world;
  RenderResult render;
  std::vector<OracleDetection> detections;
};

json error_json(const StageError& e) {
  return {{"stage", e.stage}, {"error", to_string(e.code)}, {"message", e.message}};
}

}  // namespace

std::vector<double> solve_look_at(const ArmConfig& arm, const Point3& from, const Point3& to) {
  const Eigen::Vector3d z = to - from;
  if (!(z.norm() > 1e-9)) {
    throw Error(ErrorCode::kDegenerateGeometry, "look-at target coincides with the viewpoint");
  }
  const Eigen::Vector3d zc = z.normalized();
  Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  if (zc.cross(up).norm() < 1e-6) {
    up = Eigen::Vector3d::UnitX();
  }
  const Eigen::Vector3d xc = zc.cross(up).normalized();
  const Eigen::Vector3d yc = zc.cross(xc);
  Eigen::Matrix3d r;
  r.col(0) = xc;
  r.col(1) = yc;
  r.col(2) = zc;
  const RigidTransform base_T_camera(r, from);
  const RigidTransform target =
      base_T_camera * (arm.effector_T_fingers * arm.fingers_T_camera).inverse();

  const std::size_t n = arm.chain.size();
  std::vector<std::vector<double>> starts;
  if (n == kHomeJoints.size()) {
    starts.emplace_back(kHomeJoints.begin(), kHomeJoints.end());
  }
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  while (starts.size() < 24) {
    std::vector<double> q(n);
    for (auto& v : q) {
      v = angle(rng);
    }
    starts.push_back(std::move(q));
  }
  for (const auto& q0 : starts) {
    if (auto q = dls_solve(arm.chain, target, q0)) {
      for (auto& v : *q) {
        v = std::remainder(v, 2.0 * std::numbers::pi);
      }
      return *q;
    }
  }
  throw Error(ErrorCode::kDegenerateGeometry, "no joint solution reaches the requested view");
}

RunReport run_pipeline(const SceneConfig& cfg) {
  cfg.validate();
  const auto t_total = Clock::now();
  RunReport report;

  auto t = Clock::now();
  const RenderResult scene = render_scene(cfg);
  report.timing_ms["render"] = elapsed_ms(t);
  report.warnings = scene.warnings;

  t = Clock::now();
  const auto detections = oracle_detect(scene, cfg.noise, cfg.classes, cfg.seed);
  report.timing_ms["detection"] = elapsed_ms(t);

  const RigidTransform world_T_camera = cfg.world_T_camera();
  const RigidTransform world_T_base = cfg.world_T_base();
  const RigidTransform base_T_world = world_T_base.inverse();

  t = Clock::now();
  std::vector<ArmViewData> views;
  std::optional<StageError> view_error;
  for (std::size_t v = 0; v < cfg.arm.views.size(); ++v) {
    const ArmView& view = cfg.arm.views[v];
    try {
      const std::vector<double> q =
          view.joints ? *view.joints
                      : solve_look_at(cfg.arm, base_T_world.apply(view.look_from),
                                      base_T_world.apply(view.look_at));
      ArmViewData data;
      data.base_T_camera = geometry::gripper_pose(geometry::dh_forward(cfg.arm.chain, q),
                                                  cfg.arm.effector_T_fingers,
                                                  cfg.arm.fingers_T_camera);
      const RigidTransform world_T_view = world_T_base * data.base_T_camera;
      data.camera_world = world_T_view.translation();
      const std::uint64_t seed = cfg.seed + 1000 * (v + 1);
      data.render = render_view(cfg.objects, cfg.arm.camera, world_T_view, cfg.noise, seed);
      data.detections = oracle_detect(data.render, cfg.noise, cfg.classes, seed);
      views.push_back(std::move(data));
    } catch (const Error& e) {
      view_error = StageError{"arm_view", e.code(), "view " + std::to_string(v) + ": " + e.what()};
      report.warnings.push_back(view_error->message);
    }
  }
  report.timing_ms["arm_views"] = elapsed_ms(t);

  std::vector<TrajectorySample> trajectory;
  append_segment(trajectory, Point3::Zero(), cfg.platform_position - cfg.mission_start, 0.5,
                 "navigation");
  const RigidTransform home =
      world_T_base * (cfg.arm.chain.size() == kHomeJoints.size()
                          ? geometry::dh_forward(cfg.arm.chain, kHomeJoints)
                          : RigidTransform::identity());

  report.traces.resize(cfg.objects.size());
  for (std::size_t i = 0; i < cfg.objects.size(); ++i) {
    ObjectReport r;
    r.index = i;
    r.label = cfg.objects[i].label;
    auto fail = [&](const char* stage, const Error& e) {
      r.errors.push_back({stage, e.code(), e.what()});
    };

    const auto det = std::find_if(detections.begin(), detections.end(),
                                  [&](const OracleDetection& d) { return d.object == i; });
    if (det == detections.end()) {
      r.errors.push_back({"detection", ErrorCode::kPrecondition, "object not detected"});
      report.objects.push_back(std::move(r));
      continue;
    }
    r.detection = *det;

    t = Clock::now();
    try {
      const int u = std::clamp(static_cast<int>(std::lround(det->box.cx)), 0, cfg.camera.width - 1);
      const int v = std::clamp(static_cast<int>(std::lround(det->box.cy)), 0, cfg.camera.height - 1);
      r.pixel = geometry::Pixel{static_cast<double>(u), static_cast<double>(v),
                                static_cast<double>(scene.depth.at(u, v))};
      r.world = geometry::localize(*r.pixel, cfg.camera.intrinsics, cfg.lidar_T_camera,
                                   cfg.platform_T_lidar, cfg.offset());
      if (const auto hit = cast_ray(cfg.objects, world_T_camera, cfg.camera.intrinsics, u, v)) {
        r.world_truth = world_T_camera.apply(*hit);
        r.localization_error_m = (*r.world - *r.world_truth).norm();
      }
    } catch (const Error& e) {
      fail("localization", e);
    }
    r.timing_ms["localization"] = elapsed_ms(t);

    t = Clock::now();
    try {
      grasp::PointCloud cloud;
      auto add = [&](const RenderResult& render, const Mask& mask, const geometry::Intrinsics& k,
                     const RigidTransform& base_T_cam) {
        try {
          const auto part = grasp::transformed(
              grasp::extract_object_cloud(render.depth, mask, k, &render.color), base_T_cam);
          cloud.points.insert(cloud.points.end(), part.points.begin(), part.points.end());
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kEmptyCloud) {
            throw;
          }
        }
      };
      if (!cfg.arm.views.empty()) {
        if (views.empty() && view_error) {
          throw Error(view_error->code, view_error->message);
        }
        for (const auto& view : views) {
          for (const auto& d : view.detections) {
            if (d.object == i) {
              add(view.render, d.mask, cfg.arm.camera.intrinsics, view.base_T_camera);
            }
          }
        }
      } else {
        add(scene, det->mask, cfg.camera.intrinsics, base_T_world * world_T_camera);
      }
      r.cloud_points = cloud.size();
      if (cloud.empty()) {
        throw Error(ErrorCode::kEmptyCloud, "no depth returns on the object");
      }
      grasp::GraspPair g = grasp::select_grasp_pair(cloud, cfg.grasp);
      g.p_a = world_T_base.apply(g.p_a);
      g.p_b = world_T_base.apply(g.p_b);
      r.grasp = g;
    } catch (const Error& e) {
      fail("grasp_planning", e);
    }
    r.timing_ms["grasp_planning"] = elapsed_ms(t);

    if (r.grasp) {
      t = Clock::now();
      const auto& m = cfg.manipulation;
      control::ManipulationScenario s;
      s.gripper.opening = m.start_opening_mm;
      s.gripper.close_step = m.close_step_mm;
      s.object_width_mm = r.grasp->width() * 1000.0;
      s.slip_px = m.slip_px;
      s.seed = cfg.seed + i;
      s.max_ticks = m.max_ticks;
      s.sensor = m.sensor;
      const int contact_tick =
          1 + static_cast<int>(std::ceil(std::max(0.0, m.start_opening_mm - s.object_width_mm) /
                                         m.close_step_mm));
      for (int st : m.slip_ticks) {
        s.slip_ticks.push_back(contact_tick + st);
      }
      s.orders = {{0, control::VisionOrder::kGrasp},
                  {contact_tick + m.hold_ticks, control::VisionOrder::kRelease}};
      control::ControllerTrace trace;
      try {
        trace = control::run_manipulation(s);
      } catch (const control::ManipulationError& e) {
        trace = e.trace();
        fail("manipulation", e);
      } catch (const Error& e) {
        fail("manipulation", e);
      }
      if (!trace.empty()) {
        TraceSummary summary;
        summary.ticks = static_cast<int>(trace.records.size());
        summary.final_mode = trace.back().mode;
        summary.final_opening_mm = trace.back().opening_mm;
        summary.slip_corrections = static_cast<int>(
            std::count_if(trace.records.begin(), trace.records.end(), [](const auto& rec) {
              return rec.mode == control::Mode::kSlipCorrecting;
            }));
        summary.file = "object_" + std::to_string(i) + ".csv";
        r.trace = summary;
      }
      report.traces[i] = std::move(trace);
      r.timing_ms["manipulation"] = elapsed_ms(t);

      const Point3 mid = 0.5 * (r.grasp->p_a + r.grasp->p_b);
      const Point3 above = mid + Point3(0.0, 0.0, 0.1);
      Point3 cursor = home.translation();
      for (const auto& view : views) {
        append_segment(trajectory, cursor, view.camera_world, 0.25, "inspect");
        cursor = view.camera_world;
      }
      append_segment(trajectory, cursor, above, 0.25, "approach");
      append_segment(trajectory, above, mid, 0.1, "grasp");
      append_segment(trajectory, mid, mid + Point3(0.0, 0.0, 0.2), 0.1, "lift");
      append_segment(trajectory, mid + Point3(0.0, 0.0, 0.2), home.translation(), 0.25, "return");
    }

    r.success = r.errors.empty() && r.trace && r.trace->final_mode == control::Mode::kDone;
    report.objects.push_back(std::move(r));
  }
  report.trajectory = std::move(trajectory);
  report.timing_ms["total"] = elapsed_ms(t_total);
  return report;
}

json to_json(const RunReport& report) {
  json objects = json::array();
  for (const auto& r : report.objects) {
    json o = {{"index", r.index}, {"label", r.label}, {"success", r.success}};
    if (r.detection) {
      o["detection"] = {{"label", r.detection->label},
                        {"confidence", r.detection->confidence},
                        {"box", io::to_json(r.detection->box)}};
    }
    if (r.pixel) {
      o["pixel"] = {{"u", r.pixel->u}, {"v", r.pixel->v}, {"d", r.pixel->d}};
    }
    if (r.world) {
      o["world"] = io::to_json(*r.world);
    }
    if (r.world_truth) {
      o["world_truth"] = io::to_json(*r.world_truth);
    }
    if (r.localization_error_m) {
      o["localization_error_m"] = *r.localization_error_m;
    }
    o["cloud_points"] = r.cloud_points;
    if (r.grasp) {
      json g = io::grasp_to_json(*r.grasp);
      g["width_m"] = r.grasp->width();
      g["score"] = r.grasp->score;
      o["grasp"] = g;
    }
    if (r.trace) {
      o["trace"] = {{"ticks", r.trace->ticks},
                    {"final_mode", std::string(control::to_string(r.trace->final_mode))},
                    {"final_opening_mm", r.trace->final_opening_mm},
                    {"slip_corrections", r.trace->slip_corrections},
                    {"file", r.trace->file}};
    }
    json errors = json::array();
    for (const auto& e : r.errors) {
      errors.push_back(error_json(e));
    }
    o["errors"] = errors;
    o["timing_ms"] = r.timing_ms;
    objects.push_back(std::move(o));
  }
  return {{"objects", objects},
          {"warnings", report.warnings},
          {"trajectory_samples", report.trajectory.size()},
          {"timing_ms", report.timing_ms}};
}

std::string trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::string out = "t,x,y,z,stage\n";
  for (const auto& s : samples) {
    out += format_double(s.t) + ',' + format_double(s.position.x()) + ',' +
           format_double(s.position.y()) + ',' + format_double(s.position.z()) + ',' + s.stage + '\n';
  }
  return out;
}

void write_run_logs(const RunReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  }
  for (std::size_t i = 0; i < report.objects.size() && i < report.traces.size(); ++i) {
    if (report.objects[i].trace) {
      io::write_text(dir / report.objects[i].trace->file, control::to_csv(report.traces[i]));
    }
  }
  io::write_text(dir / "trajectory.csv", trajectory_csv(report.trajectory));
}

}  // namespace wastegrasp::sim
