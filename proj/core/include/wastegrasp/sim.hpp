#pragma once

// Synthetic scenes of primitive objects, an analytic ray-cast renderer, an
// oracle detector standing in for the learned segmenter, and the end-to-end
// pipeline: detect -> localize -> plan grasp -> closed-loop manipulation.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wastegrasp/controller.hpp"
#include "wastegrasp/detmath.hpp"
#include "wastegrasp/geometry.hpp"
#include "wastegrasp/graspplan.hpp"
#include "wastegrasp/image.hpp"

namespace wastegrasp::sim {

using geometry::Point3;
using geometry::RigidTransform;

enum class Shape { kBox, kCylinder, kSphere };

struct SceneObject {
  Shape shape = Shape::kBox;
  /// Box: full extents (x, y, z). Cylinder: (radius, height) along local z.
  /// Sphere: (radius). Metres.
  std::vector<double> size;
  /// world_T_object.
  RigidTransform pose;
  int label = 0;
  /// "glass" loses most of its depth returns.
  std::string material = "plastic";
};

struct CameraModel {
  geometry::Intrinsics intrinsics{500.0, 500.0, 320.0, 240.0};
  int width = 640;
  int height = 480;
};

struct NoiseConfig {
  /// Gaussian depth noise, metres.
  double depth_sigma = 0.0;
  /// Fraction of depth returns dropped on "glass".
  double glass_dropout = 0.7;
  /// Oracle detector perturbations.
  double box_jitter_px = 0.0;
  int mask_erosion = 0;
  double label_flip = 0.0;
};

/// A wrist-camera viewpoint: explicit joints, or a look-at target solved by IK.
struct ArmView {
  std::optional<std::vector<double>> joints;
  Point3 look_from = Point3::Zero();  // world frame
  Point3 look_at = Point3::Zero();    // world frame
};

struct ArmConfig {
  geometry::DhChain chain;
  RigidTransform platform_T_base;
  RigidTransform effector_T_fingers;
  RigidTransform fingers_T_camera;
  CameraModel camera;
  std::vector<ArmView> views;
};

struct ManipulationConfig {
  double close_step_mm = 1.0;
  double start_opening_mm = control::GripperModel::kMaxOpening;
  /// Slip events and the Release order are scheduled relative to the tick
  /// at which the closing fingers are expected to first touch the object.
  std::vector<int> slip_ticks;
  int slip_px = 12;
  int hold_ticks = 60;
  int max_ticks = 2000;
  tactile::SensorModel sensor;
};

enum class OffsetConvention { kCurrentMinusStart, kStartMinusCurrent };

struct SceneConfig {
  std::uint64_t seed = 1;
  int classes = 2;
  /// Platform (localization) camera.
  CameraModel camera;
  RigidTransform lidar_T_camera;
  RigidTransform platform_T_lidar;
  /// Platform positions in the mission-start (world) frame; the platform
  /// stays axis-aligned with the world.
  Point3 platform_position = Point3::Zero();
  Point3 mission_start = Point3::Zero();
  OffsetConvention offset_convention = OffsetConvention::kCurrentMinusStart;
  std::vector<SceneObject> objects;
  NoiseConfig noise;
  ArmConfig arm;
  grasp::GraspPlanConfig grasp;
  ManipulationConfig manipulation;

  void validate() const;
  /// Offset added after platform_T_lidar, per `offset_convention`.
  geometry::Offset3 offset() const;
  /// Physical pose of the platform camera.
  RigidTransform world_T_camera() const;
  RigidTransform world_T_base() const;
};

/// UR5e standard DH parameters.
geometry::DhChain ur5e_chain();

SceneConfig scene_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneConfig& cfg);

struct ObjectMask {
  std::size_t object = 0;
  int label = 0;
  Mask mask;
};

struct RenderResult {
  /// Depth along the optical axis, 0 where nothing is hit.
  DepthImage depth;
  RgbImage color;
  /// Visible objects only, in scene order.
  std::vector<ObjectMask> masks;
  std::vector<std::string> warnings;
};

/// Ray-casts `objects` from a camera at world_T_camera. Pixel (x, y) samples
/// the ray through u = x, v = y. Objects whose centre is not in front of the
/// camera are skipped with a warning. Noise is seeded by `seed`.
RenderResult render_view(const std::vector<SceneObject>& objects, const CameraModel& camera,
                         const RigidTransform& world_T_camera, const NoiseConfig& noise,
                         std::uint64_t seed);

/// Platform-camera render of the scene.
RenderResult render_scene(const SceneConfig& cfg);

/// Camera-frame hit point of the ray through pixel (u, v), if any object is hit.
std::optional<Point3> cast_ray(const std::vector<SceneObject>& objects,
                               const RigidTransform& world_T_camera,
                               const geometry::Intrinsics& k, double u, double v);

struct OracleDetection {
  std::size_t object = 0;
  int label = 0;
  double confidence = 1.0;
  detmath::BoundingBox box;
  Mask mask;
};

/// Boxes and masks from the render, perturbed per `noise`; zero noise gives
/// the rendered masks and their tight pixel boxes.
std::vector<OracleDetection> oracle_detect(const RenderResult& rendered, const NoiseConfig& noise,
                                           int classes, std::uint64_t seed);

/// Joints placing the camera at `from` looking at `to` (base frame), by
/// damped least squares. Throws kDegenerateGeometry when no restart converges.
std::vector<double> solve_look_at(const ArmConfig& arm, const Point3& from, const Point3& to);

struct StageError {
  std::string stage;
  ErrorCode code = ErrorCode::kPrecondition;
  std::string message;
};

struct TraceSummary {
  int ticks = 0;
  control::Mode final_mode = control::Mode::kIdle;
  double final_opening_mm = 0.0;
  int slip_corrections = 0;
  std::string file;
};

struct ObjectReport {
  std::size_t index = 0;
  int label = 0;
  std::optional<OracleDetection> detection;
  std::optional<geometry::Pixel> pixel;
  std::optional<Point3> world;
  std::optional<Point3> world_truth;
  std::optional<double> localization_error_m;
  /// Grasp points in the world frame.
  std::optional<grasp::GraspPair> grasp;
  std::size_t cloud_points = 0;
  std::optional<TraceSummary> trace;
  bool success = false;
  std::vector<StageError> errors;
  std::map<std::string, double> timing_ms;
};

struct TrajectorySample {
  double t = 0.0;
  Point3 position = Point3::Zero();
  std::string stage;
};

struct RunReport {
  std::vector<ObjectReport> objects;
  std::vector<std::string> warnings;
  std::vector<TrajectorySample> trajectory;
  std::map<std::string, double> timing_ms;
  /// Full controller traces, parallel to `objects` (empty when not reached).
  std::vector<control::ControllerTrace> traces;
};

/// Runs every stage for every object; stage failures are recorded and the
/// run moves on to the next object.
RunReport run_pipeline(const SceneConfig& cfg);

/// Report JSON. `timing_ms` members are the only wall-clock dependent fields.
nlohmann::json to_json(const RunReport& report);

/// Writes object_<i>.csv traces and trajectory.csv into `dir`.
void write_run_logs(const RunReport& report, const std::filesystem::path& dir);

std::string trajectory_csv(const std::vector<TrajectorySample>& samples);

}  // namespace wastegrasp::sim
