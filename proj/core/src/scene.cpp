#include <cmath>
#include <numbers>
#include <string>

#include "wastegrasp/error.hpp"
#include "wastegrasp/io.hpp"
#include "wastegrasp/sim.hpp"

namespace wastegrasp::sim {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<Shape, const char*>, 3> kShapes{{
    {Shape::kBox, "box"},
    {Shape::kCylinder, "cylinder"},
    {Shape::kSphere, "sphere"},
}};

Shape parse_shape(const std::string& s) {
  for (const auto& [shape, name] : kShapes) {
    if (s == name) {
      return shape;
    }
  }
  throw Error(ErrorCode::kParse, "unknown shape '" + s + "'");
}

const char* shape_name(Shape s) {
  for (const auto& [shape, name] : kShapes) {
    if (s == shape) {
      return name;
    }
  }
  return "?";
}

std::size_t size_arity(Shape s) {
  switch (s) {
    case Shape::kBox:
      return 3;
    case Shape::kCylinder:
      return 2;
    case Shape::kSphere:
      return 1;
  }
  return 0;
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, std::string("field '") + key + "': " + e.what());
    }
  }
}

CameraModel camera_from_json(const json& j, const CameraModel& fallback) {
  CameraModel c = fallback;
  if (j.contains("intrinsics")) {
    c.intrinsics = io::intrinsics_from_json(j["intrinsics"]);
  }
  take(j, "width", c.width);
  take(j, "height", c.height);
  return c;
}

json to_json(const CameraModel& c) {
  return {{"intrinsics", io::to_json(c.intrinsics)}, {"width", c.width}, {"height", c.height}};
}

void validate_camera(const CameraModel& c, const char* what) {
  c.intrinsics.validate();
  if (c.width <= 0 || c.height <= 0) {
    throw Error(ErrorCode::kInvalidConfig, std::string(what) + " image size must be positive");
  }
}

}  // namespace

geometry::DhChain ur5e_chain() {
  constexpr double h = std::numbers::pi / 2.0;
  return {{
      {0.0, h, 0.1625, 0.0},
      {-0.425, 0.0, 0.0, 0.0},
      {-0.3922, 0.0, 0.0, 0.0},
      {0.0, h, 0.1333, 0.0},
      {0.0, -h, 0.0997, 0.0},
      {0.0, 0.0, 0.0996, 0.0},
  }};
}

void SceneConfig::validate() const {
  if (classes < 1) {
    throw Error(ErrorCode::kInvalidConfig, "classes must be >= 1");
  }
  validate_camera(camera, "camera");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& o = objects[i];
    const std::string where = "object " + std::to_string(i);
    if (o.size.size() != size_arity(o.shape)) {
      throw Error(ErrorCode::kInvalidConfig, where + ": wrong number of size values");
    }
    for (double s : o.size) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw Error(ErrorCode::kInvalidConfig, where + ": sizes must be positive");
      }
    }
    if (o.label < 0 || o.label >= classes) {
      throw Error(ErrorCode::kInvalidConfig, where + ": label outside [0, classes)");
    }
  }
  if (!(noise.depth_sigma >= 0.0) || !(noise.box_jitter_px >= 0.0) || noise.mask_erosion < 0 ||
      !(noise.label_flip >= 0.0 && noise.label_flip <= 1.0) ||
      !(noise.glass_dropout >= 0.0 && noise.glass_dropout <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "noise levels out of range");
  }
  if (!arm.views.empty()) {
    validate_camera(arm.camera, "arm camera");
    for (const auto& v : arm.views) {
      if (v.joints && v.joints->size() != arm.chain.size()) {
        throw Error(ErrorCode::kInvalidConfig, "view joint count differs from the DH chain");
      }
    }
  }
  grasp.validate();
  if (!(manipulation.close_step_mm > 0.0) || manipulation.hold_ticks < 1 ||
      manipulation.max_ticks < 1 ||
      !(manipulation.start_opening_mm > 0.0 &&
        manipulation.start_opening_mm <= control::GripperModel::kMaxOpening)) {
    throw Error(ErrorCode::kInvalidConfig, "manipulation settings out of range");
  }
  manipulation.sensor.validate();
}

geometry::Offset3 SceneConfig::offset() const {
  const Point3 d = offset_convention == OffsetConvention::kCurrentMinusStart
                       ? Point3(platform_position - mission_start)
                       : Point3(mission_start - platform_position);
  return {d.x(), d.y(), d.z()};
}

RigidTransform SceneConfig::world_T_camera() const {
  const Point3 p = platform_position - mission_start;
  return RigidTransform::translation(p.x(), p.y(), p.z()) * platform_T_lidar * lidar_T_camera;
}

RigidTransform SceneConfig::world_T_base() const {
  const Point3 p = platform_position - mission_start;
  return RigidTransform::translation(p.x(), p.y(), p.z()) * arm.platform_T_base;
}

SceneConfig scene_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kParse, "scene must be a JSON object");
  }
  SceneConfig cfg;
  take(j, "seed", cfg.seed);
  take(j, "classes", cfg.classes);
  if (j.contains("camera")) {
    const json& c = j["camera"];
    cfg.camera = camera_from_json(c, cfg.camera);
    if (c.contains("lidar_T_camera")) {
      cfg.lidar_T_camera = io::transform_from_json(c["lidar_T_camera"]);
    }
  }
  if (j.contains("platform_T_lidar")) {
    cfg.platform_T_lidar = io::transform_from_json(j["platform_T_lidar"]);
  }
  if (j.contains("platform")) {
    const json& p = j["platform"];
    if (p.contains("position")) {
      cfg.platform_position = io::vec3_from_json(p["position"]);
    }
    if (p.contains("mission_start")) {
      cfg.mission_start = io::vec3_from_json(p["mission_start"]);
    }
  }
  if (j.contains("offset_convention")) {
    const std::string c = j["offset_convention"].get<std::string>();
    if (c == "current_minus_start") {
      cfg.offset_convention = OffsetConvention::kCurrentMinusStart;
    } else if (c == "start_minus_current") {
      cfg.offset_convention = OffsetConvention::kStartMinusCurrent;
    } else {
      throw Error(ErrorCode::kParse, "unknown offset_convention '" + c + "'");
    }
  }
  if (j.contains("objects")) {
    for (const auto& o : j["objects"]) {
      SceneObject obj;
      obj.shape = parse_shape(o.at("shape").get<std::string>());
      obj.size = o.at("size").get<std::vector<double>>();
      if (o.contains("pose")) {
        obj.pose = io::transform_from_json(o["pose"]);
      }
      take(o, "label", obj.label);
      take(o, "material", obj.material);
      cfg.objects.push_back(std::move(obj));
    }
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    take(n, "depth_sigma", cfg.noise.depth_sigma);
    take(n, "glass_dropout", cfg.noise.glass_dropout);
    take(n, "box_jitter_px", cfg.noise.box_jitter_px);
    take(n, "mask_erosion", cfg.noise.mask_erosion);
    take(n, "label_flip", cfg.noise.label_flip);
  }
  cfg.arm.chain = ur5e_chain();
  cfg.arm.camera = cfg.camera;
  if (j.contains("arm")) {
    const json& a = j["arm"];
    if (a.contains("dh")) {
      cfg.arm.chain = io::dh_chain_from_json(a["dh"]);
    }
    if (a.contains("platform_T_base")) {
      cfg.arm.platform_T_base = io::transform_from_json(a["platform_T_base"]);
    }
    if (a.contains("effector_T_fingers")) {
      cfg.arm.effector_T_fingers = io::transform_from_json(a["effector_T_fingers"]);
    }
    if (a.contains("fingers_T_camera")) {
      cfg.arm.fingers_T_camera = io::transform_from_json(a["fingers_T_camera"]);
    }
    if (a.contains("camera")) {
      cfg.arm.camera = camera_from_json(a["camera"], cfg.camera);
    }
    if (a.contains("views")) {
      for (const auto& v : a["views"]) {
        ArmView view;
        if (v.contains("joints")) {
          view.joints = v["joints"].get<std::vector<double>>();
        } else {
          view.look_from = io::vec3_from_json(v.at("look_from"));
          view.look_at = io::vec3_from_json(v.at("look_at"));
        }
        cfg.arm.views.push_back(std::move(view));
      }
    }
  }
  if (j.contains("grasp")) {
    cfg.grasp = io::grasp_config_from_json(j["grasp"]);
  }
  if (j.contains("manipulation")) {
    const json& m = j["manipulation"];
    take(m, "close_step_mm", cfg.manipulation.close_step_mm);
    take(m, "start_opening_mm", cfg.manipulation.start_opening_mm);
    take(m, "slip_ticks", cfg.manipulation.slip_ticks);
    take(m, "slip_px", cfg.manipulation.slip_px);
    take(m, "hold_ticks", cfg.manipulation.hold_ticks);
    take(m, "max_ticks", cfg.manipulation.max_ticks);
    if (m.contains("sensor")) {
      cfg.manipulation.sensor = io::sensor_from_json(m["sensor"]);
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const SceneConfig& cfg) {
  json objects = json::array();
  for (const auto& o : cfg.objects) {
    objects.push_back({{"shape", shape_name(o.shape)},
                       {"size", o.size},
                       {"pose", io::to_json(o.pose)},
                       {"label", o.label},
                       {"material", o.material}});
  }
  json views = json::array();
  for (const auto& v : cfg.arm.views) {
    if (v.joints) {
      views.push_back({{"joints", *v.joints}});
    } else {
      views.push_back({{"look_from", io::to_json(v.look_from)}, {"look_at", io::to_json(v.look_at)}});
    }
  }
  json camera = to_json(cfg.camera);
  camera["lidar_T_camera"] = io::to_json(cfg.lidar_T_camera);
  return {
      {"seed", cfg.seed},
      {"classes", cfg.classes},
      {"camera", camera},
      {"platform_T_lidar", io::to_json(cfg.platform_T_lidar)},
      {"platform",
       {{"position", io::to_json(cfg.platform_position)},
        {"mission_start", io::to_json(cfg.mission_start)}}},
      {"offset_convention", cfg.offset_convention == OffsetConvention::kCurrentMinusStart
                                ? "current_minus_start"
                                : "start_minus_current"},
      {"objects", objects},
      {"noise",
       {{"depth_sigma", cfg.noise.depth_sigma},
        {"glass_dropout", cfg.noise.glass_dropout},
        {"box_jitter_px", cfg.noise.box_jitter_px},
        {"mask_erosion", cfg.noise.mask_erosion},
        {"label_flip", cfg.noise.label_flip}}},
      {"arm",
       {{"dh", io::to_json(cfg.arm.chain)},
        {"platform_T_base", io::to_json(cfg.arm.platform_T_base)},
        {"effector_T_fingers", io::to_json(cfg.arm.effector_T_fingers)},
        {"fingers_T_camera", io::to_json(cfg.arm.fingers_T_camera)},
        {"camera", to_json(cfg.arm.camera)},
        {"views", views}}},
      {"grasp", io::to_json(cfg.grasp)},
      {"manipulation",
       {{"close_step_mm", cfg.manipulation.close_step_mm},
        {"start_opening_mm", cfg.manipulation.start_opening_mm},
        {"slip_ticks", cfg.manipulation.slip_ticks},
        {"slip_px", cfg.manipulation.slip_px},
        {"hold_ticks", cfg.manipulation.hold_ticks},
        {"max_ticks", cfg.manipulation.max_ticks},
        {"sensor", io::to_json(cfg.manipulation.sensor)}}},
  };
}

}  // namespace wastegrasp::sim
