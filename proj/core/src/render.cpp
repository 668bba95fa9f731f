#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wastegrasp/error.hpp"
#include "wastegrasp/sim.hpp"
#include "wastegrasp/tactile.hpp"

namespace wastegrasp::sim {

namespace {

constexpr double kNoHit = std::numeric_limits<double>::infinity();
constexpr double kMinT = 1e-9;

double hit_box(const Eigen::Vector3d& o, const Eigen::Vector3d& d, const std::vector<double>& size) {
  double tmin = -kNoHit;
  double tmax = kNoHit;
  for (int i = 0; i < 3; ++i) {
    const double h = 0.5 * size[static_cast<std::size_t>(i)];
    if (d(i) == 0.0) {
      if (o(i) < -h || o(i) > h) {
        return kNoHit;
      }
      continue;
    }
    double t1 = (-h - o(i)) / d(i);
    double t2 = (h - o(i)) / d(i);
    if (t1 > t2) {
      std::swap(t1, t2);
    }
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
  }
  return tmax >= tmin && tmin > kMinT ? tmin : kNoHit;
}

double hit_sphere(const Eigen::Vector3d& o, const Eigen::Vector3d& d, double r) {
  const double a = d.squaredNorm();
  const double b = 2.0 * o.dot(d);
  const double c = o.squaredNorm() - r * r;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    return kNoHit;
  }
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return t > kMinT ? t : kNoHit;
}

double hit_cylinder(const Eigen::Vector3d& o, const Eigen::Vector3d& d, double r, double height) {
  const double hz = 0.5 * height;
  double best = kNoHit;
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 0.0) {
    const double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
    const double c = o.x() * o.x() + o.y() * o.y() - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double t = (-b - std::sqrt(disc)) / (2.0 * a);
      const double z = o.z() + t * d.z();
      if (t > kMinT && z >= -hz && z <= hz) {
        best = t;
      }
    }
  }
  if (d.z() != 0.0) {
    for (double cap : {-hz, hz}) {
      const double t = (cap - o.z()) / d.z();
      const double x = o.x() + t * d.x();
      const double y = o.y() + t * d.y();
      if (t > kMinT && x * x + y * y <= r * r) {
        best = std::min(best, t);
      }
    }
  }
  return best;
}

// Ray parameter of the first hit; the ray is origin + t * dir in world frame.
double hit_object(const SceneObject& obj, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
  const RigidTransform inv = obj.pose.inverse();
  const Eigen::Vector3d o = inv.apply(origin);
  const Eigen::Vector3d d = inv.rotation() * dir;
  switch (obj.shape) {
    case Shape::kBox:
      return hit_box(o, d, obj.size);
    case Shape::kSphere:
      return hit_sphere(o, d, obj.size[0]);
    case Shape::kCylinder:
      return hit_cylinder(o, d, obj.size[0], obj.size[1]);
  }
  return kNoHit;
}

Rgb palette(int label) {
  static constexpr Rgb kColors[] = {{200, 60, 50},  {60, 170, 70},  {50, 90, 200},
                                    {210, 180, 40}, {160, 70, 180}, {40, 180, 190}};
  return kColors[static_cast<std::size_t>(label) % std::size(kColors)];
}

}  // namespace

std::optional<Point3> cast_ray(const std::vector<SceneObject>& objects,
                               const RigidTransform& world_T_camera,
                               const geometry::Intrinsics& k, double u, double v) {
  const Eigen::Vector3d dir_cam((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
  const Eigen::Vector3d origin = world_T_camera.translation();
  const Eigen::Vector3d dir = world_T_camera.rotation() * dir_cam;
  double best = kNoHit;
  for (const auto& obj : objects) {
    best = std::min(best, hit_object(obj, origin, dir));
  }
  if (best == kNoHit) {
    return std::nullopt;
  }
  return Point3(dir_cam * best);
}

RenderResult render_view(const std::vector<SceneObject>& objects, const CameraModel& camera,
                         const RigidTransform& world_T_camera, const NoiseConfig& noise,
                         std::uint64_t seed) {
  camera.intrinsics.validate();
  const int w = camera.width;
  const int h = camera.height;
  RenderResult out;
  out.depth = DepthImage(w, h, 0.0f);
  out.color = RgbImage(w, h, Rgb{40, 40, 40});

  const RigidTransform camera_T_world = world_T_camera.inverse();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const Point3 c = camera_T_world.apply(objects[i].pose.translation());
    if (c.z() <= 0.0) {
      out.warnings.push_back("object " + std::to_string(i) + " is behind the camera; excluded");
    } else {
      active.push_back(i);
    }
  }

  const auto& k = camera.intrinsics;
  const Eigen::Vector3d origin = world_T_camera.translation();
  std::vector<int> owner(static_cast<std::size_t>(w) * h, -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d dir =
          world_T_camera.rotation() * Eigen::Vector3d((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0);
      double best = kNoHit;
      int who = -1;
      for (std::size_t i : active) {
        const double t = hit_object(objects[i], origin, dir);
        if (t < best) {
          best = t;
          who = static_cast<int>(i);
        }
      }
      if (who >= 0) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        owner[idx] = who;
        out.depth[idx] = static_cast<float>(best);  // dir has unit camera z
        out.color[idx] = palette(objects[static_cast<std::size_t>(who)].label);
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t idx = 0; idx < owner.size(); ++idx) {
    if (owner[idx] < 0) {
      continue;
    }
    const auto& obj = objects[static_cast<std::size_t>(owner[idx])];
    if (obj.material == "glass" && unit(rng) < noise.glass_dropout) {
      out.depth[idx] = 0.0f;
      continue;
    }
    if (noise.depth_sigma > 0.0) {
      out.depth[idx] = std::max(0.0f, out.depth[idx] + static_cast<float>(noise.depth_sigma * gauss(rng)));
    }
  }

  for (std::size_t i : active) {
    Mask m(w, h, 0);
    bool any = false;
    for (std::size_t idx = 0; idx < owner.size(); ++idx) {
      if (owner[idx] == static_cast<int>(i)) {
        m[idx] = 1;
        any = true;
      }
    }
    if (any) {
      out.masks.push_back({i, objects[i].label, std::move(m)});
    } else {
      out.warnings.push_back("object " + std::to_string(i) + " is not visible");
    }
  }
  return out;
}

RenderResult render_scene(const SceneConfig& cfg) {
  cfg.validate();
  return render_view(cfg.objects, cfg.camera, cfg.world_T_camera(), cfg.noise, cfg.seed);
}

std::vector<OracleDetection> oracle_detect(const RenderResult& rendered, const NoiseConfig& noise,
                                           int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xD1B54A32D192ED03ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto kernel = tactile::StructuringElement::square(3);

  std::vector<OracleDetection> out;
  for (const auto& om : rendered.masks) {
    int x0 = om.mask.width();
    int y0 = om.mask.height();
    int x1 = -1;
    int y1 = -1;
    for (int y = 0; y < om.mask.height(); ++y) {
      for (int x = 0; x < om.mask.width(); ++x) {
        if (om.mask.at(x, y) != 0) {
          x0 = std::min(x0, x);
          y0 = std::min(y0, y);
          x1 = std::max(x1, x);
          y1 = std::max(y1, y);
        }
      }
    }
    OracleDetection det;
    det.object = om.object;
    det.label = om.label;
    const detmath::BoundingBox truth{0.5 * (x0 + x1), 0.5 * (y0 + y1),
                                     static_cast<double>(x1 - x0 + 1),
                                     static_cast<double>(y1 - y0 + 1)};
    det.box = truth;
    // Always draw the same variates so noise levels do not shift later streams.
    const double j[4] = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    const double flip = unit(rng);
    const double pick = unit(rng);
    if (noise.box_jitter_px > 0.0) {
      det.box.cx += noise.box_jitter_px * j[0];
      det.box.cy += noise.box_jitter_px * j[1];
      det.box.w = std::max(1.0, det.box.w + noise.box_jitter_px * j[2]);
      det.box.h = std::max(1.0, det.box.h + noise.box_jitter_px * j[3]);
    }
    if (classes > 1 && flip < noise.label_flip) {
      const int shift = 1 + std::min(classes - 2, static_cast<int>(pick * (classes - 1)));
      det.label = (det.label + shift) % classes;
    }
    det.mask = om.mask;
    for (int e = 0; e < noise.mask_erosion; ++e) {
      det.mask = tactile::erode(det.mask, kernel);
    }
    det.confidence = detmath::iou(det.box, truth);
    out.push_back(std::move(det));
  }
  return out;
}

}  // namespace wastegrasp::sim
