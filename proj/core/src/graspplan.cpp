#include "wastegrasp/graspplan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "wastegrasp/error.hpp"

namespace wastegrasp::grasp {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

Eigen::Matrix3d covariance(const PointCloud& cloud, const std::vector<std::size_t>& indices) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t i : indices) {
    mean += cloud.position(i);
  }
  mean /= static_cast<double>(indices.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i : indices) {
    const Eigen::Vector3d d = cloud.position(i) - mean;
    cov.noalias() += d * d.transpose();
  }
  return cov / static_cast<double>(indices.size());
}

}  // namespace

void GraspPlanConfig::validate() const {
  if (k_neighbors < 4) {
    throw Error(ErrorCode::kInvalidConfig, "k_neighbors must be >= 4");
  }
  if (!(plane_band > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "plane_band must be positive");
  }
  auto open_angle = [](double deg) { return deg > 0.0 && deg < 180.0; };
  if (!open_angle(opposition_min_angle) || !open_angle(plane_parallel_max_angle)) {
    throw Error(ErrorCode::kInvalidConfig, "grasp angles must lie in (0, 180) degrees");
  }
  if (!(max_opening > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "max_opening must be positive");
  }
  if (!(alignment_weight >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alignment_weight must be non-negative");
  }
}

PointCloud extract_object_cloud(const DepthImage& depth, const Mask& mask,
                                const geometry::Intrinsics& k, const RgbImage* color) {
  require_same_shape(depth, mask, "depth/mask");
  if (color != nullptr) {
    require_same_shape(depth, *color, "depth/color");
  }
  k.validate();
  PointCloud cloud;
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      const float d = depth.at(x, y);
      if (mask.at(x, y) == 0 || !(d > 0.0f)) {
        continue;
      }
      CloudPoint p;
      p.position = geometry::backproject({static_cast<double>(x), static_cast<double>(y), d}, k);
      if (color != nullptr) {
        p.color = color->at(x, y);
      }
      cloud.points.push_back(p);
    }
  }
  if (cloud.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "mask selects no pixel with valid depth");
  }
  return cloud;
}

std::vector<std::size_t> nearest_neighbors(const PointCloud& cloud, std::size_t query,
                                           std::size_t k) {
  const std::size_t n = cloud.size();
  k = std::min(k, n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  const Point3& q = cloud.position(query);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] = {(cloud.position(i) - q).squaredNorm(), i};
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k) - 1, dist.end());
  std::sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = dist[i].second;
  }
  return out;
}

Point3 centroid(const PointCloud& cloud) {
  Point3 c = Point3::Zero();
  for (const auto& p : cloud.points) {
    c += p.position;
  }
  return c / static_cast<double>(cloud.size());
}

SurfaceFeatures estimate_surface(const PointCloud& cloud, int k_neighbors) {
  if (k_neighbors < 1 || cloud.size() <= static_cast<std::size_t>(k_neighbors)) {
    throw Error(ErrorCode::kPrecondition,
                "cloud of " + std::to_string(cloud.size()) + " points needs more than " +
                    std::to_string(k_neighbors) + " points for k-NN estimation");
  }
  const Point3 c = centroid(cloud);
  SurfaceFeatures f;
  f.curvature.resize(cloud.size());
  f.normals.resize(cloud.size());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto nn = nearest_neighbors(cloud, i, static_cast<std::size_t>(k_neighbors));
    solver.compute(covariance(cloud, nn));
    const Eigen::Vector3d lambda = solver.eigenvalues().cwiseMax(0.0);
    const double total = lambda.sum();
    f.curvature[i] = total > 0.0 ? lambda(0) / total : 0.0;
    Eigen::Vector3d n = solver.eigenvectors().col(0).normalized();
    if (n.dot(cloud.position(i) - c) < 0.0) {
      n = -n;
    }
    f.normals[i] = n;
  }
  return f;
}

std::vector<double> estimate_curvature(const PointCloud& cloud, const GraspPlanConfig& cfg) {
  return estimate_surface(cloud, cfg.k_neighbors).curvature;
}

Plane grasp_plane(const PointCloud& cloud) {
  if (cloud.size() < 3) {
    throw Error(ErrorCode::kDegenerateGeometry, "grasp plane needs at least 3 points");
  }
  std::vector<std::size_t> all(cloud.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = i;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(covariance(cloud, all));
  const Eigen::Vector3d lambda = solver.eigenvalues();
  if (!(lambda(2) > 0.0) || lambda(1) <= 1e-12 * lambda(2)) {
    throw Error(ErrorCode::kDegenerateGeometry, "cloud is collinear or coincident");
  }
  return {centroid(cloud), solver.eigenvectors().col(2).normalized()};
}

GraspPair select_grasp_pair(const PointCloud& cloud, const GraspPlanConfig& cfg) {
  cfg.validate();
  const SurfaceFeatures features = estimate_surface(cloud, cfg.k_neighbors);
  return select_grasp_pair(cloud, features, grasp_plane(cloud), cfg);
}

GraspPair select_grasp_pair(const PointCloud& cloud, const SurfaceFeatures& features,
                            const Plane& plane, const GraspPlanConfig& cfg) {
  cfg.validate();
  if (features.curvature.size() != cloud.size() || features.normals.size() != cloud.size()) {
    throw Error(ErrorCode::kDimension, "surface features do not match the cloud");
  }
  const double min_opposition = cfg.opposition_min_angle * kDegToRad;
  const double min_plane_angle = cfg.plane_parallel_max_angle * kDegToRad;

  struct Candidate {
    std::size_t index;
    double base;  // curvature + dist / band
  };
  std::vector<Candidate> band;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double dist = plane.distance(cloud.position(i));
    if (dist <= cfg.plane_band) {
      band.push_back({i, features.curvature[i] + dist / cfg.plane_band});
    }
  }

  bool found = false;
  GraspPair best;
  double best_len = 0.0;
  for (std::size_t ia = 0; ia < band.size(); ++ia) {
    const std::size_t a = band[ia].index;
    const Point3& pa = cloud.position(a);
    const Eigen::Vector3d& na = features.normals[a];
    for (std::size_t ib = ia + 1; ib < band.size(); ++ib) {
      const std::size_t b = band[ib].index;
      const Eigen::Vector3d seg = cloud.position(b) - pa;
      const double len = seg.norm();
      if (!(len > 0.0) || len > cfg.max_opening) {
        continue;
      }
      const Eigen::Vector3d& nb = features.normals[b];
      if (angle_between(na, nb) < min_opposition) {
        continue;
      }
      const Eigen::Vector3d dir = seg / len;
      const double plane_angle = std::acos(std::min(std::abs(dir.dot(plane.normal)), 1.0));
      if (plane_angle < min_plane_angle) {
        continue;
      }
      double score = band[ia].base + band[ib].base;
      if (cfg.alignment_weight > 0.0) {
        score += cfg.alignment_weight * (angle_between(dir, nb) + angle_between(-dir, na)) /
                 std::numbers::pi;
      }
      if (!found || score < best.score || (score == best.score && len > best_len)) {
        found = true;
        best.index_a = a;
        best.index_b = b;
        best.score = score;
        best_len = len;
      }
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNoGraspFound, "no point pair satisfies the grasp constraints");
  }
  best.p_a = cloud.position(best.index_a);
  best.p_b = cloud.position(best.index_b);
  best.quality = 1.0 / (1.0 + best.score);
  return best;
}

PointCloud transformed(const PointCloud& cloud, const geometry::RigidTransform& t) {
  PointCloud out = cloud;
  for (auto& p : out.points) {
    p.position = t.apply(p.position);
  }
  return out;
}

}  // namespace wastegrasp::grasp
