#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wastegrasp/geometry.hpp"
#include "wastegrasp/image.hpp"

namespace wastegrasp::grasp {

using geometry::Point3;

struct CloudPoint {
  Point3 position = Point3::Zero();
  Rgb color{200, 200, 200};
};

struct PointCloud {
  std::vector<CloudPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const Point3& position(std::size_t i) const { return points[i].position; }
};

/// Tunables for grasp selection. Angles are in degrees, lengths in metres.
struct GraspPlanConfig {
  int k_neighbors = 30;
  double plane_band = 0.01;
  double opposition_min_angle = 150.0;
  double plane_parallel_max_angle = 30.0;
  /// ROBOTIQ 2F-140 stroke.
  double max_opening = 0.14;
  /// Weight of the antipodal alignment term; 0 drops it from the score.
  double alignment_weight = 1.0;

  void validate() const;
};

struct Plane {
  Point3 point = Point3::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();

  double distance(const Point3& p) const { return std::abs(normal.dot(p - point)); }
};

/// Per-point local shape from k-NN PCA.
struct SurfaceFeatures {
  /// Surface variation lambda0 / (lambda0 + lambda1 + lambda2), in [0, 1/3].
  std::vector<double> curvature;
  /// Smallest-eigenvalue eigenvector, oriented away from the cloud centroid.
  std::vector<Eigen::Vector3d> normals;
};

struct GraspPair {
  Point3 p_a = Point3::Zero();
  Point3 p_b = Point3::Zero();
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  /// Minimized selection score (lower is better).
  double score = 0.0;
  /// 1 / (1 + score), in (0, 1].
  double quality = 0.0;

  double width() const { return (p_b - p_a).norm(); }
};

/// One point per masked pixel with positive depth, back-projected with `k`.
/// Throws kDimension on mismatched inputs and kEmptyCloud when nothing is kept.
PointCloud extract_object_cloud(const DepthImage& depth, const Mask& mask,
                                const geometry::Intrinsics& k, const RgbImage* color = nullptr);

/// Indices of the k nearest points of `query` (itself included), ordered by
/// (squared distance, index).
std::vector<std::size_t> nearest_neighbors(const PointCloud& cloud, std::size_t query,
                                           std::size_t k);

/// Throws kPrecondition unless cloud.size() > k_neighbors.
SurfaceFeatures estimate_surface(const PointCloud& cloud, int k_neighbors);

std::vector<double> estimate_curvature(const PointCloud& cloud, const GraspPlanConfig& cfg);

Point3 centroid(const PointCloud& cloud);

/// Plane through the centroid whose normal is the cloud's principal axis.
/// Throws kDegenerateGeometry for fewer than 3 points or collinear clouds.
Plane grasp_plane(const PointCloud& cloud);

/// Best antipodal pair under `cfg`. Score of a pair (a, b) with unit segment
/// d = (b - a) / |b - a|:
///
///   curv(a) + curv(b) + dist(a)/band + dist(b)/band
///     + alignment_weight * (angle(d, n_b) + angle(-d, n_a)) / pi
///
/// over pairs with both points within `plane_band` of the grasp plane, normals
/// at least `opposition_min_angle` apart, the segment at least
/// `plane_parallel_max_angle` away from the plane normal and no longer than
/// `max_opening`. Ties go to the longer segment, then the lower (a, b) index.
/// Throws kNoGraspFound when no pair qualifies.
GraspPair select_grasp_pair(const PointCloud& cloud, const GraspPlanConfig& cfg);

/// Same as above with precomputed features and plane (used by the pipeline
/// and benchmarks).
GraspPair select_grasp_pair(const PointCloud& cloud, const SurfaceFeatures& features,
                            const Plane& plane, const GraspPlanConfig& cfg);

PointCloud transformed(const PointCloud& cloud, const geometry::RigidTransform& t);

}  // namespace wastegrasp::grasp
