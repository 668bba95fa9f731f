#pragma once

// Pinhole back-projection, rigid transforms and the camera -> LiDAR -> world
// chain used to localize detected waste, plus standard DH forward kinematics
// for the arm-mounted camera chain.

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wastegrasp::geometry {

using Point3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

/// Tolerance on R^T R = I and det R = +1 accepted by RigidTransform.
inline constexpr double kOrthonormalTolerance = 1e-9;

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Throws kInvalidConfig unless fx > 0 and fy > 0.
  void validate() const;
};

/// Image coordinates (pixels) plus depth along the optical axis (metres).
struct Pixel {
  double u = 0.0;
  double v = 0.0;
  double d = 0.0;
};

/// Additive world-frame displacement applied after the LiDAR -> platform
/// transform.
struct Offset3 {
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  Eigen::Vector3d vector() const { return {dx, dy, dz}; }
};

/// Proper rigid motion p -> R p + t. Construction rejects rotations that are
/// not orthonormal with determinant +1 (no silent re-orthonormalization).
class RigidTransform {
 public:
  RigidTransform() = default;
  RigidTransform(const Matrix3& rotation, const Eigen::Vector3d& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform translation(double x, double y, double z);
  static RigidTransform rotation_x(double radians);
  static RigidTransform rotation_y(double radians);
  static RigidTransform rotation_z(double radians);
  static RigidTransform from_axis_angle(const Eigen::Vector3d& axis, double radians,
                                        const Eigen::Vector3d& translation = Eigen::Vector3d::Zero());
  /// Throws kInvalidTransform unless the bottom row is (0, 0, 0, 1).
  static RigidTransform from_matrix(const Matrix4& m);

  const Matrix3& rotation() const noexcept { return rotation_; }
  const Eigen::Vector3d& translation() const noexcept { return translation_; }
  Matrix4 matrix() const;

  Point3 apply(const Point3& p) const { return rotation_ * p + translation_; }
  RigidTransform inverse() const;

  /// (a * b).apply(p) == a.apply(b.apply(p)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);

  bool is_approx(const RigidTransform& other, double tolerance) const;

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Matrix3& rotation, const Eigen::Vector3d& translation)
      : rotation_(rotation), translation_(translation) {}

  Matrix3 rotation_ = Matrix3::Identity();
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

/// Whether `rotation` passes the RigidTransform invariants.
bool is_proper_rotation(const Matrix3& rotation, double tolerance = kOrthonormalTolerance);

struct DhJoint {
  double a = 0.0;             // metres, along x_i
  double alpha = 0.0;         // radians, about x_i
  double d = 0.0;             // metres, along z_{i-1}
  double theta_offset = 0.0;  // radians, added to the joint value
};

/// Standard (distal) Denavit-Hartenberg chain of revolute joints.
struct DhChain {
  std::vector<DhJoint> joints;

  std::size_t size() const noexcept { return joints.size(); }
};

/// Camera-frame point for a pixel with depth d:
/// z = d, x = (u - cx) d / fx, y = (v - cy) d / fy.
/// Throws kInvalidDepth when d <= 0 (or not finite).
Point3 backproject(const Pixel& px, const Intrinsics& k);

/// Projects a camera-frame point with z > 0 back to (u, v, z).
Pixel project(const Point3& p, const Intrinsics& k);

inline Point3 apply(const RigidTransform& t, const Point3& p) { return t.apply(p); }
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) { return a * b; }
inline RigidTransform invert(const RigidTransform& t) { return t.inverse(); }

// Transforms are named a_T_b: they map points expressed in frame b into frame a.

/// World coordinates from LiDAR coordinates: platform_T_lidar p + offset.
Point3 lidar_to_world(const Point3& p_lidar, const RigidTransform& platform_T_lidar,
                      const Offset3& offset);

/// Full localization chain: pixel -> camera -> LiDAR -> world.
Point3 localize(const Pixel& px, const Intrinsics& k, const RigidTransform& lidar_T_camera,
                const RigidTransform& platform_T_lidar, const Offset3& offset);

/// Single standard DH link transform Rot_z(theta) Trans_z(d) Trans_x(a) Rot_x(alpha).
RigidTransform dh_link(const DhJoint& joint, double theta);

/// Product of the link transforms 1..n. Throws kDimension if the joint count
/// differs from the chain length or the chain is empty.
RigidTransform dh_forward(const DhChain& chain, std::span<const double> joints);

/// base_T_camera = base_T_effector * effector_T_fingers * fingers_T_camera.
/// Maps points seen by the arm-mounted camera into the robot base frame.
RigidTransform gripper_pose(const RigidTransform& base_T_effector,
                            const RigidTransform& effector_T_fingers,
                            const RigidTransform& fingers_T_camera);

}  // namespace wastegrasp::geometry
