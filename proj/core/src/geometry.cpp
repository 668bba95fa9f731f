#include "wastegrasp/geometry.hpp"

#include <cmath>
#include <string>

#include "wastegrasp/error.hpp"

namespace wastegrasp::geometry {

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy) ||
      !std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::kInvalidConfig, "intrinsics require fx > 0 and fy > 0");
  }
}

bool is_proper_rotation(const Matrix3& rotation, double tolerance) {
  if (!rotation.allFinite()) {
    return false;
  }
  const Matrix3 gram = rotation.transpose() * rotation;
  if ((gram - Matrix3::Identity()).cwiseAbs().maxCoeff() > tolerance) {
    return false;
  }
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

RigidTransform::RigidTransform(const Matrix3& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_proper_rotation(rotation_)) {
    throw Error(ErrorCode::kInvalidTransform,
                "rotation is not orthonormal with determinant +1 within 1e-9");
  }
  if (!translation_.allFinite()) {
    throw Error(ErrorCode::kInvalidTransform, "translation must be finite");
  }
}

RigidTransform RigidTransform::translation(double x, double y, double z) {
  return {Unchecked{}, Matrix3::Identity(), Eigen::Vector3d(x, y, z)};
}

RigidTransform RigidTransform::rotation_x(double radians) {
  return {Unchecked{}, Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitX()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

RigidTransform RigidTransform::rotation_y(double radians) {
  return {Unchecked{}, Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitY()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

RigidTransform RigidTransform::rotation_z(double radians) {
  return {Unchecked{}, Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

RigidTransform RigidTransform::from_axis_angle(const Eigen::Vector3d& axis, double radians,
                                               const Eigen::Vector3d& translation) {
  const double norm = axis.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kInvalidTransform, "rotation axis must be non-zero");
  }
  return {Eigen::AngleAxisd(radians, axis / norm).toRotationMatrix(), translation};
}

RigidTransform RigidTransform::from_matrix(const Matrix4& m) {
  const Eigen::RowVector4d bottom = m.row(3);
  if (bottom != Eigen::RowVector4d(0.0, 0.0, 0.0, 1.0)) {
    throw Error(ErrorCode::kInvalidTransform, "homogeneous matrix bottom row must be 0 0 0 1");
  }
  return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
}

Matrix4 RigidTransform::matrix() const {
  Matrix4 m = Matrix4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform RigidTransform::inverse() const {
  const Matrix3 rt = rotation_.transpose();
  return {Unchecked{}, rt, -(rt * translation_)};
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return {RigidTransform::Unchecked{}, a.rotation_ * b.rotation_,
          a.rotation_ * b.translation_ + a.translation_};
}

bool RigidTransform::is_approx(const RigidTransform& other, double tolerance) const {
  return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tolerance &&
         (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tolerance;
}

Point3 backproject(const Pixel& px, const Intrinsics& k) {
  if (!(px.d > 0.0) || !std::isfinite(px.d)) {
    throw Error(ErrorCode::kInvalidDepth,
                "back-projection requires depth > 0, got " + std::to_string(px.d));
  }
  return {(px.u - k.cx) * px.d / k.fx, (px.v - k.cy) * px.d / k.fy, px.d};
}

Pixel project(const Point3& p, const Intrinsics& k) {
  if (!(p.z() > 0.0)) {
    throw Error(ErrorCode::kInvalidDepth, "projection requires a point in front of the camera");
  }
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z()};
}

Point3 lidar_to_world(const Point3& p_lidar, const RigidTransform& platform_T_lidar,
                      const Offset3& offset) {
  return platform_T_lidar.apply(p_lidar) + offset.vector();
}

Point3 localize(const Pixel& px, const Intrinsics& k, const RigidTransform& lidar_T_camera,
                const RigidTransform& platform_T_lidar, const Offset3& offset) {
  return lidar_to_world(lidar_T_camera.apply(backproject(px, k)), platform_T_lidar, offset);
}

RigidTransform dh_link(const DhJoint& joint, double theta) {
  const double t = theta + joint.theta_offset;
  const double ct = std::cos(t);
  const double st = std::sin(t);
  const double ca = std::cos(joint.alpha);
  const double sa = std::sin(joint.alpha);
  Matrix3 r;
  r << ct, -st * ca, st * sa,
       st, ct * ca, -ct * sa,
       0.0, sa, ca;
  return RigidTransform(r, Eigen::Vector3d(joint.a * ct, joint.a * st, joint.d));
}

RigidTransform dh_forward(const DhChain& chain, std::span<const double> joints) {
  if (chain.joints.empty()) {
    throw Error(ErrorCode::kDimension, "DH chain has no joints");
  }
  if (joints.size() != chain.joints.size()) {
    throw Error(ErrorCode::kDimension, "expected " + std::to_string(chain.joints.size()) +
                                           " joint values, got " + std::to_string(joints.size()));
  }
  RigidTransform result;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    result = result * dh_link(chain.joints[i], joints[i]);
  }
  return result;
}

RigidTransform gripper_pose(const RigidTransform& base_T_effector,
                            const RigidTransform& effector_T_fingers,
                            const RigidTransform& fingers_T_camera) {
  // T_r^p = T_r^e T_e^p, then T = T_r^p T_p^c.
  const RigidTransform base_T_fingers = base_T_effector * effector_T_fingers;
  return base_T_fingers * fingers_T_camera;
}

}  // namespace wastegrasp::geometry
