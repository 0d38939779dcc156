#pragma once

#include <string>
#include <variant>
#include <vector>

#include "stiffkit/linalg.hpp"

namespace stiffkit {

// External loading [force N | torque N*m] and small pose change
// [position m | small-angle rad], same ordering as Vec6.
using Wrench = Vec6;
using PoseVector = Vec6;

enum class JointKind { revolute, prismatic };

struct RigidLink {
  RigidTransform transform;
};

/// Six-dimensional localized spring. Its generalized coordinates are taken
/// in the global frame: three translations along x, y, z followed by three
/// rotations about x, y, z through the spring's location.
struct VirtualSpring6 {
  Mat6 stiffness;  // symmetric positive-definite
};

struct ActuatedJoint {
  Vec3 axis;  // unit, local frame
  JointKind kind = JointKind::revolute;
  double stiffness = 0.0;  // > 0
};

struct PassiveJoint {
  Vec3 axis;  // unit, local frame
  JointKind kind = JointKind::revolute;
};

using ChainElement = std::variant<RigidLink, VirtualSpring6, ActuatedJoint, PassiveJoint>;

/// One serial kinematic chain frozen at a fixed configuration. Joints store
/// geometry only; their axes are local and propagated to the global frame by
/// forward kinematics.
struct ChainModel {
  std::string name;
  RigidTransform base_pose;
  std::vector<ChainElement> elements;

  int num_passive() const;
  int num_actuated() const;
  int num_springs6() const;
  /// n_theta = actuated joints + 6 * six-dof springs.
  int num_spring_coords() const;

  /// Throws std::invalid_argument on a malformed chain (non-unit axis,
  /// asymmetric or non-PD spring, non-positive actuator stiffness, n_theta < 1).
  void validate() const;
};

/// Screw Jacobians of a chain, all columns referred to the chain end point in
/// the global frame. Revolute column [a x (t_end - p); a], prismatic [a; 0].
/// A spring contributes 6 consecutive columns (3 prismatic along the global
/// axes, then 3 revolute about the spring's location).
struct JacobianPair {
  Mat6X J_theta;  // 6 x n_theta
  Mat6X J_q;      // 6 x n_q
  RigidTransform end_pose;
  // Element index that produced each column (diagnostics).
  std::vector<int> theta_column_elements;
  std::vector<int> q_column_elements;
};

/// Global-frame placement of one joint, resolved by forward kinematics.
struct JointPlacement {
  Vec3 axis;   // unit, global frame
  Vec3 point;  // joint location, global frame
  JointKind kind = JointKind::revolute;
  int element_index = -1;
};

RigidTransform forward_kinematics(const ChainModel& chain);

JacobianPair jacobians(const ChainModel& chain);

/// Placements of the passive joints only, in element order (one entry per
/// J_q column).
std::vector<JointPlacement> passive_joint_placements(const ChainModel& chain);

/// Block-diagonal aggregated spring stiffness K_theta (n_theta x n_theta),
/// blocks in element order: each 6-dof spring a 6x6 block, each actuated
/// joint a 1x1 block.
Eigen::MatrixXd spring_stiffness_matrix(const ChainModel& chain);

}  // namespace stiffkit
