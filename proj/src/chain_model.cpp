#include "stiffkit/chain_model.hpp"

#include <cmath>
#include <sstream>

namespace stiffkit {

namespace {

template <class T>
int count_elements(const ChainModel& chain) {
  int n = 0;
  for (const auto& e : chain.elements) {
    if (std::holds_alternative<T>(e)) ++n;
  }
  return n;
}

Vec6 revolute_screw(const Vec3& axis_global, const Vec3& point_global, const Vec3& end) {
  Vec6 col;
  col.head<3>() = axis_global.cross(end - point_global);
  col.tail<3>() = axis_global;
  return col;
}

Vec6 prismatic_screw(const Vec3& axis_global) {
  Vec6 col = Vec6::Zero();
  col.head<3>() = axis_global;
  return col;
}

}  // namespace

int ChainModel::num_passive() const { return count_elements<PassiveJoint>(*this); }
int ChainModel::num_actuated() const { return count_elements<ActuatedJoint>(*this); }
int ChainModel::num_springs6() const { return count_elements<VirtualSpring6>(*this); }
int ChainModel::num_spring_coords() const { return num_actuated() + 6 * num_springs6(); }

void ChainModel::validate() const {
  if (!base_pose.is_valid()) {
    throw std::invalid_argument("chain '" + name + "': base pose is not a proper rigid transform");
  }
  auto check_axis = [this](const Vec3& a, size_t idx) {
    if (std::abs(a.norm() - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "chain '" << name << "': element " << idx << " axis is not unit length";
      throw std::invalid_argument(os.str());
    }
  };
  for (size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    if (const auto* link = std::get_if<RigidLink>(&e)) {
      if (!link->transform.is_valid()) {
        std::ostringstream os;
        os << "chain '" << name << "': element " << i << " link transform is invalid";
        throw std::invalid_argument(os.str());
      }
    } else if (const auto* spring = std::get_if<VirtualSpring6>(&e)) {
      if (relative_asymmetry(spring->stiffness) > 1e-9) {
        std::ostringstream os;
        os << "chain '" << name << "': element " << i << " spring matrix is not symmetric";
        throw std::invalid_argument(os.str());
      }
      const SymEig eig = sym_eig(spring->stiffness);
      if (eig.eigenvalues.minCoeff() <= 0.0) {
        std::ostringstream os;
        os << "chain '" << name << "': element " << i << " spring matrix is not positive-definite";
        throw std::invalid_argument(os.str());
      }
    } else if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
      check_axis(act->axis, i);
      if (!(act->stiffness > 0.0)) {
        std::ostringstream os;
        os << "chain '" << name << "': element " << i << " actuated joint stiffness must be > 0";
        throw std::invalid_argument(os.str());
      }
    } else if (const auto* passive = std::get_if<PassiveJoint>(&e)) {
      check_axis(passive->axis, i);
    }
  }
  if (num_spring_coords() < 1) {
    throw std::invalid_argument("chain '" + name + "': needs at least one virtual spring coordinate");
  }
}

RigidTransform forward_kinematics(const ChainModel& chain) {
  RigidTransform pose = chain.base_pose;
  for (const auto& e : chain.elements) {
    if (const auto* link = std::get_if<RigidLink>(&e)) {
      pose = pose * link->transform;
    }
    // Joints and springs at nominal value contribute identity motion.
  }
  return pose;
}

JacobianPair jacobians(const ChainModel& chain) {
  const RigidTransform end = forward_kinematics(chain);
  const Vec3 t_end = end.translation;

  JacobianPair jp;
  jp.end_pose = end;

  std::vector<Vec6> theta_cols, q_cols;
  RigidTransform pose = chain.base_pose;
  for (size_t i = 0; i < chain.elements.size(); ++i) {
    const auto& e = chain.elements[i];
    if (const auto* link = std::get_if<RigidLink>(&e)) {
      pose = pose * link->transform;
    } else if (std::holds_alternative<VirtualSpring6>(e)) {
      // Spring coordinates are global-aligned: the 6 columns are exactly the
      // columns of the transport matrix for the spring's offset from the end.
      for (int k = 0; k < 3; ++k) {
        theta_cols.push_back(prismatic_screw(Vec3::Unit(k)));
        jp.theta_column_elements.push_back(static_cast<int>(i));
      }
      for (int k = 0; k < 3; ++k) {
        theta_cols.push_back(revolute_screw(Vec3::Unit(k), pose.translation, t_end));
        jp.theta_column_elements.push_back(static_cast<int>(i));
      }
    } else if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
      const Vec3 axis = pose.rotation * act->axis;
      theta_cols.push_back(act->kind == JointKind::revolute
                               ? revolute_screw(axis, pose.translation, t_end)
                               : prismatic_screw(axis));
      jp.theta_column_elements.push_back(static_cast<int>(i));
    } else if (const auto* passive = std::get_if<PassiveJoint>(&e)) {
      const Vec3 axis = pose.rotation * passive->axis;
      q_cols.push_back(passive->kind == JointKind::revolute
                           ? revolute_screw(axis, pose.translation, t_end)
                           : prismatic_screw(axis));
      jp.q_column_elements.push_back(static_cast<int>(i));
    }
  }

  jp.J_theta.resize(6, static_cast<Eigen::Index>(theta_cols.size()));
  for (size_t c = 0; c < theta_cols.size(); ++c) jp.J_theta.col(static_cast<Eigen::Index>(c)) = theta_cols[c];
  jp.J_q.resize(6, static_cast<Eigen::Index>(q_cols.size()));
  for (size_t c = 0; c < q_cols.size(); ++c) jp.J_q.col(static_cast<Eigen::Index>(c)) = q_cols[c];
  return jp;
}

std::vector<JointPlacement> passive_joint_placements(const ChainModel& chain) {
  std::vector<JointPlacement> placements;
  RigidTransform pose = chain.base_pose;
  for (size_t i = 0; i < chain.elements.size(); ++i) {
    const auto& e = chain.elements[i];
    if (const auto* link = std::get_if<RigidLink>(&e)) {
      pose = pose * link->transform;
    } else if (const auto* passive = std::get_if<PassiveJoint>(&e)) {
      JointPlacement p;
      p.axis = pose.rotation * passive->axis;
      p.point = pose.translation;
      p.kind = passive->kind;
      p.element_index = static_cast<int>(i);
      placements.push_back(p);
    }
  }
  return placements;
}

Eigen::MatrixXd spring_stiffness_matrix(const ChainModel& chain) {
  const int n = chain.num_spring_coords();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  int at = 0;
  for (const auto& e : chain.elements) {
    if (const auto* spring = std::get_if<VirtualSpring6>(&e)) {
      K.block<6, 6>(at, at) = spring->stiffness;
      at += 6;
    } else if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
      K(at, at) = act->stiffness;
      at += 1;
    }
  }
  return K;
}

}  // namespace stiffkit
