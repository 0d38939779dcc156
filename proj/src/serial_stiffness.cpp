#include "stiffkit/serial_stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace stiffkit {

namespace {

Mat6 symmetrized(const Mat6& K) { return 0.5 * (K + K.transpose()); }

/// Projector onto the orthogonal complement of the given directions. The
/// exact reduced stiffness annihilates every consumed passive column, so
/// projecting it out removes pure cancellation residue (same role as the
/// symmetrization after each update).
Mat6 complement_projector(const Mat6X& directions) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(directions);
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(6, directions.cols());
  return Mat6::Identity() - Q * Q.transpose();
}

/// Cartesian compliance of the spring set: J_theta K_theta^-1 J_theta^T,
/// with K_theta inverted block-free via an SPD solve.
Mat6 spring_compliance(const JacobianPair& jp, const Eigen::MatrixXd& K_theta) {
  if (K_theta.rows() != jp.J_theta.cols() || K_theta.rows() != K_theta.cols()) {
    throw std::invalid_argument("spring stiffness dimension does not match J_theta");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(K_theta);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("K_theta is not positive-definite");
  }
  const Eigen::MatrixXd Kinv_Jt = llt.solve(jp.J_theta.transpose());
  return jp.J_theta * Kinv_Jt;
}

/// SPD inverse of the 6x6 compliance; shared by base_stiffness and the
/// n_q = 0 saddle-point path so the two agree bitwise.
Mat6 invert_compliance(const Mat6& compliance) {
  Eigen::LLT<Mat6> llt(symmetrized(compliance));
  if (llt.info() != Eigen::Success) {
    throw DeficientSprings("spring compliance is not positive-definite");
  }
  return llt.solve(Mat6::Identity());
}

int jtheta_rank(const Mat6X& J_theta) {
  if (J_theta.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(J_theta);
  return static_cast<int>(qr.rank());
}

std::string join_columns(const std::vector<int>& cols) {
  std::ostringstream os;
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  return os.str();
}

}  // namespace

StiffnessMatrix StiffnessMatrix::from_matrix(const Mat6& K) {
  StiffnessMatrix s;
  s.K = symmetrized(K);
  const SymEig eig = sym_eig(s.K);
  s.rank = eig.numerical_rank;
  s.eigenvalues = eig.eigenvalues;
  s.null_space.resize(6, 6 - s.rank);
  int at = 0;
  for (int i = 0; i < 6; ++i) {
    if (std::abs(eig.eigenvalues(i)) <= eig.rank_threshold) {
      s.null_space.col(at++) = eig.eigenvectors.col(i);
    }
  }
  return s;
}

bool StiffnessMatrix::is_psd(double tol) const {
  return min_eigenvalue() >= -tol * std::max(max_eigenvalue(), 0.0);
}

StiffnessMatrix base_stiffness(const JacobianPair& jp, const Eigen::MatrixXd& K_theta) {
  const int rank = jtheta_rank(jp.J_theta);
  if (rank < 6) {
    std::ostringstream os;
    os << "base_stiffness: rank(J_theta) = " << rank
       << " < 6; chain has no invertible unconstrained stiffness";
    throw DeficientSprings(os.str());
  }
  return StiffnessMatrix::from_matrix(invert_compliance(spring_compliance(jp, K_theta)));
}

StiffnessMatrix dense_kkt_stiffness(const JacobianPair& jp, const Eigen::MatrixXd& K_theta) {
  const int nq = static_cast<int>(jp.J_q.cols());
  const Mat6 compliance = spring_compliance(jp, K_theta);

  if (nq == 0) {
    try {
      return StiffnessMatrix::from_matrix(invert_compliance(compliance));
    } catch (const DeficientSprings& e) {
      throw SingularSystem(e.what());
    }
  }

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(6 + nq, 6 + nq);
  system.topLeftCorner<6, 6>() = compliance;
  system.topRightCorner(6, nq) = jp.J_q;
  system.bottomLeftCorner(nq, 6) = jp.J_q.transpose();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "dense_kkt_stiffness: bordered system singular (rank " << lu.rank() << " of "
       << 6 + nq << "); redundant passive joints or under-spanned chain";
    throw SingularSystem(os.str());
  }
  const Eigen::MatrixXd inv = lu.inverse();
  return StiffnessMatrix::from_matrix(inv.topLeftCorner<6, 6>());
}

std::pair<StiffnessMatrix, ReductionTrace> closed_form_stiffness(const JacobianPair& jp,
                                                                 const Eigen::MatrixXd& K_theta) {
  const StiffnessMatrix K0 = base_stiffness(jp, K_theta);
  const int nq = static_cast<int>(jp.J_q.cols());
  std::vector<std::vector<int>> partition;
  if (nq > 0) {
    partition.emplace_back(nq);
    std::iota(partition.back().begin(), partition.back().end(), 0);
  }
  return recursive_reduce(K0, jp.J_q, partition);
}

std::pair<StiffnessMatrix, ReductionTrace> recursive_reduce(
    const StiffnessMatrix& K0, const Mat6X& J_q,
    const std::vector<std::vector<int>>& partition) {
  const int nq = static_cast<int>(J_q.cols());
  std::vector<char> seen(static_cast<size_t>(nq), 0);
  for (const auto& group : partition) {
    for (int c : group) {
      if (c < 0 || c >= nq || seen[static_cast<size_t>(c)]) {
        throw std::invalid_argument("recursive_reduce: partition must cover each column exactly once");
      }
      seen[static_cast<size_t>(c)] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("recursive_reduce: partition must cover each column exactly once");
  }

  StiffnessMatrix K = K0;
  ReductionTrace trace;
  Mat6X consumed(6, 0);
  for (const auto& group : partition) {
    if (group.empty()) continue;
    const int g = static_cast<int>(group.size());
    Mat6X Jg(6, g);
    for (int i = 0; i < g; ++i) Jg.col(i) = J_q.col(group[static_cast<size_t>(i)]);

    ReductionStep step;
    step.columns = group;
    step.rank_before = K.rank;
    step.u_block = K.K * Jg;
    step.pivot = Jg.transpose() * step.u_block;

    const double tol = 1e-12 * K.K.trace();
    Mat6 reduced;
    if (g == 1) {
      const double mu = step.pivot(0, 0);
      if (!(mu > tol)) {
        std::ostringstream os;
        os << "recursive_reduce: pivot mu = " << mu << " <= " << tol
           << " for passive-joint column " << group[0] << " (direction already compliance-free)";
        throw RedundantPassiveJoints(os.str(), group);
      }
      reduced = K.K - (step.u_block * step.u_block.transpose()) / mu;
    } else {
      Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (step.pivot + step.pivot.transpose()));
      bool singular = llt.info() != Eigen::Success;
      if (!singular) {
        const SymEig eig = sym_eig(step.pivot);
        singular = eig.eigenvalues.minCoeff() <= tol;
      }
      if (singular) {
        std::ostringstream os;
        os << "recursive_reduce: group pivot singular for passive-joint columns {"
           << join_columns(group) << "}";
        throw RedundantPassiveJoints(os.str(), group);
      }
      const Eigen::MatrixXd solved = llt.solve(step.u_block.transpose());
      reduced = K.K - step.u_block * solved;
    }

    // Every column consumed so far lies in the exact kernel; project the
    // accumulated span out to strip cancellation residue. Six independent
    // consumed directions force the zero matrix.
    Mat6X widened(6, consumed.cols() + g);
    widened << consumed, Jg;
    consumed = std::move(widened);
    if (consumed.cols() >= 6) {
      K = StiffnessMatrix::from_matrix(Mat6::Zero());
    } else {
      const Mat6 proj = complement_projector(consumed);
      K = StiffnessMatrix::from_matrix(proj * reduced * proj);
    }

    step.rank_after = K.rank;
    trace.push_back(std::move(step));
  }
  return {K, trace};
}

StiffnessMatrix rank1_update(const StiffnessMatrix& K, const Vec6& jq_col) {
  const Vec6 u = K.K * jq_col;
  const double mu = jq_col.dot(u);
  const double tol = 1e-12 * K.K.trace();
  if (!(mu > tol)) {
    std::ostringstream os;
    os << "rank1_update: mu = " << mu << " <= " << tol << "; passive direction already free";
    throw RedundantPassiveJoint(os.str());
  }
  const Mat6 reduced = K.K - (u * u.transpose()) / mu;
  // jq_col is an exact kernel vector of the result; project it out.
  const Vec6 q = jq_col.normalized();
  const Mat6 proj = Mat6::Identity() - q * q.transpose();
  return StiffnessMatrix::from_matrix(proj * reduced * proj);
}

StiffnessMatrix trivial_update(const StiffnessMatrix& K, int axis_index) {
  if (axis_index < 0 || axis_index > 5) {
    throw std::invalid_argument("trivial_update: axis_index must be in 0..5");
  }
  const double kpp = K.K(axis_index, axis_index);
  const double tol = 1e-12 * K.K.trace();
  if (!(kpp > tol)) {
    std::ostringstream os;
    os << "trivial_update: K(" << axis_index << "," << axis_index << ") = " << kpp
       << " <= " << tol << "; passive direction already free";
    throw RedundantPassiveJoint(os.str(), axis_index);
  }
  Mat6 out;
  for (int j = 0; j < 6; ++j) {
    for (int k = 0; k < 6; ++k) {
      out(j, k) = K.K(j, k) - K.K(j, axis_index) * K.K(axis_index, k) / kpp;
    }
  }
  out.row(axis_index).setZero();
  out.col(axis_index).setZero();
  return StiffnessMatrix::from_matrix(out);
}

PassiveJointClassification classify_passive_joint(const ChainModel& chain, int joint_index) {
  const auto placements = passive_joint_placements(chain);
  if (joint_index < 0 || joint_index >= static_cast<int>(placements.size())) {
    throw std::invalid_argument("classify_passive_joint: joint index out of range");
  }
  const JointPlacement& joint = placements[static_cast<size_t>(joint_index)];
  const Vec3 reference = forward_kinematics(chain).translation;

  constexpr double kAngularTol = 1e-9;   // sin of axis misalignment
  constexpr double kPositionTol = 1e-9;  // meters

  PassiveJointClassification out;

  // Axis parallel to a global axis?
  int axis = -1;
  for (int k = 0; k < 3; ++k) {
    const double c = joint.axis(k);
    if (std::sqrt(std::max(0.0, 1.0 - c * c)) <= kAngularTol) {
      axis = k;
      break;
    }
  }
  if (axis < 0) return out;  // general

  if (joint.kind == JointKind::prismatic) {
    out.kind = PassiveJointClass::trivial_translational;
    out.axis_index = axis;
    return out;
  }

  // Revolute: offset of the joint from the reference point, with the
  // component along the joint axis removed (it does not affect the screw).
  const Vec3 d = joint.point - reference;
  const Vec3 d_perp = d - d.dot(joint.axis) * joint.axis;
  if (d_perp.norm() <= kPositionTol) {
    out.kind = PassiveJointClass::trivial_rotational;
    out.axis_index = 3 + axis;
    return out;
  }
  int significant = 0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d_perp(k)) > kPositionTol) ++significant;
  }
  if (significant == 1) out.kind = PassiveJointClass::quasi_trivial;
  return out;
}

StiffnessMatrix naive_zeroed_stiffness(const StiffnessMatrix& K0,
                                       const std::vector<int>& trivial_indices) {
  Mat6 K = K0.K;
  for (int p : trivial_indices) {
    if (p < 0 || p > 5) throw std::invalid_argument("naive_zeroed_stiffness: index must be in 0..5");
    K.row(p).setZero();
    K.col(p).setZero();
  }
  return StiffnessMatrix::from_matrix(K);
}

bool SoftSpringReport::errors_monotone_decreasing() const {
  for (size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].error <= samples[i - 1].error)) return false;
  }
  return true;
}

std::vector<double> SoftSpringReport::error_ratios() const {
  std::vector<double> ratios;
  for (size_t i = 1; i < samples.size(); ++i) {
    ratios.push_back(samples[i - 1].error / samples[i].error);
  }
  return ratios;
}

SoftSpringReport soft_spring_check(const JacobianPair& jp, const Eigen::MatrixXd& K_theta,
                                   std::span<const double> epsilons) {
  const auto [K_c, trace] = closed_form_stiffness(jp, K_theta);
  const StiffnessMatrix K0 = base_stiffness(jp, K_theta);

  // Stiffening the passive joints to eps is, by the Woodbury identity,
  //   (J_th K_th^-1 J_th^T + (1/eps) J_q J_q^T)^-1
  //     = K0 - K0 J_q (eps I + J_q^T K0 J_q)^-1 J_q^T K0,
  // which stays well conditioned as eps -> 0.
  const Mat6X u = K0.K * jp.J_q;
  const Eigen::MatrixXd pivot0 = jp.J_q.transpose() * u;

  SoftSpringReport report;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("soft_spring_check: epsilon must be > 0");
    Mat6 K_eps = K0.K;
    if (jp.J_q.cols() > 0) {
      Eigen::MatrixXd pivot = pivot0;
      pivot.diagonal().array() += eps;
      Eigen::LLT<Eigen::MatrixXd> llt(pivot);
      if (llt.info() != Eigen::Success) {
        throw RedundantPassiveJoints("soft_spring_check: softened pivot not positive-definite");
      }
      K_eps -= u * llt.solve(u.transpose());
    }
    K_eps = symmetrized(K_eps);
    report.samples.push_back({eps, (K_eps - K_c.K).norm()});
  }
  return report;
}

}  // namespace stiffkit
