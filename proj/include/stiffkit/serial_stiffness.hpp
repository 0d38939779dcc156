#pragma once

#include <span>
#include <vector>

#include "stiffkit/chain_model.hpp"

namespace stiffkit {

/// 6x6 Cartesian stiffness with cached rank / kernel data. Always stored
/// symmetrized; rank uses the sym_eig threshold (1e-9 relative to the
/// largest |eigenvalue|). Negative eigenvalues above -1e-9*lambda_max are
/// rounding noise and count as kernel.
struct StiffnessMatrix {
  Mat6 K = Mat6::Zero();
  int rank = 0;
  Eigen::VectorXd eigenvalues;  // ascending
  Mat6X null_space;             // orthonormal kernel basis, 6 x (6 - rank)

  static StiffnessMatrix from_matrix(const Mat6& K);

  bool is_psd(double tol = 1e-9) const;
  double min_eigenvalue() const { return eigenvalues(0); }
  double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// One recursion step: which J_q columns were consumed, the pivot
/// J_q^T K J_q (1x1 scalar mu for a single column), the block u = K J_q,
/// and the numerical rank before/after.
struct ReductionStep {
  std::vector<int> columns;
  Eigen::MatrixXd pivot;
  Mat6X u_block;
  int rank_before = 0;
  int rank_after = 0;
};

using ReductionTrace = std::vector<ReductionStep>;

/// K_c^0 = (J_theta K_theta^-1 J_theta^T)^-1, the stiffness of the chain
/// with all passive joints locked. Requires rank(J_theta) = 6; throws
/// DeficientSprings otherwise (use dense_kkt_stiffness for such chains).
StiffnessMatrix base_stiffness(const JacobianPair& jp, const Eigen::MatrixXd& K_theta);

/// Saddle-point route: assembles the bordered system
///   [ J_th K_th^-1 J_th^T   J_q ] [F]   [dt]
///   [       J_q^T            0  ] [q] = [0 ]
/// inverts it densely and extracts the top-left 6x6 block. Works even when
/// rank(J_theta) < 6. Serves as the oracle for the other routes.
StiffnessMatrix dense_kkt_stiffness(const JacobianPair& jp, const Eigen::MatrixXd& K_theta);

/// Closed two-term form
///   K_c = K0 - K0 J_q (J_q^T K0 J_q)^-1 J_q^T K0,   K0 = base_stiffness.
/// rank(K_c) = 6 - n_q for non-redundant passive joints.
std::pair<StiffnessMatrix, ReductionTrace> closed_form_stiffness(const JacobianPair& jp,
                                                                 const Eigen::MatrixXd& K_theta);

/// Applies the two-term reduction once per column group, in the given order.
/// The result is independent of the partition; singleton groups give the
/// n_q-step scalar recursion. Throws RedundantPassiveJoints when a group
/// pivot is singular at the trace-scaled tolerance.
std::pair<StiffnessMatrix, ReductionTrace> recursive_reduce(
    const StiffnessMatrix& K0, const Mat6X& J_q,
    const std::vector<std::vector<int>>& partition);

/// Single-column step: K' = K - (1/mu) u u^T with u = K j, mu = j^T K j.
/// The matrix inversion degenerates to a scalar division; rank drops by one
/// and j becomes a kernel vector. Throws RedundantPassiveJoint when
/// mu <= 1e-12 * trace(K).
StiffnessMatrix rank1_update(const StiffnessMatrix& K, const Vec6& jq_col);

/// Analytic template for a passive joint whose screw is a coordinate axis
/// e_p: K'_jk = K_jk - K_jp K_pk / K_pp, then row/column p are exactly zero.
/// Identical to rank1_update(K, e_p) up to rounding. axis_index is 0-based.
StiffnessMatrix trivial_update(const StiffnessMatrix& K, int axis_index);

enum class PassiveJointClass {
  trivial_translational,  // axis-aligned prismatic, any position
  trivial_rotational,     // axis-aligned revolute through the reference point
  quasi_trivial,          // axis-aligned revolute offset along one global axis
  general,
};

struct PassiveJointClassification {
  PassiveJointClass kind = PassiveJointClass::general;
  // For trivial classes: 0-based coordinate index of the screw axis
  // (0..2 translational, 3..5 rotational); -1 otherwise.
  int axis_index = -1;
};

/// Classifies the joint_index-th passive joint of the chain (J_q column
/// order) by its global screw geometry relative to the chain end point.
PassiveJointClassification classify_passive_joint(const ChainModel& chain, int joint_index);

/// The literature's shortcut: rows and columns at the given coordinate
/// indices set to zero. Coincides with trivial_update only for diagonal K0.
StiffnessMatrix naive_zeroed_stiffness(const StiffnessMatrix& K0,
                                       const std::vector<int>& trivial_indices);

struct SoftSpringSample {
  double epsilon = 0.0;
  double error = 0.0;  // ||K(eps) - K_c||_F
};

/// Convergence report for modeling each passive joint as a spring of
/// stiffness eps: K(eps) = (J_th K_th^-1 J_th^T + (1/eps) J_q J_q^T)^-1,
/// evaluated through the equivalent Woodbury form for conditioning.
struct SoftSpringReport {
  std::vector<SoftSpringSample> samples;  // in input epsilon order
  bool errors_monotone_decreasing() const;
  /// error ratio per consecutive epsilon pair (empty if < 2 samples).
  std::vector<double> error_ratios() const;
};

SoftSpringReport soft_spring_check(const JacobianPair& jp, const Eigen::MatrixXd& K_theta,
                                   std::span<const double> epsilons);

}  // namespace stiffkit
