#pragma once

#include <Eigen/Dense>

#include "stiffkit/errors.hpp"

namespace stiffkit {

// Twist/wrench component ordering is fixed library-wide:
// [linear x, y, z | angular x, y, z].
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// Cross-product matrix: skew(v) * w == v x w, skew(v)^T == -skew(v).
Mat3 skew(const Vec3& v);

/// Proper rigid transform (rotation is orthonormal, det +1 within 1e-12).
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform translate(const Vec3& t) { return {Mat3::Identity(), t}; }

  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, translation + rotation * other.translation};
  }
  Vec3 apply(const Vec3& p) const { return translation + rotation * p; }
  RigidTransform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }
  bool is_valid(double tol = 1e-12) const;
};

/// Rotation about a unit axis by angle (Rodrigues).
Mat3 axis_angle(const Vec3& unit_axis, double angle);

/// XYZ roll-pitch-yaw convention: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rotation_rpy(double roll, double pitch, double yaw);

/// Eigendecomposition of a symmetric matrix with a numerical-rank estimate.
/// Eigenvalues ascending; numerical_rank counts |lambda| > threshold with
/// threshold = 1e-9 * max|lambda|, floored at 1e-300 for the zero matrix.
struct SymEig {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
  int numerical_rank = 0;
  double rank_threshold = 0.0;
};

/// Throws NotSymmetric if ||A - A^T||_F > 1e-9 ||A||_F; symmetrizes internally.
SymEig sym_eig(const Eigen::MatrixXd& A);

/// Blockwise inversion of M = [[A, B], [C, D]] via the Frobenius formula,
/// A the leading split x split block. Throws SingularBlock if A or the Schur
/// complement D - C A^-1 B is rank-deficient.
Eigen::MatrixXd frobenius_block_inverse(const Eigen::MatrixXd& M, int split);

/// ||A - B||_F / max(||A||_F, ||B||_F); zero when both are zero.
double relative_frobenius_diff(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// ||A - A^T||_F / ||A||_F (0 for the zero matrix).
double relative_asymmetry(const Eigen::MatrixXd& A);

}  // namespace stiffkit
