#include "stiffkit/linalg.hpp"

#include <cmath>
#include <sstream>

namespace stiffkit {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

bool RigidTransform::is_valid(double tol) const {
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol &&
         translation.allFinite();
}

Mat3 axis_angle(const Vec3& unit_axis, double angle) {
  return Eigen::AngleAxisd(angle, unit_axis).toRotationMatrix();
}

Mat3 rotation_rpy(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

SymEig sym_eig(const Eigen::MatrixXd& A) {
  const double nrm = A.norm();
  const double asym = (A - A.transpose()).norm();
  if (asym > 1e-9 * nrm) {
    std::ostringstream os;
    os << "sym_eig: input asymmetry " << asym << " exceeds 1e-9 * ||A|| = " << 1e-9 * nrm;
    throw NotSymmetric(os.str());
  }
  const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);

  SymEig out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  const double max_abs = out.eigenvalues.size() > 0
                             ? out.eigenvalues.cwiseAbs().maxCoeff()
                             : 0.0;
  out.rank_threshold = std::max(1e-9 * max_abs, 1e-300);
  out.numerical_rank =
      static_cast<int>((out.eigenvalues.cwiseAbs().array() > out.rank_threshold).count());
  return out;
}

namespace {

Eigen::MatrixXd invert_pivot(const Eigen::MatrixXd& block, const char* which) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
  if (!lu.isInvertible()) {
    std::ostringstream os;
    os << "frobenius_block_inverse: " << which << " block is rank-deficient (rank "
       << lu.rank() << " of " << block.rows() << ")";
    throw SingularBlock(os.str());
  }
  return lu.inverse();
}

}  // namespace

Eigen::MatrixXd frobenius_block_inverse(const Eigen::MatrixXd& M, int split) {
  if (M.rows() != M.cols() || split <= 0 || split >= M.rows()) {
    throw std::invalid_argument("frobenius_block_inverse: bad partition");
  }
  const int n = static_cast<int>(M.rows());
  const int m = n - split;
  const Eigen::MatrixXd A = M.topLeftCorner(split, split);
  const Eigen::MatrixXd B = M.topRightCorner(split, m);
  const Eigen::MatrixXd C = M.bottomLeftCorner(m, split);
  const Eigen::MatrixXd D = M.bottomRightCorner(m, m);

  const Eigen::MatrixXd Ainv = invert_pivot(A, "leading");
  const Eigen::MatrixXd Sinv = invert_pivot(D - C * Ainv * B, "Schur-complement");

  Eigen::MatrixXd inv(n, n);
  inv.topLeftCorner(split, split) = Ainv + Ainv * B * Sinv * C * Ainv;
  inv.topRightCorner(split, m) = -Ainv * B * Sinv;
  inv.bottomLeftCorner(m, split) = -Sinv * C * Ainv;
  inv.bottomRightCorner(m, m) = Sinv;
  return inv;
}

double relative_frobenius_diff(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const double scale = std::max(A.norm(), B.norm());
  if (scale == 0.0) return 0.0;
  return (A - B).norm() / scale;
}

double relative_asymmetry(const Eigen::MatrixXd& A) {
  const double nrm = A.norm();
  if (nrm == 0.0) return 0.0;
  return (A - A.transpose()).norm() / nrm;
}

}  // namespace stiffkit
