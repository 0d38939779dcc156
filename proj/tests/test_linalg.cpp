#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stiffkit/linalg.hpp"
#include "test_support.hpp"

using namespace stiffkit;
using stiffkit::testing::TestRng;

TEST_CASE("skew matches the cross-product matrix definition") {
  Mat3 expected;
  expected << 0, -3, 2,
              3, 0, -1,
             -2, 1, 0;
  CHECK((skew(Vec3(1, 2, 3)) - expected).norm() == 0.0);
  CHECK(skew(Vec3::Zero()).norm() == 0.0);
}

TEST_CASE("skew(v) * w equals cross(v, w) and skew is antisymmetric") {
  TestRng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v = rng.vec3(10.0);
    const Vec3 w = rng.vec3(10.0);
    const Vec3 via_matrix = skew(v) * w;
    const Vec3 via_cross = v.cross(w);
    CHECK((via_matrix - via_cross).norm() <= 1e-14 * (1.0 + via_cross.norm()));
    CHECK((skew(v).transpose() + skew(v)).norm() == 0.0);
  }
}

TEST_CASE("frobenius_block_inverse: block-diagonal input decouples") {
  TestRng rng(11);
  const Eigen::MatrixXd A = rng.spd(4);
  const Eigen::MatrixXd D = rng.spd(3);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(7, 7);
  M.topLeftCorner(4, 4) = A;
  M.bottomRightCorner(3, 3) = D;

  const Eigen::MatrixXd inv = frobenius_block_inverse(M, 4);
  CHECK((inv.topLeftCorner(4, 4) * A - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  CHECK((inv.bottomRightCorner(3, 3) * D - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK(inv.topRightCorner(4, 3).norm() < 1e-13);
  CHECK(inv.bottomLeftCorner(3, 4).norm() < 1e-13);
}

TEST_CASE("frobenius_block_inverse: 2x2 scalar blocks, hand inversion") {
  Eigen::MatrixXd M(2, 2);
  M << 2, 1, 1, 2;
  const Eigen::MatrixXd inv = frobenius_block_inverse(M, 1);
  CHECK(inv(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(inv(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(inv(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(inv(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("frobenius_block_inverse agrees with dense LU on random SPD 12x12") {
  TestRng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::MatrixXd M = rng.spd(12, 0.5, 8.0);
    const Eigen::MatrixXd via_blocks = frobenius_block_inverse(M, 6);
    const Eigen::MatrixXd via_lu = Eigen::FullPivLU<Eigen::MatrixXd>(M).inverse();
    CHECK(relative_frobenius_diff(via_blocks, via_lu) <= 1e-11);
    CHECK((via_blocks * M - Eigen::MatrixXd::Identity(12, 12)).norm() / M.norm() <= 1e-10);
  }
}

TEST_CASE("frobenius_block_inverse rejects singular pivots") {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4, 4);
  M.bottomRightCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(frobenius_block_inverse(M, 2), SingularBlock);

  // A invertible but Schur complement singular: D = C A^-1 B.
  TestRng rng(17);
  const Eigen::MatrixXd A = rng.spd(2);
  const Eigen::MatrixXd B = rng.matrix(2, 2);
  Eigen::MatrixXd M2(4, 4);
  M2.topLeftCorner(2, 2) = A;
  M2.topRightCorner(2, 2) = B;
  M2.bottomLeftCorner(2, 2) = B.transpose();
  M2.bottomRightCorner(2, 2) = B.transpose() * A.inverse() * B;
  CHECK_THROWS_AS(frobenius_block_inverse(M2, 2), SingularBlock);
}

TEST_CASE("sym_eig: identity and a diagonal with one zero mode") {
  const SymEig id = sym_eig(Eigen::MatrixXd::Identity(6, 6));
  CHECK(id.numerical_rank == 6);
  for (int i = 0; i < 6; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));

  Eigen::VectorXd d(6);
  d << 1, 2, 0, 4, 5, 6;
  const SymEig eig = sym_eig(d.asDiagonal().toDenseMatrix());
  CHECK(eig.numerical_rank == 5);
  // Null vector is e3 (up to sign).
  const Eigen::VectorXd null_vec = eig.eigenvectors.col(0);
  CHECK(std::abs(null_vec(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.eigenvalues(0) == doctest::Approx(0.0));
}

TEST_CASE("sym_eig: zero matrix has rank 0") {
  CHECK(sym_eig(Eigen::MatrixXd::Zero(6, 6)).numerical_rank == 0);
}

TEST_CASE("sym_eig rejects asymmetric input") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  A(0, 1) = 1e-3;
  CHECK_THROWS_AS(sym_eig(A), NotSymmetric);
}

TEST_CASE("sym_eig reconstruction error stays below 1e-10 relative") {
  TestRng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd A = rng.matrix(6, 6, 100.0);
    A = (A + A.transpose()).eval();
    const SymEig eig = sym_eig(A);
    const Eigen::MatrixXd reconstructed =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((reconstructed - A).norm() <= 1e-10 * A.norm());
  }
}

TEST_CASE("sym_eig numerical rank is invariant under orthogonal similarity") {
  TestRng rng(23);
  Eigen::VectorXd d(6);
  d << 3.0, 2.0, 1.0, 0.0, 0.0, 0.0;  // fixed rank 3
  const Eigen::MatrixXd base = d.asDiagonal().toDenseMatrix();
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd Q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(rng.matrix(6, 6)).householderQ() *
        Eigen::MatrixXd::Identity(6, 6);
    CHECK(sym_eig(Q * base * Q.transpose()).numerical_rank == 3);
  }
}

TEST_CASE("rigid transform composition, inverse and validity") {
  TestRng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    RigidTransform a{rng.rotation(), rng.vec3(2.0)};
    RigidTransform b{rng.rotation(), rng.vec3(2.0)};
    CHECK(a.is_valid());
    const RigidTransform ab = a * b;
    const Vec3 p = rng.vec3(3.0);
    CHECK((ab.apply(p) - a.apply(b.apply(p))).norm() < 1e-12);
    const RigidTransform round_trip = a.inverse() * a;
    CHECK((round_trip.rotation - Mat3::Identity()).norm() < 1e-13);
    CHECK(round_trip.translation.norm() < 1e-13);
  }
  RigidTransform bad;
  bad.rotation(0, 0) = 1.5;
  CHECK(!bad.is_valid());
}

TEST_CASE("rotation_rpy composes Rz * Ry * Rx") {
  const double roll = 0.3, pitch = -0.4, yaw = 1.1;
  const Mat3 R = rotation_rpy(roll, pitch, yaw);
  const Mat3 expected = axis_angle(Vec3::UnitZ(), yaw) * axis_angle(Vec3::UnitY(), pitch) *
                        axis_angle(Vec3::UnitX(), roll);
  CHECK((R - expected).norm() < 1e-15);
}
