#pragma once

#include <random>

#include "stiffkit/linalg.hpp"

namespace stiffkit::testing {

/// Seeded helper mirroring the library's bit-derived uniform doubles so test
/// fixtures are reproducible across runs.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vec3 vec3(double scale = 1.0) {
    return scale * Vec3(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
  }

  Vec3 unit_vector() {
    while (true) {
      const Vec3 v = vec3();
      const double n = v.norm();
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

  Eigen::MatrixXd matrix(int rows, int cols, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = scale * uniform(-1.0, 1.0);
    }
    return m;
  }

  /// SPD with spectrum uniform in [lo, hi].
  Eigen::MatrixXd spd(int n, double lo = 0.5, double hi = 5.0) {
    const Eigen::MatrixXd G = matrix(n, n);
    const Eigen::MatrixXd Q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ() * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(lo, hi);
    return Q * d.asDiagonal() * Q.transpose();
  }

  Mat3 rotation() { return axis_angle(unit_vector(), uniform(0.0, 6.28)); }

private:
  std::mt19937_64 engine_;
};

}  // namespace stiffkit::testing
