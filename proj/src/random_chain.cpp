#include "stiffkit/random_chain.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace stiffkit {

namespace {

/// Uniform double in [0, 1) from raw generator bits; avoids the
/// implementation-defined layout of std::uniform_real_distribution.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int uniform_int(int n) { return static_cast<int>(uniform() * n); }

  Vec3 unit_vector() {
    while (true) {
      Vec3 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
      const double n = v.norm();
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

  Mat3 rotation() { return axis_angle(unit_vector(), uniform(0.0, 2.0 * std::numbers::pi)); }

  RigidTransform transform(double translation_scale) {
    RigidTransform t;
    t.rotation = rotation();
    t.translation = translation_scale * Vec3(uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return t;
  }

  /// SPD with log-uniform spectrum in [k_min, k_max] and a random orthogonal
  /// eigenbasis.
  Mat6 spd_matrix(double k_min, double k_max) {
    Eigen::Matrix<double, 6, 6> G;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) G(i, j) = uniform(-1.0, 1.0);
    }
    const Mat6 Q = Eigen::HouseholderQR<Mat6>(G).householderQ();
    Vec6 d;
    for (int i = 0; i < 6; ++i) d(i) = log_uniform(k_min, k_max);
    return Q * d.asDiagonal() * Q.transpose();
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace

ChainModel make_random_chain(const RandomChainSpec& spec, std::uint64_t seed) {
  if (spec.n_springs6 < 0 || spec.n_actuated < 0 || spec.n_passive < 0 ||
      spec.n_springs6 * 6 + spec.n_actuated < 1) {
    throw std::invalid_argument("make_random_chain: invalid spec");
  }
  if (spec.n_passive > 5) {
    throw std::invalid_argument("make_random_chain: n_passive must be <= 5; more passive "
                                "joints leave no resisted Cartesian direction");
  }

  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * attempt);

    // Element kind sequence, shuffled so joints and springs interleave.
    enum Kind { kSpring6, kActuated, kPassive };
    std::vector<Kind> kinds;
    kinds.insert(kinds.end(), spec.n_springs6, kSpring6);
    kinds.insert(kinds.end(), spec.n_actuated, kActuated);
    kinds.insert(kinds.end(), spec.n_passive, kPassive);
    for (int i = static_cast<int>(kinds.size()) - 1; i > 0; --i) {
      std::swap(kinds[i], kinds[rng.uniform_int(i + 1)]);
    }

    ChainModel chain;
    chain.name = "random_chain_" + std::to_string(seed);
    chain.base_pose = rng.transform(0.5);
    for (Kind kind : kinds) {
      chain.elements.push_back(RigidLink{rng.transform(0.5)});
      switch (kind) {
        case kSpring6:
          chain.elements.push_back(VirtualSpring6{rng.spd_matrix(spec.k_min, spec.k_max)});
          break;
        case kActuated:
          chain.elements.push_back(ActuatedJoint{
              rng.unit_vector(),
              rng.uniform() < 0.5 ? JointKind::revolute : JointKind::prismatic,
              rng.log_uniform(spec.k_min, spec.k_max)});
          break;
        case kPassive:
          chain.elements.push_back(PassiveJoint{
              rng.unit_vector(),
              rng.uniform() < 0.5 ? JointKind::revolute : JointKind::prismatic});
          break;
      }
    }
    chain.elements.push_back(RigidLink{rng.transform(0.5)});

    const JacobianPair jp = jacobians(chain);
    const auto rank = [](const Mat6X& J) {
      if (J.cols() == 0) return Eigen::Index{0};
      return Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(J).rank();
    };
    if (rank(jp.J_theta) < std::min<Eigen::Index>(6, jp.J_theta.cols())) continue;
    if (rank(jp.J_q) < jp.J_q.cols()) continue;
    return chain;
  }
}

}  // namespace stiffkit
