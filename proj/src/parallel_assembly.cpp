#include "stiffkit/parallel_assembly.hpp"

#include <sstream>

namespace stiffkit {

Mat6 transport_matrix(const Vec3& v) {
  Mat6 T = Mat6::Identity();
  T.topRightCorner<3, 3>() = skew(v);
  return T;
}

StiffnessMatrix transport_stiffness(const StiffnessMatrix& K, const Vec3& v) {
  const Mat6 Tinv = transport_matrix(-v);
  return StiffnessMatrix::from_matrix(Tinv.transpose() * K.K * Tinv);
}

StiffnessMatrix aggregate(const Assembly& assembly,
                          const std::vector<StiffnessMatrix>& leg_stiffnesses) {
  if (assembly.legs.empty()) {
    throw std::invalid_argument("aggregate: assembly has no legs");
  }
  if (leg_stiffnesses.size() != assembly.legs.size()) {
    throw std::invalid_argument("aggregate: one stiffness required per leg");
  }
  Mat6 total = Mat6::Zero();
  for (size_t i = 0; i < assembly.legs.size(); ++i) {
    total += transport_stiffness(leg_stiffnesses[i], assembly.legs[i].platform_offset).K;
  }
  return StiffnessMatrix::from_matrix(total);
}

void validate_assembly(const Assembly& assembly) {
  if (assembly.legs.empty()) {
    throw ModelError("assembly '" + assembly.name + "' has no legs");
  }
  const Vec3 reference = assembly.reference_pose.translation;
  for (size_t i = 0; i < assembly.legs.size(); ++i) {
    const LegAttachment& leg = assembly.legs[i];
    const Vec3 expected = forward_kinematics(leg.chain).translation - reference;
    const double err = (leg.platform_offset - expected).norm();
    if (err > 1e-9) {
      std::ostringstream os;
      os << "assembly '" << assembly.name << "' leg " << i << " ('" << leg.chain.name
         << "'): platform_offset deviates from FK end-point minus reference by " << err
         << " m (tolerance 1e-9)";
      throw ModelError(os.str());
    }
  }
}

}  // namespace stiffkit
