#pragma once

#include "stiffkit/serial_stiffness.hpp"

namespace stiffkit {

/// One leg of a parallel manipulator: a serial chain plus the rigid platform
/// extension from its end-point to the platform reference point.
/// platform_offset is the position of the leg end-point relative to the
/// platform reference point, in the global frame.
struct LegAttachment {
  ChainModel chain;
  Vec3 platform_offset = Vec3::Zero();
};

struct Assembly {
  std::string name;
  std::vector<LegAttachment> legs;
  RigidTransform reference_pose;
};

/// [[I3, skew(v)], [0, I3]]; its inverse is transport_matrix(-v).
Mat6 transport_matrix(const Vec3& v);

/// Relocates a stiffness matrix expressed at a point offset by v from the
/// target reference point: K' = T(v)^-T K T(v)^-1. Congruence, so rank and
/// definiteness are preserved.
StiffnessMatrix transport_stiffness(const StiffnessMatrix& K, const Vec3& v);

/// Superposition over legs: K = sum_i transport_stiffness(K_i, v_i), summed
/// in leg order for bitwise reproducibility.
StiffnessMatrix aggregate(const Assembly& assembly,
                          const std::vector<StiffnessMatrix>& leg_stiffnesses);

/// Checks each leg's platform_offset against FK end-point minus reference
/// point (tolerance 1e-9 m). Throws ModelError on mismatch.
void validate_assembly(const Assembly& assembly);

}  // namespace stiffkit
