#pragma once

#include "stiffkit/parallel_assembly.hpp"

namespace stiffkit {

enum class StewartCase { A, B };

/// Geometry and elasticity parameters of the two hexapod case studies.
/// Case A: base and platform attachments regularly spaced at 60 degrees,
/// aligned (radial legs). Case B: attachments paired at 120 degrees on the
/// base, platform angles split +-60 degrees (octahedral crossing).
struct StewartParams {
  double R = 0.0;       // base attachment radius, m
  double r = 0.0;       // platform attachment radius, m
  double h = 0.0;       // vertical base-to-platform distance, m
  double K11 = 0.0;     // actuator axial stiffness, N/m
  double k_link = 0.0;  // 6-dof link-spring scale; defaults to 1e6 * K11
  StewartCase which = StewartCase::A;

  static StewartParams make(StewartCase which, double R, double r, double h, double K11,
                            double k_link = 0.0);

  double d_a() const { return R - r; }
  double d_b() const { return R / 2.0 - r; }
  /// All six legs are congruent; squared length per case.
  double leg_length_sq() const;
};

/// Axial stiffness of actuator and link spring in series,
/// (1/K11 + 1/k_link)^-1: the single nonzero stiffness eigenvalue of a leg.
double effective_axial_stiffness(const StewartParams& params);

struct LegGeometry {
  Vec3 base_point;
  Vec3 platform_point;
  Vec3 u0;  // unit leg direction, base to platform
  Vec3 v;   // platform_point relative to the platform reference point
  double L = 0.0;
};

/// The six leg placements for the case; platform reference at (0, 0, h).
std::vector<LegGeometry> case_leg_geometry(const StewartParams& params);

/// UPS leg: rigid offset to the base point, passive universal joint, 6-dof
/// link spring, actuated prismatic joint along the leg, rigid link of length
/// L, passive spherical joint at the platform point. n_q = 5, n_theta = 7.
ChainModel build_leg_model(const LegGeometry& geom, const StewartParams& params);

/// Leg chain without the link spring (actuator is the only elasticity);
/// rank(J_theta) = 1, so only the saddle-point route applies.
ChainModel build_actuator_only_leg_model(const LegGeometry& geom, const StewartParams& params);

/// Full six-leg assembly. Throws DegenerateGeometry for non-positive
/// parameters, zero-length legs, or attachment points coinciding beyond the
/// case's pairing intent.
Assembly build_case(const StewartParams& params);

/// Direct evaluation of the rank-1 superposition
///   K = K11 * sum_i [u_i; v_i x u_i] [u_i; v_i x u_i]^T.
StiffnessMatrix analytic_rank1_sum(const std::vector<LegGeometry>& legs, double K11);

/// The closed-form case matrices (prefactor 3*K11/L^2); Case A has a zero
/// (6,6) entry (free rotation about the vertical axis), Case B is
/// non-singular with (6,6) = 1.5 r^2 R^2.
StiffnessMatrix analytic_case_matrix(const StewartParams& params);

/// Deterministic orthonormal pair completing u0 to a right-handed triad
/// (n1, n2, u0); Gram-Schmidt against the global axis least aligned with u0.
std::pair<Vec3, Vec3> axis_complement(const Vec3& u0);

}  // namespace stiffkit
