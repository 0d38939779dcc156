#include "stiffkit/stewart_gough.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace stiffkit {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "stewart params: " << name << " must be positive and finite, got " << value;
    throw DegenerateGeometry(os.str());
  }
}

}  // namespace

StewartParams StewartParams::make(StewartCase which, double R, double r, double h, double K11,
                                  double k_link) {
  StewartParams p;
  p.which = which;
  p.R = R;
  p.r = r;
  p.h = h;
  p.K11 = K11;
  p.k_link = k_link > 0.0 ? k_link : 1e6 * K11;
  return p;
}

double StewartParams::leg_length_sq() const {
  return which == StewartCase::A ? h * h + d_a() * d_a()
                                 : h * h + R * R + r * r - R * r;
}

double effective_axial_stiffness(const StewartParams& params) {
  return 1.0 / (1.0 / params.K11 + 1.0 / params.k_link);
}

std::vector<LegGeometry> case_leg_geometry(const StewartParams& params) {
  require_positive(params.R, "R");
  require_positive(params.r, "r");
  require_positive(params.h, "h");
  require_positive(params.K11, "K11");
  require_positive(params.k_link, "k_link");

  const Vec3 reference(0.0, 0.0, params.h);
  std::vector<LegGeometry> legs;
  legs.reserve(6);
  for (int i = 0; i < 6; ++i) {
    double base_angle, platform_angle;
    if (params.which == StewartCase::A) {
      base_angle = 60.0 * i * kDegree;
      platform_angle = base_angle;
    } else {
      base_angle = 120.0 * (i / 2) * kDegree;
      platform_angle = (120.0 * (i / 2) + (i % 2 == 0 ? 60.0 : -60.0)) * kDegree;
    }
    LegGeometry g;
    g.base_point = Vec3(params.R * std::cos(base_angle), params.R * std::sin(base_angle), 0.0);
    g.platform_point =
        Vec3(params.r * std::cos(platform_angle), params.r * std::sin(platform_angle), params.h);
    const Vec3 d = g.platform_point - g.base_point;
    g.L = d.norm();
    if (!(g.L > 1e-12)) {
      std::ostringstream os;
      os << "stewart case: leg " << i << " has zero length";
      throw DegenerateGeometry(os.str());
    }
    g.u0 = d / g.L;
    g.v = g.platform_point - reference;
    legs.push_back(g);
  }

  // Coincidence allowed only where the case pairs attachments by design:
  // Case B shares base points within pairs {0,1},{2,3},{4,5} and platform
  // points between legs {0,3},{1,4},{2,5}.
  const double tol = 1e-9 * std::max(params.R, params.r);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const bool base_paired =
          params.which == StewartCase::B && (i / 2 == j / 2);
      const bool platform_paired =
          params.which == StewartCase::B && (j - i == 3);
      if ((legs[i].base_point - legs[j].base_point).norm() <= tol && !base_paired) {
        std::ostringstream os;
        os << "stewart case: base points of legs " << i << " and " << j << " coincide";
        throw DegenerateGeometry(os.str());
      }
      if ((legs[i].platform_point - legs[j].platform_point).norm() <= tol && !platform_paired) {
        std::ostringstream os;
        os << "stewart case: platform points of legs " << i << " and " << j << " coincide";
        throw DegenerateGeometry(os.str());
      }
    }
  }
  return legs;
}

std::pair<Vec3, Vec3> axis_complement(const Vec3& u0) {
  int least = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(u0(k)) < std::abs(u0(least))) least = k;
  }
  const Vec3 seed = Vec3::Unit(least);
  Vec3 n1 = seed - seed.dot(u0) * u0;
  n1.normalize();
  const Vec3 n2 = u0.cross(n1);
  return {n1, n2};
}

namespace {

ChainModel leg_chain_common(const LegGeometry& geom, const StewartParams& params,
                            bool with_link_spring, const std::string& name) {
  const auto [n1, n2] = axis_complement(geom.u0);

  ChainModel chain;
  chain.name = name;
  chain.base_pose = RigidTransform::identity();
  chain.elements.push_back(RigidLink{RigidTransform::translate(geom.base_point)});
  chain.elements.push_back(PassiveJoint{n1, JointKind::revolute});
  chain.elements.push_back(PassiveJoint{n2, JointKind::revolute});
  if (with_link_spring) {
    chain.elements.push_back(VirtualSpring6{params.k_link * Mat6::Identity()});
  }
  chain.elements.push_back(ActuatedJoint{geom.u0, JointKind::prismatic, params.K11});
  chain.elements.push_back(RigidLink{RigidTransform::translate(geom.L * geom.u0)});
  chain.elements.push_back(PassiveJoint{n1, JointKind::revolute});
  chain.elements.push_back(PassiveJoint{n2, JointKind::revolute});
  chain.elements.push_back(PassiveJoint{geom.u0, JointKind::revolute});
  return chain;
}

}  // namespace

ChainModel build_leg_model(const LegGeometry& geom, const StewartParams& params) {
  return leg_chain_common(geom, params, true, "leg");
}

ChainModel build_actuator_only_leg_model(const LegGeometry& geom, const StewartParams& params) {
  return leg_chain_common(geom, params, false, "leg_actuator_only");
}

Assembly build_case(const StewartParams& params) {
  const auto legs = case_leg_geometry(params);
  Assembly assembly;
  assembly.name = params.which == StewartCase::A ? "stewart_case_A" : "stewart_case_B";
  assembly.reference_pose = RigidTransform::translate(Vec3(0.0, 0.0, params.h));
  for (size_t i = 0; i < legs.size(); ++i) {
    LegAttachment leg;
    leg.chain = build_leg_model(legs[i], params);
    leg.chain.name = "leg" + std::to_string(i);
    leg.platform_offset = legs[i].v;
    assembly.legs.push_back(std::move(leg));
  }
  return assembly;
}

StiffnessMatrix analytic_rank1_sum(const std::vector<LegGeometry>& legs, double K11) {
  Mat6 K = Mat6::Zero();
  for (const LegGeometry& g : legs) {
    Vec6 w;
    w.head<3>() = g.u0;
    w.tail<3>() = g.v.cross(g.u0);
    K += K11 * (w * w.transpose());
  }
  return StiffnessMatrix::from_matrix(K);
}

StiffnessMatrix analytic_case_matrix(const StewartParams& params) {
  require_positive(params.R, "R");
  require_positive(params.r, "r");
  require_positive(params.h, "h");
  require_positive(params.K11, "K11");

  const double L2 = params.leg_length_sq();
  const double da = params.d_a();
  const double r = params.r;
  const double R = params.R;
  const double h = params.h;

  Mat6 M = Mat6::Zero();
  M(2, 2) = 2.0 * h * h;
  M(3, 3) = r * r * h * h;
  M(4, 4) = r * r * h * h;
  if (params.which == StewartCase::A) {
    M(0, 0) = da * da;
    M(1, 1) = da * da;
    M(0, 4) = M(4, 0) = r * h * da;
    M(1, 3) = M(3, 1) = -r * h * da;
  } else {
    const double db = params.d_b();
    M(0, 0) = da * da + R * r;
    M(1, 1) = da * da + R * r;
    M(0, 4) = M(4, 0) = r * h * db;
    M(1, 3) = M(3, 1) = -r * h * db;
    M(5, 5) = 1.5 * r * r * R * R;
  }
  return StiffnessMatrix::from_matrix((3.0 * params.K11 / L2) * M);
}

}  // namespace stiffkit
