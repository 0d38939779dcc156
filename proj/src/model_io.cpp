#include "stiffkit/model_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stiffkit {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ModelError("model: " + context + ": " + what);
}

double read_number(const ordered_json& j, const std::string& context) {
  if (!j.is_number()) fail(context, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(context, "non-finite value");
  return v;
}

Vec3 read_vec3(const ordered_json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 3) fail(context, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v(i) = read_number(j[static_cast<size_t>(i)], context);
  return v;
}

Mat6 read_mat6(const ordered_json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 6) fail(context, "expected a 6x6 nested array");
  Mat6 m;
  for (int row = 0; row < 6; ++row) {
    const auto& jrow = j[static_cast<size_t>(row)];
    if (!jrow.is_array() || jrow.size() != 6) fail(context, "expected a 6x6 nested array");
    for (int col = 0; col < 6; ++col) {
      m(row, col) = read_number(jrow[static_cast<size_t>(col)], context);
    }
  }
  return m;
}

const ordered_json& require_field(const ordered_json& j, const char* key,
                                  const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) fail(context, std::string("missing field '") + key + "'");
  return *it;
}

RigidTransform read_pose(const ordered_json& j, const std::string& context) {
  if (!j.is_object()) fail(context, "expected an object with translation/rotation_rpy");
  RigidTransform t;
  t.translation = read_vec3(require_field(j, "translation", context), context + ".translation");
  if (j.contains("rotation_rpy")) {
    const Vec3 rpy = read_vec3(j["rotation_rpy"], context + ".rotation_rpy");
    t.rotation = rotation_rpy(rpy(0), rpy(1), rpy(2));
  }
  return t;
}

Vec3 read_axis(const ordered_json& j, const std::string& context, std::ostream* warnings) {
  Vec3 axis = read_vec3(j, context);
  const double n = axis.norm();
  if (!(n > 0.0)) fail(context, "axis must be nonzero");
  // Axes already unit within the chain invariant tolerance are kept
  // bit-identical so serialize/load round trips are exact.
  if (std::abs(n - 1.0) <= 1e-12) return axis;
  if (std::abs(n - 1.0) > 1e-6 && warnings) {
    *warnings << "warning: " << context << ": axis renormalized (|norm - 1| = "
              << std::abs(n - 1.0) << ")\n";
  }
  return axis / n;
}

JointKind read_kind(const ordered_json& j, const std::string& context) {
  if (!j.is_string()) fail(context, "expected 'revolute' or 'prismatic'");
  const std::string s = j.get<std::string>();
  if (s == "revolute") return JointKind::revolute;
  if (s == "prismatic") return JointKind::prismatic;
  fail(context, "unknown joint kind '" + s + "'");
}

ChainElement read_element(const ordered_json& j, const std::string& context,
                          std::ostream* warnings) {
  if (!j.is_object()) fail(context, "expected an element object");
  const auto& jtype = require_field(j, "type", context);
  if (!jtype.is_string()) fail(context, "'type' must be a string");
  const std::string type = jtype.get<std::string>();
  if (type == "rigid_link") {
    return RigidLink{read_pose(j, context)};
  }
  if (type == "spring6") {
    const Mat6 K = read_mat6(require_field(j, "K", context), context + ".K");
    if (relative_asymmetry(K) > 1e-9) fail(context + ".K", "spring matrix is not symmetric");
    if (sym_eig(K).eigenvalues.minCoeff() <= 0.0) {
      fail(context + ".K", "spring matrix is not positive-definite");
    }
    return VirtualSpring6{K};
  }
  if (type == "actuated") {
    const double stiffness = read_number(require_field(j, "stiffness", context), context + ".stiffness");
    if (!(stiffness > 0.0)) fail(context + ".stiffness", "must be > 0");
    return ActuatedJoint{read_axis(require_field(j, "axis", context), context + ".axis", warnings),
                         read_kind(require_field(j, "kind", context), context + ".kind"), stiffness};
  }
  if (type == "passive") {
    return PassiveJoint{read_axis(require_field(j, "axis", context), context + ".axis", warnings),
                        read_kind(require_field(j, "kind", context), context + ".kind")};
  }
  fail(context, "unknown element type '" + type + "'");
}

Vec3 rpy_from_rotation(const Mat3& R) {
  // Inverse of rotation_rpy (ZYX). Gimbal-locked poses fold yaw into roll.
  // The + 0.0 normalizes IEEE negative zeros out of the serialized form.
  const double sp = -R(2, 0);
  if (std::abs(sp) >= 1.0 - 1e-12) {
    const double pitch = sp > 0 ? std::numbers::pi / 2.0 : -std::numbers::pi / 2.0;
    return Vec3(std::atan2(-R(0, 1), R(1, 1)) + 0.0, pitch, 0.0);
  }
  return Vec3(std::atan2(R(2, 1), R(2, 2)) + 0.0, std::asin(sp) + 0.0,
              std::atan2(R(1, 0), R(0, 0)) + 0.0);
}

ordered_json pose_json(const RigidTransform& t) {
  const Vec3 rpy = rpy_from_rotation(t.rotation);
  return ordered_json{{"translation", {t.translation(0), t.translation(1), t.translation(2)}},
                      {"rotation_rpy", {rpy(0), rpy(1), rpy(2)}}};
}

std::string kind_name(JointKind kind) {
  return kind == JointKind::revolute ? "revolute" : "prismatic";
}

}  // namespace

ModelDocument parse_model(const std::string& json_text, std::ostream* warnings) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model: JSON parse failure: ") + e.what());
  }
  if (!root.is_object()) throw ModelError("model: top level must be an object");

  ModelDocument doc;
  const auto& jname = require_field(root, "name", "top level");
  if (!jname.is_string()) fail("top level", "'name' must be a string");
  doc.name = jname.get<std::string>();
  doc.reference_point = read_vec3(require_field(root, "reference_point", "top level"),
                                  "reference_point");
  doc.assembly.name = doc.name;
  doc.assembly.reference_pose = RigidTransform::translate(doc.reference_point);

  const auto& jchains = require_field(root, "chains", "top level");
  if (!jchains.is_array() || jchains.empty()) fail("chains", "expected a non-empty array");

  std::set<std::string> names;
  for (size_t ci = 0; ci < jchains.size(); ++ci) {
    const auto& jc = jchains[ci];
    const std::string context = "chains[" + std::to_string(ci) + "]";
    if (!jc.is_object()) fail(context, "expected a chain object");

    LegAttachment leg;
    const auto& jcname = require_field(jc, "name", context);
    if (!jcname.is_string()) fail(context, "'name' must be a string");
    leg.chain.name = jcname.get<std::string>();
    if (!names.insert(leg.chain.name).second) {
      fail(context, "duplicate chain name '" + leg.chain.name + "'");
    }
    leg.chain.base_pose = read_pose(require_field(jc, "base_pose", context), context + ".base_pose");
    leg.platform_offset =
        read_vec3(require_field(jc, "platform_offset", context), context + ".platform_offset");

    const auto& jelems = require_field(jc, "elements", context);
    if (!jelems.is_array()) fail(context + ".elements", "expected an array");
    for (size_t ei = 0; ei < jelems.size(); ++ei) {
      leg.chain.elements.push_back(read_element(
          jelems[ei], context + ".elements[" + std::to_string(ei) + "]", warnings));
    }

    try {
      leg.chain.validate();
    } catch (const std::invalid_argument& e) {
      fail(context, e.what());
    }
    doc.assembly.legs.push_back(std::move(leg));
  }

  validate_assembly(doc.assembly);
  return doc;
}

ModelDocument load_model(const std::string& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw ModelError("model: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), warnings);
}

std::string serialize_model(const ModelDocument& doc) {
  ordered_json root;
  root["name"] = doc.name;
  root["reference_point"] = {doc.reference_point(0), doc.reference_point(1),
                             doc.reference_point(2)};
  root["chains"] = ordered_json::array();
  for (const LegAttachment& leg : doc.assembly.legs) {
    ordered_json jc;
    jc["name"] = leg.chain.name;
    jc["base_pose"] = pose_json(leg.chain.base_pose);
    jc["platform_offset"] = {leg.platform_offset(0), leg.platform_offset(1),
                             leg.platform_offset(2)};
    jc["elements"] = ordered_json::array();
    for (const ChainElement& e : leg.chain.elements) {
      ordered_json je;
      if (const auto* link = std::get_if<RigidLink>(&e)) {
        je["type"] = "rigid_link";
        je.update(pose_json(link->transform));
      } else if (const auto* spring = std::get_if<VirtualSpring6>(&e)) {
        je["type"] = "spring6";
        ordered_json rows = ordered_json::array();
        for (int row = 0; row < 6; ++row) {
          ordered_json jrow = ordered_json::array();
          for (int col = 0; col < 6; ++col) jrow.push_back(spring->stiffness(row, col));
          rows.push_back(std::move(jrow));
        }
        je["K"] = std::move(rows);
      } else if (const auto* act = std::get_if<ActuatedJoint>(&e)) {
        je["type"] = "actuated";
        je["kind"] = kind_name(act->kind);
        je["axis"] = {act->axis(0), act->axis(1), act->axis(2)};
        je["stiffness"] = act->stiffness;
      } else if (const auto* passive = std::get_if<PassiveJoint>(&e)) {
        je["type"] = "passive";
        je["kind"] = kind_name(passive->kind);
        je["axis"] = {passive->axis(0), passive->axis(1), passive->axis(2)};
      }
      jc["elements"].push_back(std::move(je));
    }
    root["chains"].push_back(std::move(jc));
  }
  return root.dump(2) + "\n";
}

void save_model(const ModelDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("model: cannot write '" + path + "'");
  out << serialize_model(doc);
}

ModelDocument to_document(const Assembly& assembly, const std::string& name) {
  ModelDocument doc;
  doc.name = name;
  doc.reference_point = assembly.reference_pose.translation;
  doc.assembly = assembly;
  doc.assembly.name = name;
  return doc;
}

}  // namespace stiffkit
