#pragma once

#include <iosfwd>
#include <string>

#include "stiffkit/parallel_assembly.hpp"

namespace stiffkit {

/// In-memory form of a model file: a named assembly whose reference pose is
/// the platform reference point.
struct ModelDocument {
  std::string name;
  Vec3 reference_point = Vec3::Zero();
  Assembly assembly;
};

/// Parses and validates a model document. Schema violations, non-finite
/// numbers, asymmetric or non-PD spring matrices, zero axes and
/// platform_offset/FK mismatches all throw ModelError. Axes are normalized
/// on load; a renormalization beyond 1e-6 prints a warning to the given
/// stream (stderr in the CLI).
ModelDocument load_model(const std::string& path, std::ostream* warnings = nullptr);
ModelDocument parse_model(const std::string& json_text, std::ostream* warnings = nullptr);

/// Serializes with full binary64 round-trip fidelity; load(save(doc))
/// reproduces every number bit-for-bit.
std::string serialize_model(const ModelDocument& doc);
void save_model(const ModelDocument& doc, const std::string& path);

/// Document wrapper for a Stewart-Gough fixture assembly.
ModelDocument to_document(const Assembly& assembly, const std::string& name);

}  // namespace stiffkit
