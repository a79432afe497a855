#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mlab/area.hpp"
#include "mlab/averaging.hpp"
#include "mlab/bodies.hpp"

namespace mlab {

/// All report documents use insertion-ordered JSON so serialized output is
/// stable across runs.
using json = nlohmann::ordered_json;

json vector_to_json(const Vector& v);
json matrix_to_json(const Matrix& m);  // row-major nested arrays
Vector vector_from_json(const json& j);
Matrix matrix_from_json(const json& j);

/// Body description document: {"dimension": n, "family": "...", "params": {...}}.
///   ellipsoid   params: {"A": [[...], ...]}
///   randers     params: {"A": ..., "b": [...]}
///   quartic     params: {"A": ..., "c": [...], "epsilon": e}
///   translated  params: {"inner": {...}, "shift": [...]}
/// Malformed documents raise InvalidSpec.
BodySpec body_spec_from_json(const json& j);
json body_spec_to_json(const BodySpec& spec);

/// Reads and parses a body description file.  IoFailure if unreadable,
/// InvalidSpec if unparsable or invalid.
BodySpec load_body_spec(const std::string& path);

/// Data block of an averaged report (matrices row-major); the caller wraps
/// it with schema_version and metadata.
json averaged_report_to_json(const AveragedReport& report);
json brickell_report_to_json(const BrickellReport& report);

void write_text_file(const std::string& path, const std::string& content);

/// Shortest round-trip decimal representation (printf %.17g).
std::string format_double(double x);

}  // namespace mlab
