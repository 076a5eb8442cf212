#pragma once

#include <string>

#include <json.hpp>

#include "igeo/family.hpp"
#include "igeo/geometry_types.hpp"
#include "igeo/verify.hpp"

namespace igeo::report {

nlohmann::json vector_json(const Vector& v);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json tensor_json(const Tensor3& t);
nlohmann::json family_json(const ModelFamily& f);
nlohmann::json snapshot_json(const GeometrySnapshot& s);
nlohmann::json checks_json(const std::vector<verify::Check>& checks);

/// Canonical serialized form: sorted keys, two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

/// Lossy CSV projection of a report's per-point result rows (no diagnostics).
std::string to_csv(const nlohmann::json& results);

}  // namespace igeo::report
