#pragma once

#include <nlohmann/json.hpp>
#include <span>
#include <string>

#include "cho/continuation.hpp"
#include "cho/mesh.hpp"
#include "cho/oracle.hpp"
#include "cho/single_oscillator.hpp"

namespace cho {

using Json = nlohmann::json;

/// Bumped whenever a documented field changes meaning.
inline constexpr int kSchemaVersion = 1;

/// Complex numbers travel as [re, im].
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

Json to_json(const std::vector<BranchPoint>& points);
Json to_json(const PathSpec& path);
PathSpec path_from_json(const Json& j);
Json to_json(const ContinuationTrace& trace);
Json to_json(const MonodromyPermutation& perm);
Json to_json(const Reachability& r);
Json to_json(const ValidationReport& report);
Json to_json(std::span<const AxisSample> scan, OscillatorModel model, ScanAxis axis, double delta);

/// Values are stored as separate re / im arrays per sheet; "payload_checksum"
/// is an FNV-1a hash over window, resolution and sheets (metadata excluded).
Json to_json(const SurfaceMesh& mesh);
/// Rejects a document whose payload checksum does not match.
SurfaceMesh mesh_from_json(const Json& j);

Json error_json(ErrorCode code, const std::string& message);

}  // namespace cho
