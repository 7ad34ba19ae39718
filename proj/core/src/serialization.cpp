#include "cho/serialization.hpp"

#include <cstdint>
#include <cstdio>

namespace cho {

namespace {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json level_json(const LevelSpec& level) { return {{"n", level.n}, {"m", level.m}}; }

template <class T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::invalid_input, std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string("bad field ") + key + ": " + e.what());
  }
}

Json mesh_payload(const SurfaceMesh& mesh) {
  Json sheets = Json::array();
  for (const auto& s : mesh.sheets) {
    Json re = Json::array();
    Json im = Json::array();
    for (const Complex& v : s.values) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    sheets.push_back({{"label", s.label.str()}, {"re", std::move(re)}, {"im", std::move(im)}});
  }
  return {
      {"window",
       {{"re_min", mesh.window.re_min},
        {"re_max", mesh.window.re_max},
        {"im_min", mesh.window.im_min},
        {"im_max", mesh.window.im_max}}},
      {"resolution", {{"nx", mesh.nx}, {"ny", mesh.ny}}},
      {"sheets", std::move(sheets)},
  };
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::invalid_input, "complex value must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const std::vector<BranchPoint>& points) {
  Json out = Json::array();
  for (const auto& bp : points) {
    out.push_back({{"id", bp.id},
                   {"g", complex_to_json(bp.g)},
                   {"multiplicity", bp.multiplicity},
                   {"kind", std::string(to_string(bp.kind))}});
  }
  return {{"schema_version", kSchemaVersion}, {"kind", "branch_points"}, {"branch_points", std::move(out)}};
}

Json to_json(const PathSpec& path) {
  Json segs = Json::array();
  for (const auto& seg : path.segments()) {
    if (const auto* l = std::get_if<LineSegment>(&seg)) {
      segs.push_back({{"type", "line"}, {"from", complex_to_json(l->from)}, {"to", complex_to_json(l->to)}});
    } else {
      const auto& a = std::get<ArcSegment>(seg);
      segs.push_back({{"type", "arc"},
                      {"center", complex_to_json(a.center)},
                      {"radius", a.radius},
                      {"from_angle", a.from_angle},
                      {"to_angle", a.to_angle}});
    }
  }
  return {{"segments", std::move(segs)}, {"samples_per_segment", path.samples_per_segment()}};
}

PathSpec path_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
    throw Error(ErrorCode::invalid_input, "path needs a \"segments\" array");
  }
  std::vector<PathSegment> segs;
  for (const auto& s : j["segments"]) {
    const auto type = required<std::string>(s, "type");
    if (type == "line") {
      segs.push_back(LineSegment{complex_from_json(s.at("from")), complex_from_json(s.at("to"))});
    } else if (type == "arc") {
      segs.push_back(ArcSegment{complex_from_json(s.at("center")), required<double>(s, "radius"),
                                required<double>(s, "from_angle"), required<double>(s, "to_angle")});
    } else {
      throw Error(ErrorCode::invalid_input, "unknown segment type: " + type);
    }
  }
  const int samples = j.contains("samples_per_segment") ? required<int>(j, "samples_per_segment")
                                                         : PathSpec::kDefaultSamples;
  return PathSpec(std::move(segs), samples);
}

Json to_json(const ContinuationTrace& trace) {
  Json points = Json::array();
  for (const auto& p : trace.points) {
    points.push_back({{"g", complex_to_json(p.g)}, {"E", complex_to_json(p.energy)}, {"sheet", p.sheet.str()}});
  }
  Json crossings = Json::array();
  for (const auto& c : trace.cut_crossings) {
    crossings.push_back({{"segment", c.segment}, {"parameter", c.parameter}, {"cut", std::string(to_string(c.cut))}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "continuation_trace"},
          {"level", level_json(trace.level)},
          {"start_sheet", trace.start_sheet.str()},
          {"end_sheet", trace.end_sheet.str()},
          {"cut_crossings", std::move(crossings)},
          {"points", std::move(points)}};
}

Json to_json(const MonodromyPermutation& perm) {
  Json mapping = Json::object();
  for (const auto& s : SheetLabel::all()) mapping[s.str()] = perm(s).str();
  Json out = {{"schema_version", kSchemaVersion},
              {"kind", "monodromy"},
              {"base_point", complex_to_json(perm.base_point())},
              {"mapping", std::move(mapping)},
              {"cycles", perm.cycle_notation()},
              {"order", perm.order()},
              {"moved", perm.moved()}};
  if (!perm.loop().segments().empty()) out["loop"] = to_json(perm.loop());
  return out;
}

Json to_json(const Reachability& r) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < r.generators.size(); ++i) {
    gens.push_back({{"around", r.generator_ids[i]},
                    {"cycles", r.generators[i].cycle_notation()},
                    {"order", r.generators[i].order()}});
  }
  Json orbits = Json::array();
  for (const auto& o : r.orbits) {
    Json labels = Json::array();
    for (const auto& s : o.sheets) labels.push_back(s.str());
    orbits.push_back({{"sheets", std::move(labels)}, {"distinct_values", o.distinct_values}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "reachability"},
          {"level", level_json(r.level)},
          {"generators", std::move(gens)},
          {"orbits", std::move(orbits)}};
}

Json to_json(const ValidationReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json sweep = Json::array();
    for (const auto& e : p.sweep) sweep.push_back({{"basis_size", e.basis_size}, {"max_deviation", e.max_deviation}});
    Json levels = Json::array();
    if (!p.sweep.empty()) {
      for (const auto& m : p.sweep.back().matches) {
        levels.push_back({{"kx", m.kx},
                          {"ky", m.ky},
                          {"closed_form", complex_to_json(m.closed_form)},
                          {"computed", complex_to_json(m.computed)},
                          {"deviation", m.deviation}});
      }
    }
    points.push_back({{"g", p.g},
                      {"max_deviation", p.max_deviation},
                      {"max_change_on_doubling", p.max_change_on_doubling},
                      {"convergence_slope", p.convergence_slope},
                      {"truncation_insufficient", p.truncation_insufficient},
                      {"sweep", std::move(sweep)},
                      {"levels", std::move(levels)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "oracle_report"},
          {"nu", report.nu},
          {"omega", report.omega},
          {"n_max", report.n_max},
          {"basis_size", report.basis_size},
          {"max_deviation", report.max_deviation},
          {"truncation_insufficient", report.truncation_insufficient},
          {"points", std::move(points)}};
}

Json to_json(std::span<const AxisSample> scan, OscillatorModel model, ScanAxis axis, double delta) {
  Json samples = Json::array();
  for (const auto& s : scan) {
    samples.push_back({{"t", s.t},
                       {"nu", complex_to_json(s.nu)},
                       {"E_plus", complex_to_json(s.energy[0])},
                       {"E_minus", complex_to_json(s.energy[1])}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "axis_scan"},
          {"model", model == OscillatorModel::ho ? "ho" : "ho-mod"},
          {"axis", axis == ScanAxis::real ? "real" : "imag"},
          {"delta", delta},
          {"samples", std::move(samples)}};
}

Json to_json(const SurfaceMesh& mesh) {
  Json payload = mesh_payload(mesh);
  const std::string checksum = fnv1a_hex(payload.dump());
  Json meta = {{"model", mesh.metadata.model},
               {"nu", mesh.metadata.nu},
               {"omega", mesh.metadata.omega},
               {"n", mesh.metadata.n},
               {"m", mesh.metadata.m},
               {"delta", mesh.metadata.delta},
               {"branch_convention", mesh.metadata.branch_convention},
               {"tool_version", mesh.metadata.tool_version}};
  if (mesh.metadata.timestamp) meta["timestamp"] = *mesh.metadata.timestamp;
  Json out = {{"schema_version", kSchemaVersion}, {"kind", "surface_mesh"}, {"metadata", std::move(meta)}};
  out.update(payload);
  out["payload_checksum"] = checksum;
  return out;
}

SurfaceMesh mesh_from_json(const Json& j) {
  if (required<std::string>(j, "kind") != "surface_mesh") throw Error(ErrorCode::invalid_input, "not a surface mesh");
  SurfaceMesh mesh;
  const Json& w = j.at("window");
  mesh.window = {required<double>(w, "re_min"), required<double>(w, "re_max"), required<double>(w, "im_min"),
                 required<double>(w, "im_max")};
  mesh.nx = required<int>(j.at("resolution"), "nx");
  mesh.ny = required<int>(j.at("resolution"), "ny");
  const auto cells = static_cast<std::size_t>(mesh.nx) * static_cast<std::size_t>(mesh.ny);
  for (const auto& s : j.at("sheets")) {
    SheetGrid grid;
    grid.label = SheetLabel::parse(required<std::string>(s, "label"));
    const auto re = required<std::vector<double>>(s, "re");
    const auto im = required<std::vector<double>>(s, "im");
    if (re.size() != cells || im.size() != cells) throw Error(ErrorCode::invalid_input, "sheet size does not match resolution");
    grid.values.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) grid.values[i] = {re[i], im[i]};
    mesh.sheets.push_back(std::move(grid));
  }
  const Json& meta = j.at("metadata");
  mesh.metadata.model = required<std::string>(meta, "model");
  mesh.metadata.nu = required<double>(meta, "nu");
  mesh.metadata.omega = required<double>(meta, "omega");
  mesh.metadata.n = required<int>(meta, "n");
  mesh.metadata.m = required<int>(meta, "m");
  mesh.metadata.delta = required<double>(meta, "delta");
  mesh.metadata.branch_convention = required<std::string>(meta, "branch_convention");
  mesh.metadata.tool_version = required<std::string>(meta, "tool_version");
  if (meta.contains("timestamp")) mesh.metadata.timestamp = required<std::string>(meta, "timestamp");

  if (j.contains("payload_checksum") &&
      required<std::string>(j, "payload_checksum") != fnv1a_hex(mesh_payload(mesh).dump())) {
    throw Error(ErrorCode::invalid_input, "mesh payload checksum mismatch");
  }
  return mesh;
}

Json error_json(ErrorCode code, const std::string& message) {
  return {{"error", std::string(to_string(code))}, {"message", message}};
}

}  // namespace cho
