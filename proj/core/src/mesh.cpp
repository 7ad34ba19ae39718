#include "cho/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "parallel.hpp"

#ifndef CHO_VERSION
#define CHO_VERSION "0.0.0"
#endif

namespace cho {

namespace {

void check_grid(const MeshWindow& w, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorCode::invalid_input, "mesh resolution must be at least 2 x 2");
  for (double v : {w.re_min, w.re_max, w.im_min, w.im_max}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_input, "mesh window must be finite");
  }
  if (!(w.re_min < w.re_max) || !(w.im_min < w.im_max)) {
    throw Error(ErrorCode::invalid_input, "mesh window must have min < max on both axes");
  }
}

// Endpoint-exact interpolation, so symmetric windows with odd resolution hit 0 exactly.
double lerp_axis(double lo, double hi, int i, int count) {
  const double s = double(i) / double(count - 1);
  return lo * (1.0 - s) + hi * s;
}

template <class Fn>
void fill_grid(SurfaceMesh& mesh, Fn&& value_at) {
  for (auto& sheet : mesh.sheets) sheet.values.resize(static_cast<std::size_t>(mesh.nx) * static_cast<std::size_t>(mesh.ny));
  detail::parallel_for(static_cast<std::size_t>(mesh.ny), [&](std::size_t iy) {
    for (int ix = 0; ix < mesh.nx; ++ix) {
      const Complex z = mesh.coordinate(ix, static_cast<int>(iy));
      const std::size_t cell = iy * static_cast<std::size_t>(mesh.nx) + static_cast<std::size_t>(ix);
      for (std::size_t s = 0; s < mesh.sheets.size(); ++s) mesh.sheets[s].values[cell] = value_at(s, z);
    }
  });
}

std::string format_real(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

Sign parse_sign(const std::string& field) {
  if (field == "1" || field == "+1" || field == "+") return Sign::plus;
  if (field == "-1" || field == "-") return Sign::minus;
  throw Error(ErrorCode::invalid_input, "bad sheet sign in CSV: " + field);
}

double parse_real(const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) throw Error(ErrorCode::invalid_input, "bad number in CSV: " + field);
  return v;
}

// Piecewise-linear approximation of a perceptually ordered blue-to-yellow map.
std::string colour(double s) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - double(i);
  std::array<char, 8> buf{};
  std::array<int, 3> rgb{};
  for (std::size_t c = 0; c < 3; ++c) rgb[c] = int(std::lround(stops[i][c] * (1 - f) + stops[i + 1][c] * f));
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf.data();
}

}  // namespace

std::string_view library_version() { return CHO_VERSION; }

MeshWindow default_window(const Frequencies& freqs) {
  const double nu = freqs.nu();
  const double om = freqs.omega();
  const double a = 1.5 * std::max(2.0 * nu * om, std::abs(nu * nu - om * om));
  return {-a, a, -a, a};
}

Complex SurfaceMesh::coordinate(int ix, int iy) const {
  return {lerp_axis(window.re_min, window.re_max, ix, nx), lerp_axis(window.im_min, window.im_max, iy, ny)};
}

SurfaceMesh coupled_surface(const Frequencies& freqs, const LevelSpec& level, const MeshWindow& window, int nx,
                            int ny) {
  check_grid(window, nx, ny);
  SurfaceMesh mesh;
  mesh.window = window;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.metadata.model = "coupled";
  mesh.metadata.nu = freqs.nu();
  mesh.metadata.omega = freqs.omega();
  mesh.metadata.n = level.n;
  mesh.metadata.m = level.m;
  mesh.metadata.tool_version = std::string(library_version());
  for (const auto& s : SheetLabel::all()) {
    if (level.m == 0 && s.b != Sign::plus) continue;
    mesh.sheets.push_back({s, {}});
  }
  fill_grid(mesh, [&](std::size_t s, Complex g) { return energy(freqs, level, mesh.sheets[s].label, g); });
  return mesh;
}

SurfaceMesh oscillator_surface(OscillatorModel model, double delta, const MeshWindow& window, int nx, int ny) {
  check_grid(window, nx, ny);
  if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorCode::invalid_input, "delta must be finite and >= 0");
  SurfaceMesh mesh;
  mesh.window = window;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.metadata.model = model == OscillatorModel::ho ? "ho" : "ho-mod";
  mesh.metadata.delta = model == OscillatorModel::ho ? 0.0 : delta;
  mesh.metadata.tool_version = std::string(library_version());
  for (Sign sheet : {Sign::plus, Sign::minus}) mesh.sheets.push_back({SheetLabel{Sign::plus, sheet, Sign::plus}, {}});
  fill_grid(mesh, [&](std::size_t s, Complex nu) {
    const Sign sheet = mesh.sheets[s].label.a;
    return model == OscillatorModel::ho ? ho_energy(nu, sheet).value
                                        : modified_energy(ModifiedOscillator(delta, nu), sheet);
  });
  return mesh;
}

void write_mesh_csv(std::ostream& out, const SurfaceMesh& mesh) {
  out << "re_g,im_g,sheet_inner,sheet_sA,sheet_sB,re_E,im_E\n";
  std::string line;
  for (std::size_t s = 0; s < mesh.sheets.size(); ++s) {
    const SheetLabel& label = mesh.sheets[s].label;
    const std::string signs = std::to_string(to_int(label.inner)) + ',' + std::to_string(to_int(label.a)) + ',' +
                              std::to_string(to_int(label.b));
    for (int iy = 0; iy < mesh.ny; ++iy) {
      for (int ix = 0; ix < mesh.nx; ++ix) {
        const Complex g = mesh.coordinate(ix, iy);
        const Complex e = mesh.value(s, ix, iy);
        line = format_real(g.real());
        line += ',';
        line += format_real(g.imag());
        line += ',';
        line += signs;
        line += ',';
        line += format_real(e.real());
        line += ',';
        line += format_real(e.imag());
        line += '\n';
        out << line;
      }
    }
  }
}

std::vector<MeshRow> read_mesh_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::invalid_input, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "re_g,im_g,sheet_inner,sheet_sA,sheet_sB,re_E,im_E") {
    throw Error(ErrorCode::invalid_input, "unexpected CSV header: " + line);
  }
  std::vector<MeshRow> rows;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields.clear();
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7) throw Error(ErrorCode::invalid_input, "CSV row must have 7 fields: " + line);
    MeshRow row;
    row.re_g = parse_real(fields[0]);
    row.im_g = parse_real(fields[1]);
    row.sheet = SheetLabel{parse_sign(fields[2]), parse_sign(fields[3]), parse_sign(fields[4])};
    row.re_e = parse_real(fields[5]);
    row.im_e = parse_real(fields[6]);
    rows.push_back(row);
  }
  return rows;
}

void write_mesh_svg(std::ostream& out, const SurfaceMesh& mesh, std::size_t sheet, MeshComponent component,
                    int max_cells) {
  if (sheet >= mesh.sheets.size()) throw Error(ErrorCode::invalid_input, "sheet index out of range");
  if (max_cells < 1) throw Error(ErrorCode::invalid_input, "max_cells must be positive");
  const int sx = std::max(1, (mesh.nx + max_cells - 1) / max_cells);
  const int sy = std::max(1, (mesh.ny + max_cells - 1) / max_cells);
  const int cols = (mesh.nx + sx - 1) / sx;
  const int rows = (mesh.ny + sy - 1) / sy;
  constexpr int cell = 3;

  auto pick = [&](int ix, int iy) {
    const Complex e = mesh.value(sheet, ix, iy);
    return component == MeshComponent::real ? e.real() : e.imag();
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int iy = 0; iy < mesh.ny; iy += sy) {
    for (int ix = 0; ix < mesh.nx; ix += sx) {
      const double v = pick(ix, iy);
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * cell << "\" height=\"" << rows * cell
      << "\" shape-rendering=\"crispEdges\">\n";
  out << "<title>" << mesh.metadata.model << " sheet " << mesh.sheets[sheet].label.str() << ' '
      << (component == MeshComponent::real ? "Re" : "Im") << " E, range [" << format_real(lo) << ", "
      << format_real(hi) << "]</title>\n";
  for (int r = 0; r < rows; ++r) {
    // Row 0 of the image is the top, i.e. the largest imaginary part.
    const int iy = mesh.ny - 1 - std::min(mesh.ny - 1, r * sy);
    for (int c = 0; c < cols; ++c) {
      const int ix = std::min(mesh.nx - 1, c * sx);
      const double v = pick(ix, iy);
      out << "<rect x=\"" << c * cell << "\" y=\"" << r * cell << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << (std::isfinite(v) ? colour((v - lo) / span) : std::string("#ff00ff")) << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace cho
