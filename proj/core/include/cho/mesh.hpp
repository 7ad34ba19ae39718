#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cho/single_oscillator.hpp"
#include "cho/spectral.hpp"

namespace cho {

std::string_view library_version();

struct MeshWindow {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
};

/// Square window [-a, a]^2 with a = 1.5 max(2 nu omega, |nu^2 - omega^2|).
MeshWindow default_window(const Frequencies& freqs);

struct MeshMetadata {
  /// "coupled", "ho" or "ho-mod".
  std::string model = "coupled";
  double nu = 0.0;
  double omega = 0.0;
  int n = 0;
  int m = 0;
  double delta = 0.0;
  std::string branch_convention = "principal";
  std::string tool_version;
  /// Kept out of the checksummed payload.
  std::optional<std::string> timestamp;
};

struct SheetGrid {
  /// For the single-oscillator models sA carries the sheet sign and the
  /// other two components are plus.
  SheetLabel label;
  /// Row-major over (iy, ix): values[iy * nx + ix].
  std::vector<Complex> values;
};

struct SurfaceMesh {
  MeshWindow window;
  int nx = 0;
  int ny = 0;
  std::vector<SheetGrid> sheets;
  MeshMetadata metadata;

  /// Parameter value (g or nu) at grid node (ix, iy).
  Complex coordinate(int ix, int iy) const;
  Complex value(std::size_t sheet, int ix, int iy) const {
    return sheets[sheet].values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix)];
  }
};

inline constexpr int kDefaultResolution = 201;

/// Closed-form energies of one (n, m) surface on a grid over the g plane.
/// Octets export all eight labels; quartets export the four sB = plus labels.
SurfaceMesh coupled_surface(const Frequencies& freqs, const LevelSpec& level, const MeshWindow& window, int nx,
                            int ny);

/// Both sheets of the plain (ho) or gapped (ho_mod) oscillator over the nu plane.
SurfaceMesh oscillator_surface(OscillatorModel model, double delta, const MeshWindow& window, int nx, int ny);

struct MeshRow {
  double re_g = 0.0;
  double im_g = 0.0;
  SheetLabel sheet;
  double re_e = 0.0;
  double im_e = 0.0;
};

/// Header re_g,im_g,sheet_inner,sheet_sA,sheet_sB,re_E,im_E; signs as +1/-1;
/// reals printed with %.17g; LF line endings.
void write_mesh_csv(std::ostream& out, const SurfaceMesh& mesh);
std::vector<MeshRow> read_mesh_csv(std::istream& in);

enum class MeshComponent { real, imag };

/// Self-contained SVG heatmap of one sheet, at most max_cells cells per side.
void write_mesh_svg(std::ostream& out, const SurfaceMesh& mesh, std::size_t sheet, MeshComponent component,
                    int max_cells = 200);

}  // namespace cho
