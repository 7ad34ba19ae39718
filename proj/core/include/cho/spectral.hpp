#pragma once

#include <array>
#include <string>
#include <vector>

#include "cho/types.hpp"

namespace cho {

enum class BranchKind { real_axis, imaginary_axis, diabolic_candidate };

std::string_view to_string(BranchKind kind);

struct BranchPoint {
  Complex g;
  /// Number of sheet pairs of the ground-state surface glued at this point.
  int multiplicity = 1;
  BranchKind kind = BranchKind::real_axis;
  /// Stable identifier: "real+", "real-", "imag+", "imag-" or "origin".
  std::string id;
};

/// Square-root branch points of E_n(g): +-2 nu omega on the real axis and
/// +-i (nu^2 - omega^2) on the imaginary axis. At equal frequencies the
/// imaginary pair collapses onto a single point at g = 0.
std::vector<BranchPoint> branch_points(const Frequencies& freqs);

/// Looks up a branch point by its id; throws invalid_input if absent.
BranchPoint branch_point_by_id(const Frequencies& freqs, std::string_view id);

/// True when g lies within rel_tol * (1 + |g_bp|) of any branch point.
bool near_branch_point(const Frequencies& freqs, Complex g, double rel_tol = tol::branch_point);

/// The three radicals of the closed form at coupling g.
struct Radicals {
  Complex s;        ///< sqrt(4 nu^2 omega^2 - g^2)
  Complex r_plus;   ///< sqrt(nu^2 + omega^2 + s)
  Complex r_minus;  ///< sqrt(nu^2 + omega^2 - s)
};

Radicals radicals(const Frequencies& freqs, Complex g);

/// Closed-form energy on one sheet (principal-branch convention).
Complex energy(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet, Complex g);

/// Same value, computed from precomputed radicals.
Complex energy(const Radicals& rad, const LevelSpec& level, const SheetLabel& sheet);

struct EnergyEvaluation {
  Complex value;
  bool at_branch_point = false;
};

EnergyEvaluation evaluate_energy(const Frequencies& freqs, const LevelSpec& level,
                                 const SheetLabel& sheet, Complex g);

/// Energies on all eight labels, indexed by SheetLabel::index().
std::array<Complex, 8> sheet_energies(const Frequencies& freqs, const LevelSpec& level, Complex g);

struct DecoupledState {
  int kx = 0;
  int ky = 0;
  Sign sx = Sign::plus;
  Sign sy = Sign::plus;
  Complex energy;
};

struct SheetAssignment {
  SheetLabel sheet;
  std::size_t state = 0;  ///< index into LevelGroup::states
};

/// The decoupled states that share one Riemann surface: an octet for m >= 1,
/// a quartet for m = 0 (where two labels map to each state).
struct LevelGroup {
  LevelSpec level;
  std::vector<DecoupledState> states;
  std::vector<SheetAssignment> sheets;

  bool quartet() const noexcept { return level.m == 0; }
};

/// All g = 0 states with kx + ky = n, grouped by m = |kx - ky| in increasing m.
std::vector<LevelGroup> decoupled_spectrum(const Frequencies& freqs, int n);

/// The sheet whose g = 0 value is the decoupled state (kx, ky, sx, sy).
/// For m = 0 the canonical label with sB = plus is returned.
SheetLabel sheet_for_state(const Frequencies& freqs, int kx, int ky, Sign sx, Sign sy);

/// Inverse of sheet_for_state for a given level.
DecoupledState state_for_sheet(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet);

/// Sheets whose decoupled limit has both oscillators in the same phase
/// (both conventional or both unconventional). These are the inner = plus
/// sheets for nu != omega.
bool phase_aligned(const SheetLabel& sheet);

/// Exponent parameters of the Gaussian ansatz exp(-alpha x^2/2 - beta y^2/2 + gamma x y).
struct AnsatzParameters {
  Complex alpha;
  Complex beta;
  Complex gamma;
};

/// Residuals of E0 = alpha+beta, g = -2(alpha+beta)gamma, nu^2 = alpha^2+gamma^2,
/// omega^2 = beta^2+gamma^2, each scaled by the magnitude of its terms.
std::array<double, 4> ansatz_residuals(const AnsatzParameters& p, const Frequencies& freqs, Complex g,
                                       Complex e0);

/// Recovers (alpha, beta, gamma) from the ground-state energy on a sheet of
/// the n = 0 surface. Throws degenerate_ground_energy when |E0| vanishes,
/// which happens only at nu = omega, g = 0 on the mixed-phase sheets.
AnsatzParameters ansatz_parameters(const Frequencies& freqs, Complex g, const SheetLabel& ground_sheet);

/// Convenience overload selecting the ground sheet by constituent phases.
AnsatzParameters ansatz_parameters(const Frequencies& freqs, Complex g, Sign sx, Sign sy);

struct EffectiveFrequencies {
  Complex plus;
  Complex minus;
  bool transformation_invalid = false;
};

/// Decoupled normal-mode frequencies sqrt(((nu^2+omega^2) +- sqrt(g^2 + (nu^2-omega^2)^2)) / 2).
EffectiveFrequencies effective_frequencies(const Frequencies& freqs, Complex g);

enum class ScanAxis { real, imaginary };

struct AxisScan {
  ScanAxis axis = ScanAxis::real;
  double extent = 1.0;  ///< scan covers [-extent, extent]
  int samples = 2001;
};

struct RealitySegment {
  double from = 0.0;
  double to = 0.0;
  bool real = true;
};

struct RealityReport {
  AxisScan scan;
  std::vector<RealitySegment> segments;
  /// Smallest |t| at which a complex value was seen, or +inf if none.
  double first_complex = 0.0;
};

/// Splits the scanned axis into maximal runs of real / complex energy.
/// A value counts as real when |Im E| <= real_tol * (1 + |E|).
RealityReport reality_classification(const Frequencies& freqs, const LevelSpec& level,
                                     const SheetLabel& sheet, const AxisScan& scan,
                                     double real_tol = 1e-10);

}  // namespace cho
