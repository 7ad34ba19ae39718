#include "cho/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cho {

std::string_view to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::real_axis: return "real-axis";
    case BranchKind::imaginary_axis: return "imaginary-axis";
    case BranchKind::diabolic_candidate: return "diabolic-candidate";
  }
  return "unknown";
}

std::vector<BranchPoint> branch_points(const Frequencies& freqs) {
  const double nu = freqs.nu();
  const double om = freqs.omega();
  const double real_bp = 2.0 * nu * om;
  const double imag_bp = nu * nu - om * om;

  std::vector<BranchPoint> out;
  out.push_back({Complex(real_bp, 0.0), 2, BranchKind::real_axis, "real+"});
  out.push_back({Complex(-real_bp, 0.0), 2, BranchKind::real_axis, "real-"});
  if (freqs.equal()) {
    out.push_back({Complex(0.0, 0.0), 2, BranchKind::diabolic_candidate, "origin"});
  } else {
    // Ordered so that "imag+" has positive imaginary part regardless of nu < omega.
    const double h = std::abs(imag_bp);
    out.push_back({Complex(0.0, h), 1, BranchKind::imaginary_axis, "imag+"});
    out.push_back({Complex(0.0, -h), 1, BranchKind::imaginary_axis, "imag-"});
  }
  return out;
}

BranchPoint branch_point_by_id(const Frequencies& freqs, std::string_view id) {
  for (const auto& bp : branch_points(freqs)) {
    if (bp.id == id) return bp;
  }
  throw Error(ErrorCode::invalid_input, "no branch point with id \"" + std::string(id) + "\" for these frequencies");
}

bool near_branch_point(const Frequencies& freqs, Complex g, double rel_tol) {
  for (const auto& bp : branch_points(freqs)) {
    if (std::abs(g - bp.g) <= rel_tol * (1.0 + std::abs(bp.g))) return true;
  }
  return false;
}

Radicals radicals(const Frequencies& freqs, Complex g) {
  const double nu2 = freqs.nu() * freqs.nu();
  const double om2 = freqs.omega() * freqs.omega();
  Radicals r;
  r.s = principal_sqrt(4.0 * nu2 * om2 - g * g);
  r.r_plus = principal_sqrt(nu2 + om2 + r.s);
  r.r_minus = principal_sqrt(nu2 + om2 - r.s);
  return r;
}

Complex energy(const Radicals& rad, const LevelSpec& level, const SheetLabel& sheet) {
  const bool plus_inner = sheet.inner == Sign::plus;
  const Complex inner = plus_inner ? rad.r_plus : rad.r_minus;
  const Complex other = plus_inner ? rad.r_minus : rad.r_plus;
  return double(to_int(sheet.a) * (level.n + 1)) * inner + double(to_int(sheet.b) * level.m) * other;
}

Complex energy(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet, Complex g) {
  require_finite(g, "coupling g");
  return energy(radicals(freqs, g), level, sheet);
}

EnergyEvaluation evaluate_energy(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet,
                                 Complex g) {
  return {energy(freqs, level, sheet, g), near_branch_point(freqs, g)};
}

std::array<Complex, 8> sheet_energies(const Frequencies& freqs, const LevelSpec& level, Complex g) {
  require_finite(g, "coupling g");
  const Radicals rad = radicals(freqs, g);
  std::array<Complex, 8> out;
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = energy(rad, level, SheetLabel::from_index(i));
  return out;
}

namespace {

Complex decoupled_energy(const Frequencies& freqs, int kx, int ky, Sign sx, Sign sy) {
  return Complex(to_int(sx) * (2 * kx + 1) * freqs.nu() + to_int(sy) * (2 * ky + 1) * freqs.omega(), 0.0);
}

}  // namespace

SheetLabel sheet_for_state(const Frequencies& freqs, int kx, int ky, Sign sx, Sign sy) {
  if (kx < 0 || ky < 0) throw Error(ErrorCode::invalid_input, "quantum numbers must be nonnegative");
  const Sign d = freqs.ordering();
  SheetLabel label;
  label.inner = sx == sy ? Sign::plus : Sign::minus;
  label.a = label.inner == Sign::plus ? sx : sx * d;
  label.b = kx == ky ? Sign::plus : sign_of(double(kx - ky)) * label.a * d;
  return label;
}

DecoupledState state_for_sheet(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet) {
  const Sign d = freqs.ordering();
  DecoupledState st;
  const int shift = to_int(sheet.a * sheet.b * d) * level.m;
  st.kx = (level.n + shift) / 2;
  st.ky = level.n - st.kx;
  if (sheet.inner == Sign::plus) {
    st.sx = sheet.a;
    st.sy = sheet.a;
  } else {
    st.sx = sheet.a * d;
    st.sy = flip(st.sx);
  }
  st.energy = decoupled_energy(freqs, st.kx, st.ky, st.sx, st.sy);
  return st;
}

bool phase_aligned(const SheetLabel& sheet) { return sheet.inner == Sign::plus; }

std::vector<LevelGroup> decoupled_spectrum(const Frequencies& freqs, int n) {
  if (n < 0) throw Error(ErrorCode::invalid_input, "n must be nonnegative");
  std::vector<LevelGroup> groups;
  for (int m = n % 2; m <= n; m += 2) {
    LevelGroup group;
    group.level = LevelSpec(n, m);
    const int hi = (n + m) / 2;
    const int lo = (n - m) / 2;
    std::vector<std::pair<int, int>> occupations{{hi, lo}};
    if (m != 0) occupations.emplace_back(lo, hi);
    for (auto [kx, ky] : occupations) {
      for (Sign sx : {Sign::plus, Sign::minus}) {
        for (Sign sy : {Sign::plus, Sign::minus}) {
          group.states.push_back({kx, ky, sx, sy, decoupled_energy(freqs, kx, ky, sx, sy)});
        }
      }
    }
    for (const auto& sheet : SheetLabel::all()) {
      const DecoupledState st = state_for_sheet(freqs, group.level, sheet);
      const auto it = std::find_if(group.states.begin(), group.states.end(), [&](const DecoupledState& s) {
        return s.kx == st.kx && s.ky == st.ky && s.sx == st.sx && s.sy == st.sy;
      });
      group.sheets.push_back({sheet, static_cast<std::size_t>(it - group.states.begin())});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::array<double, 4> ansatz_residuals(const AnsatzParameters& p, const Frequencies& freqs, Complex g,
                                       Complex e0) {
  const double nu2 = freqs.nu() * freqs.nu();
  const double om2 = freqs.omega() * freqs.omega();
  const auto rel = [](Complex residual, double scale) { return std::abs(residual) / std::max(scale, 1e-300); };
  return {
      rel(e0 - p.alpha - p.beta, std::abs(e0) + std::abs(p.alpha) + std::abs(p.beta)),
      rel(g + 2.0 * (p.alpha + p.beta) * p.gamma, std::abs(g) + 2.0 * std::abs((p.alpha + p.beta) * p.gamma) + 1.0),
      rel(p.alpha * p.alpha + p.gamma * p.gamma - nu2, std::norm(p.alpha) + std::norm(p.gamma) + nu2),
      rel(p.beta * p.beta + p.gamma * p.gamma - om2, std::norm(p.beta) + std::norm(p.gamma) + om2),
  };
}

AnsatzParameters ansatz_parameters(const Frequencies& freqs, Complex g, const SheetLabel& ground_sheet) {
  const Complex e0 = energy(freqs, LevelSpec(0, 0), ground_sheet, g);
  const double scale = freqs.nu() + freqs.omega();
  if (std::abs(e0) < tol::ground_energy * scale) {
    throw Error(ErrorCode::degenerate_ground_energy,
                "ground energy vanishes on sheet " + ground_sheet.str() + "; gamma is undetermined there");
  }
  const double split = freqs.nu() * freqs.nu() - freqs.omega() * freqs.omega();
  return {0.5 * (e0 + split / e0), 0.5 * (e0 - split / e0), -g / (2.0 * e0)};
}

AnsatzParameters ansatz_parameters(const Frequencies& freqs, Complex g, Sign sx, Sign sy) {
  return ansatz_parameters(freqs, g, sheet_for_state(freqs, 0, 0, sx, sy));
}

EffectiveFrequencies effective_frequencies(const Frequencies& freqs, Complex g) {
  require_finite(g, "coupling g");
  const double nu2 = freqs.nu() * freqs.nu();
  const double om2 = freqs.omega() * freqs.omega();
  const Complex root = principal_sqrt(g * g + (nu2 - om2) * (nu2 - om2));
  EffectiveFrequencies out;
  out.plus = principal_sqrt(0.5 * ((nu2 + om2) + root));
  out.minus = principal_sqrt(0.5 * ((nu2 + om2) - root));
  const double scale = std::sqrt(nu2 + om2);
  out.transformation_invalid = near_branch_point(freqs, g) || std::abs(out.plus) <= tol::branch_point * scale ||
                               std::abs(out.minus) <= tol::branch_point * scale;
  return out;
}

RealityReport reality_classification(const Frequencies& freqs, const LevelSpec& level, const SheetLabel& sheet,
                                     const AxisScan& scan, double real_tol) {
  if (scan.samples < 2 || !(scan.extent > 0.0) || !std::isfinite(scan.extent)) {
    throw Error(ErrorCode::invalid_input, "axis scan needs extent > 0 and at least two samples");
  }
  RealityReport report;
  report.scan = scan;
  report.first_complex = std::numeric_limits<double>::infinity();

  const double step = 2.0 * scan.extent / (scan.samples - 1);
  bool prev_real = true;
  double prev_t = 0.0;
  for (int k = 0; k < scan.samples; ++k) {
    const double t = -scan.extent + k * step;
    const Complex g = scan.axis == ScanAxis::real ? Complex(t, 0.0) : Complex(0.0, t);
    const Complex e = energy(freqs, level, sheet, g);
    const bool is_real = std::abs(e.imag()) <= real_tol * (1.0 + std::abs(e));
    if (!is_real) report.first_complex = std::min(report.first_complex, std::abs(t));

    if (k == 0) {
      report.segments.push_back({t, t, is_real});
    } else if (is_real != prev_real) {
      const double boundary = 0.5 * (prev_t + t);
      report.segments.back().to = boundary;
      report.segments.push_back({boundary, t, is_real});
    } else {
      report.segments.back().to = t;
    }
    prev_real = is_real;
    prev_t = t;
  }
  return report;
}

}  // namespace cho
