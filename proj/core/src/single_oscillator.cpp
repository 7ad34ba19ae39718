#include "cho/single_oscillator.hpp"

#include <cmath>
#include <limits>

namespace cho {

namespace {

constexpr Complex kI{0.0, 1.0};

double norm2(const std::array<Complex, 2>& v) { return std::norm(v[0]) + std::norm(v[1]); }

}  // namespace

HoEnergy ho_energy(Complex nu, Sign sheet) {
  require_finite(nu, "nu");
  return {double(to_int(sheet)) * principal_sqrt(nu * nu), nu == 0.0};
}

ModifiedOscillator::ModifiedOscillator(double delta, Complex nu) : delta_(delta), nu_(nu) {
  if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorCode::invalid_input, "delta must be finite and >= 0");
  require_finite(nu, "nu");
}

Complex modified_energy(const ModifiedOscillator& osc, Sign sheet) {
  const Complex shift = kI * osc.delta();
  return double(to_int(sheet)) * principal_sqrt(osc.nu() - shift) * principal_sqrt(osc.nu() + shift);
}

MatrixModelEigensystem matrix_model(Complex nu, double delta) {
  const ModifiedOscillator osc(delta, nu);
  MatrixModelEigensystem sys;
  const double ep_tol = tol::branch_point * (1.0 + delta);
  sys.at_exceptional_point = delta > 0.0 && (std::abs(nu - kI * delta) <= ep_tol || std::abs(nu + kI * delta) <= ep_tol);

  if (nu == 0.0) {
    // Limit form: the matrix is diag(delta, -delta).
    if (delta > 0.0) {
      sys.eigenvalues = {-delta, delta};
      sys.eigenvectors = {{{0.0, 1.0}, {1.0, 0.0}}};
    } else {
      sys.eigenvalues = {0.0, 0.0};
      sys.eigenvectors = {{{-1.0, 1.0}, {1.0, 1.0}}};
    }
  } else {
    const Complex ratio = delta / nu;
    const Complex w = principal_sqrt(1.0 + ratio * ratio);
    sys.eigenvalues = {-nu * w, nu * w};
    sys.eigenvectors = {{{ratio - w, 1.0}, {ratio + w, 1.0}}};
  }

  const auto& v0 = sys.eigenvectors[0];
  const auto& v1 = sys.eigenvectors[1];
  const Complex overlap = std::conj(v0[0]) * v1[0] + std::conj(v0[1]) * v1[1];
  sys.coalescence_measure = std::min(1.0, std::abs(overlap) / std::sqrt(norm2(v0) * norm2(v1)));
  return sys;
}

Complex eigenvector_determinant(const MatrixModelEigensystem& sys) {
  const auto& v0 = sys.eigenvectors[0];
  const auto& v1 = sys.eigenvectors[1];
  return v1[0] * v0[1] - v0[0] * v1[1];
}

std::string_view to_string(Chirality c) {
  switch (c) {
    case Chirality::left: return "left";
    case Chirality::right: return "right";
    case Chirality::diabolic: return "diabolic";
  }
  return "unknown";
}

Chirality chirality(Sign side, double delta) {
  if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorCode::invalid_input, "delta must be finite and >= 0");
  if (delta == 0.0) return Chirality::diabolic;
  // At the branch point w = 0 and both eigenvectors reduce to (delta/nu, 1).
  const Complex nu = double(to_int(side)) * kI * delta;
  const Complex x = delta / nu;
  return x.imag() < 0.0 ? Chirality::right : Chirality::left;
}

double bubble_boundary(double delta) {
  if (!std::isfinite(delta) || !(delta > 0.0)) throw Error(ErrorCode::invalid_input, "delta must be positive");
  // Real energies inside the bubble, imaginary outside; compare which part dominates.
  auto inside = [delta](double t) {
    const Complex e = modified_energy(ModifiedOscillator(delta, kI * t), Sign::plus);
    return std::abs(e.imag()) <= std::abs(e.real());
  };
  double lo = 0.0;
  double hi = 2.0 * delta;
  while (inside(hi)) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<AxisSample> axis_scan(OscillatorModel model, ScanAxis axis, double delta, double extent, int samples) {
  if (samples < 2) throw Error(ErrorCode::invalid_input, "scan needs at least two samples");
  if (!std::isfinite(extent) || !(extent > 0.0)) throw Error(ErrorCode::invalid_input, "scan extent must be positive");
  if (!std::isfinite(delta) || delta < 0.0) throw Error(ErrorCode::invalid_input, "delta must be finite and >= 0");
  std::vector<AxisSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    AxisSample s;
    s.t = -extent + 2.0 * extent * k / (samples - 1);
    s.nu = axis == ScanAxis::real ? Complex(s.t, 0.0) : Complex(0.0, s.t);
    for (Sign sheet : {Sign::plus, Sign::minus}) {
      const Complex e = model == OscillatorModel::ho ? ho_energy(s.nu, sheet).value
                                                     : modified_energy(ModifiedOscillator(delta, s.nu), sheet);
      s.energy[sheet == Sign::plus ? 0 : 1] = e;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace cho
