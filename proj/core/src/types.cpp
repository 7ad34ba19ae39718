#include "cho/types.hpp"

#include <algorithm>
#include <cmath>

namespace cho {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::at_branch_point: return "at-branch-point";
    case ErrorCode::degenerate_ground_energy: return "degenerate-ground-energy";
    case ErrorCode::transformation_invalid: return "transformation-invalid";
    case ErrorCode::ill_conditioned: return "ill-conditioned";
    case ErrorCode::not_an_eigenvalue: return "not-an-eigenvalue";
    case ErrorCode::degenerate_nullspace: return "degenerate-nullspace";
    case ErrorCode::path_hits_branch_point: return "path-hits-branch-point";
    case ErrorCode::tracking_ambiguous: return "tracking-ambiguous";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::truncation_insufficient: return "truncation-insufficient";
    case ErrorCode::at_exceptional_point: return "at-exceptional-point";
  }
  return "unknown";
}

bool is_validation_error(ErrorCode code) {
  return code == ErrorCode::invalid_input || code == ErrorCode::degenerate_ground_energy;
}

Frequencies::Frequencies(double nu, double omega) : nu_(nu), omega_(omega) {
  if (!(std::isfinite(nu) && std::isfinite(omega)) || nu <= 0.0 || omega <= 0.0) {
    throw Error(ErrorCode::invalid_input, "frequencies must be finite and positive");
  }
}

bool Frequencies::equal() const noexcept {
  return std::abs(nu_ - omega_) <= tol::degeneracy * std::max(nu_, omega_);
}

Sign Frequencies::ordering() const noexcept {
  if (equal()) return Sign::plus;
  return nu_ > omega_ ? Sign::plus : Sign::minus;
}

LevelSpec::LevelSpec(int n_, int m_) : n(n_), m(m_) {
  if (n < 0 || m < 0 || m > n || (n - m) % 2 != 0) {
    throw Error(ErrorCode::invalid_input,
                "level requires 0 <= m <= n with m = n (mod 2); got n=" + std::to_string(n_) +
                    ", m=" + std::to_string(m_));
  }
}

int SheetLabel::index() const noexcept {
  return (inner == Sign::plus ? 0 : 4) + (a == Sign::plus ? 0 : 2) + (b == Sign::plus ? 0 : 1);
}

SheetLabel SheetLabel::from_index(int index) {
  if (index < 0 || index >= 8) throw Error(ErrorCode::invalid_input, "sheet index out of range");
  return {(index & 4) ? Sign::minus : Sign::plus, (index & 2) ? Sign::minus : Sign::plus,
          (index & 1) ? Sign::minus : Sign::plus};
}

std::array<SheetLabel, 8> SheetLabel::all() {
  std::array<SheetLabel, 8> out;
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = from_index(i);
  return out;
}

std::string SheetLabel::str() const { return {to_char(inner), to_char(a), to_char(b)}; }

SheetLabel SheetLabel::parse(std::string_view text) {
  std::array<Sign, 3> signs{};
  std::size_t count = 0;
  for (char c : text) {
    if (c == '+' || c == '-') {
      if (count == 3) break;
      signs[count++] = c == '+' ? Sign::plus : Sign::minus;
    } else if (c != ',' && c != '(' && c != ')' && c != ' ') {
      count = 4;
      break;
    }
  }
  if (count != 3) {
    throw Error(ErrorCode::invalid_input,
                "sheet label must be three signs such as \"+-+\", got \"" + std::string(text) + "\"");
  }
  return {signs[0], signs[1], signs[2]};
}

Complex principal_sqrt(Complex z) {
  // Signed zeros decide the side of the cut in std::sqrt; pin them to +0.
  if (z.imag() == 0.0) z.imag(0.0);
  return std::sqrt(z);
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex z, std::string_view what) {
  if (!is_finite(z)) throw Error(ErrorCode::invalid_input, std::string(what) + " must be finite");
}

}  // namespace cho
