#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cho {

using Complex = std::complex<double>;

/// Tolerances shared across modules. All are relative to the scale named in
/// the comment next to each value.
namespace tol {
/// |nu - omega| <= degeneracy * max(nu, omega) selects equal-frequency handling.
inline constexpr double degeneracy = 1e-9;
/// |g - g_bp| <= branch_point * (1 + |g_bp|) flags an ambiguous sheet.
inline constexpr double branch_point = 1e-8;
/// Continuation refuses to sample closer than this to a branch point.
inline constexpr double exclusion = 1e-6;
/// |E0| below this refuses ansatz-parameter recovery.
inline constexpr double ground_energy = 1e-12;
}  // namespace tol

enum class ErrorCode {
  invalid_input,
  at_branch_point,
  degenerate_ground_energy,
  transformation_invalid,
  ill_conditioned,
  not_an_eigenvalue,
  degenerate_nullspace,
  path_hits_branch_point,
  tracking_ambiguous,
  no_convergence,
  truncation_insufficient,
  at_exceptional_point,
};

std::string_view to_string(ErrorCode code);

/// True for codes that describe bad input rather than a numerical failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Sign : std::int8_t { minus = -1, plus = 1 };

constexpr int to_int(Sign s) { return static_cast<int>(s); }
constexpr Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
constexpr Sign operator*(Sign a, Sign b) { return a == b ? Sign::plus : Sign::minus; }
constexpr Sign sign_of(double x) { return x < 0.0 ? Sign::minus : Sign::plus; }
constexpr char to_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// Natural frequencies of the x (nu) and y (omega) oscillators.
class Frequencies {
 public:
  Frequencies(double nu, double omega);

  double nu() const noexcept { return nu_; }
  double omega() const noexcept { return omega_; }
  /// True when the two frequencies coincide within tol::degeneracy.
  bool equal() const noexcept;
  /// sign(nu - omega), with equal frequencies reported as plus.
  Sign ordering() const noexcept;

 private:
  double nu_;
  double omega_;
};

/// Total excitation n and constituent difference m (m <= n, m = n mod 2).
struct LevelSpec {
  int n = 0;
  int m = 0;

  LevelSpec() = default;
  LevelSpec(int n_, int m_);

  bool quartet() const noexcept { return m == 0; }
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

/// One of the eight sign choices of the nested radicals in E_n(g):
///   E = sA * (n+1) * R_inner + sB * m * R_other,
/// where R_inner = R+ and R_other = R- when inner is plus, and swapped otherwise.
struct SheetLabel {
  Sign inner = Sign::plus;
  Sign a = Sign::plus;
  Sign b = Sign::plus;

  /// Index in [0, 8); the bit layout matches all().
  int index() const noexcept;
  static SheetLabel from_index(int index);
  static std::array<SheetLabel, 8> all();

  /// Three-character form such as "+-+" (inner, sA, sB).
  std::string str() const;
  /// Accepts "+-+", "+,-,+" or "(+,-,+)".
  static SheetLabel parse(std::string_view text);

  friend bool operator==(const SheetLabel&, const SheetLabel&) = default;
};

/// Principal square root: cut on the negative real axis, nonnegative real
/// part, and on the cut the limit taken from above (so sqrt(-1) = +i even for
/// a negative-zero imaginary part).
Complex principal_sqrt(Complex z);

bool is_finite(Complex z);

/// Throws invalid_input if z has a NaN or infinite component.
void require_finite(Complex z, std::string_view what);

}  // namespace cho
