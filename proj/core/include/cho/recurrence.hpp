#pragma once

#include <vector>

#include "cho/spectral.hpp"

namespace cho {

/// Coefficients a[p][q] of the prefactor polynomial P_n(x, y) = sum a[p][q] x^p y^q
/// over the triangle p + q <= n. Out-of-range lookups read as zero.
class CoefficientTable {
 public:
  explicit CoefficientTable(int n = 0);

  int degree() const noexcept { return n_; }
  Complex get(int p, int q) const noexcept;
  Complex& at(int p, int q);
  /// Number of stored coefficients, (n+1)(n+2)/2.
  std::size_t size() const noexcept { return data_.size(); }
  /// Flat position of (p, q), grouped by total degree i = p + q, then by p.
  static std::size_t flat_index(int p, int q) noexcept;

  std::vector<Complex>& data() noexcept { return data_; }
  const std::vector<Complex>& data() const noexcept { return data_; }

  /// Evaluates P_n(x, y).
  Complex polynomial(Complex x, Complex y) const;

 private:
  int n_;
  std::vector<Complex> data_;
};

/// Tridiagonal operator acting on the top-degree coefficients v_k = a[k][n-k]:
///   diag[k]  = alpha (2k+1) + beta (2(n-k)+1)
///   super[k] = -2 gamma (k+1)        (row k, column k+1)
///   sub[k]   = -2 gamma (n-k)        (row k+1, column k)
/// Its eigenvalues are the n+1 energies E_n.
struct TopSubsystem {
  int n = 0;
  std::vector<Complex> diag;
  std::vector<Complex> super;
  std::vector<Complex> sub;

  static TopSubsystem build(int n, const AnsatzParameters& params);
  /// Row-major dense (n+1) x (n+1) copy.
  std::vector<Complex> dense() const;
};

/// Value of the coefficient-comparison equation for the
/// monomial x^j y^(i-j), with all eight terms kept (the three parameter
/// relations are not assumed).
Complex build_mn_row(int n, int j, int i_minus_j, const AnsatzParameters& params, const Frequencies& freqs,
                     Complex g, Complex energy, const CoefficientTable& table);

enum class SubsystemMethod { symmetrized_ql, diagonal, polynomial_roots };

struct SubsystemSpectrum {
  std::vector<Complex> eigenvalues;
  SubsystemMethod method = SubsystemMethod::symmetrized_ql;
  /// Largest eigenvalue condition number ||x||^2 / |x^T x| of the symmetrized operator.
  double condition_estimate = 1.0;
  bool ill_conditioned = false;
};

/// Eigenvalue condition numbers above this raise the ill-conditioned advisory.
inline constexpr double kIllConditionedThreshold = 1e8;

SubsystemSpectrum energies_from_subsystem(int n, const AnsatzParameters& params);

/// Closed-form energies (n+1)(alpha+beta) +- m sqrt((alpha-beta)^2 + 4 gamma^2)
/// for every parity-allowed m, with m = 0 listed once.
std::vector<Complex> closed_form_subsystem_energies(int n, const AnsatzParameters& params);

struct EnergyPolynomial {
  /// Ascending coefficients of det(E - T); monic of degree n+1.
  std::vector<Complex> coefficients;
  bool overflow_advisory = false;
};

inline constexpr int kDefaultMaxLevel = 16;

EnergyPolynomial energy_polynomial(int n, const AnsatzParameters& params, int max_n = kDefaultMaxLevel);

struct CoefficientSolution {
  CoefficientTable table;
  int nullspace_dimension = 0;
  /// Largest row residual of the reduced system over (term magnitude * |a|).
  double max_residual = 0.0;
  bool degenerate_nullspace = false;
};

/// Nonzero solution of the reduced coefficient system at energy E (parameter
/// relations imposed), normalized so the largest top-degree coefficient is 1.
/// Throws not_an_eigenvalue if the system has no nullspace at E.
CoefficientSolution solve_coefficients(int n, const AnsatzParameters& params, Complex energy);

/// P_n(x, y) exp(-alpha x^2/2 - beta y^2/2 + gamma x y).
Complex evaluate_wavefunction(const CoefficientTable& table, const AnsatzParameters& params, double x, double y);

}  // namespace cho
