#include "cho/recurrence.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cho/polynomial.hpp"

namespace cho {

CoefficientTable::CoefficientTable(int n) : n_(n) {
  if (n < 0) throw Error(ErrorCode::invalid_input, "polynomial degree must be nonnegative");
  data_.assign(static_cast<std::size_t>((n + 1) * (n + 2) / 2), Complex(0.0));
}

std::size_t CoefficientTable::flat_index(int p, int q) noexcept {
  const int i = p + q;
  return static_cast<std::size_t>(i * (i + 1) / 2 + p);
}

Complex CoefficientTable::get(int p, int q) const noexcept {
  if (p < 0 || q < 0 || p + q > n_) return 0.0;
  return data_[flat_index(p, q)];
}

Complex& CoefficientTable::at(int p, int q) {
  if (p < 0 || q < 0 || p + q > n_) throw Error(ErrorCode::invalid_input, "coefficient index outside the triangle");
  return data_[flat_index(p, q)];
}

Complex CoefficientTable::polynomial(Complex x, Complex y) const {
  // Horner in x for each power of y, then Horner in y.
  Complex acc = 0.0;
  for (int q = n_; q >= 0; --q) {
    Complex row = 0.0;
    for (int p = n_ - q; p >= 0; --p) row = row * x + data_[flat_index(p, q)];
    acc = acc * y + row;
  }
  return acc;
}

TopSubsystem TopSubsystem::build(int n, const AnsatzParameters& params) {
  if (n < 0) throw Error(ErrorCode::invalid_input, "n must be nonnegative");
  TopSubsystem t;
  t.n = n;
  const auto size = static_cast<std::size_t>(n + 1);
  t.diag.resize(size);
  t.super.resize(size - 1);
  t.sub.resize(size - 1);
  for (int k = 0; k <= n; ++k) {
    t.diag[static_cast<std::size_t>(k)] = params.alpha * double(2 * k + 1) + params.beta * double(2 * (n - k) + 1);
  }
  for (int k = 0; k < n; ++k) {
    t.super[static_cast<std::size_t>(k)] = -2.0 * params.gamma * double(k + 1);
    t.sub[static_cast<std::size_t>(k)] = -2.0 * params.gamma * double(n - k);
  }
  return t;
}

std::vector<Complex> TopSubsystem::dense() const {
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<Complex> out(size * size, Complex(0.0));
  for (std::size_t k = 0; k < size; ++k) {
    out[k * size + k] = diag[k];
    if (k + 1 < size) {
      out[k * size + k + 1] = super[k];
      out[(k + 1) * size + k] = sub[k];
    }
  }
  return out;
}

Complex build_mn_row(int n, int j, int i_minus_j, const AnsatzParameters& params, const Frequencies& freqs,
                     Complex g, Complex e, const CoefficientTable& table) {
  const int p = j;
  const int q = i_minus_j;
  if (p < 0 || q < 0 || p + q > n + 2) throw Error(ErrorCode::invalid_input, "row index outside 0 <= i <= n+2");
  const Complex alpha = params.alpha;
  const Complex beta = params.beta;
  const Complex gamma = params.gamma;
  const double nu2 = freqs.nu() * freqs.nu();
  const double om2 = freqs.omega() * freqs.omega();

  return (e - alpha * double(2 * p + 1) - beta * double(2 * q + 1)) * table.get(p, q)
         - (2.0 * (alpha + beta) * gamma + g) * table.get(p - 1, q - 1)
         + (alpha * alpha + gamma * gamma - nu2) * table.get(p - 2, q)
         + (beta * beta + gamma * gamma - om2) * table.get(p, q - 2)
         + 2.0 * gamma * double(p + 1) * table.get(p + 1, q - 1)
         + 2.0 * gamma * double(q + 1) * table.get(p - 1, q + 1)
         + double((p + 2) * (p + 1)) * table.get(p + 2, q)
         + double((q + 2) * (q + 1)) * table.get(p, q + 2);
}

namespace {

// Implicit QL with Wilkinson-type shifts for a complex symmetric tridiagonal
// matrix (no conjugation anywhere). Returns nullopt on a breakdown of the
// complex-orthogonal rotations or when the iteration budget runs out.
template <class C>
std::optional<std::vector<C>> symmetric_tridiagonal_ql(std::vector<C> d, std::vector<C> e) {
  using R = typename C::value_type;
  const std::size_t size = d.size();
  e.resize(size, C(0));
  constexpr R eps = std::numeric_limits<R>::epsilon();
  constexpr int max_iter = 60;

  for (std::size_t l = 0; l < size; ++l) {
    int iter = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < size; ++m) {
        const R dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iter) return std::nullopt;

      C g = (d[l + 1] - d[l]) / (R(2) * e[l]);
      C r = std::sqrt(g * g + R(1));
      g = d[m] - d[l] + e[l] / (std::abs(g + r) >= std::abs(g - r) ? g + r : g - r);
      C s = R(1);
      C c = R(1);
      C p = R(0);
      bool deflated_early = false;
      for (std::size_t i = m; i-- > l;) {
        const C f = s * e[i];
        const C b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        const R mag = std::abs(f) + std::abs(g);
        if (std::abs(r) <= R(1e-12) * mag) {
          // f = +-i g: the complex rotation does not exist.
          if (mag > R(0)) return std::nullopt;
          d[i + 1] -= p;
          e[m] = R(0);
          deflated_early = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + R(2) * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated_early) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = R(0);
    }
  }
  for (const auto& x : d) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
  }
  return d;
}

template <class C>
struct Symmetrized {
  std::vector<C> diag;
  std::vector<C> off;
};

using Wide = std::complex<long double>;

// Diagonal similarity turning sub/super into the common value
// -2 gamma sqrt((k+1)(n-k)); always consistent because sub*super = 4 gamma^2 (k+1)(n-k).
// Built in extended precision straight from the parameters: the subsystem can
// be badly non-normal, and rounding the entries to double already costs
// eps * condition in the eigenvalues.
Symmetrized<Wide> symmetrize(int n, const AnsatzParameters& params) {
  const Wide alpha(params.alpha), beta(params.beta), gamma(params.gamma);
  Symmetrized<Wide> s{std::vector<Wide>(static_cast<std::size_t>(n + 1)), std::vector<Wide>(static_cast<std::size_t>(n))};
  for (int k = 0; k <= n; ++k) {
    s.diag[static_cast<std::size_t>(k)] = alpha * static_cast<long double>(2 * k + 1) +
                                          beta * static_cast<long double>(2 * (n - k) + 1);
  }
  for (int k = 0; k < n; ++k) {
    s.off[static_cast<std::size_t>(k)] =
        -2.0L * gamma * std::sqrt(static_cast<long double>((k + 1) * (n - k)));
  }
  return s;
}

Symmetrized<Complex> narrow(const Symmetrized<Wide>& w) {
  Symmetrized<Complex> s;
  for (const auto& x : w.diag) s.diag.emplace_back(x);
  for (const auto& x : w.off) s.off.emplace_back(x);
  return s;
}

// Eigenvalue condition ||x||^2 / |x^T x| for each eigenvalue of the symmetrized
// operator, with x from two steps of inverse iteration.
double condition_estimate(const Symmetrized<Complex>& s, const std::vector<Complex>& eigenvalues) {
  const auto size = static_cast<Eigen::Index>(s.diag.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(size, size);
  double scale = 0.0;
  for (Eigen::Index k = 0; k < size; ++k) {
    a(k, k) = s.diag[static_cast<std::size_t>(k)];
    scale = std::max(scale, std::abs(a(k, k)));
    if (k + 1 < size) {
      a(k, k + 1) = a(k + 1, k) = s.off[static_cast<std::size_t>(k)];
      scale = std::max(scale, std::abs(a(k, k + 1)));
    }
  }
  double worst = 1.0;
  for (const Complex& lambda : eigenvalues) {
    Eigen::MatrixXcd shifted = a;
    // Perturb the shift slightly so the solve stays finite at an exact eigenvalue.
    const Complex nudge = Complex(1.0, 0.5) * (1e-13 * std::max(scale, 1e-300));
    shifted.diagonal().array() -= lambda + nudge;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(size);
    for (int it = 0; it < 3; ++it) {
      x = lu.solve(x);
      const double norm = x.norm();
      if (!(norm > 0.0) || !std::isfinite(norm)) return std::numeric_limits<double>::infinity();
      x /= norm;
    }
    const Complex xtx = (x.transpose() * x)(0, 0);
    const double kappa = 1.0 / std::max(std::abs(xtx), 1e-300);
    worst = std::max(worst, kappa);
  }
  return worst;
}

std::vector<Complex> roots_by_recurrence(const TopSubsystem& t) {
  // det(E - T) and its derivative through the three-term recurrence.
  const poly::Evaluator eval = [&t](Complex z) {
    Complex p_prev = 1.0, p = z - t.diag[0];
    Complex dp_prev = 0.0, dp = 1.0;
    for (int k = 1; k <= t.n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const Complex coupling = t.super[ku - 1] * t.sub[ku - 1];
      const Complex next = (z - t.diag[ku]) * p - coupling * p_prev;
      const Complex dnext = p + (z - t.diag[ku]) * dp - coupling * dp_prev;
      p_prev = p;
      p = next;
      dp_prev = dp;
      dp = dnext;
    }
    return poly::ValueAndSlope{p, dp};
  };
  Complex center = 0.0;
  for (const auto& x : t.diag) center += x;
  center /= double(t.diag.size());
  double radius = 0.0;
  for (std::size_t k = 0; k < t.diag.size(); ++k) {
    double off = 0.0;
    if (k > 0) off += std::abs(t.sub[k - 1]);
    if (k < t.super.size()) off += std::abs(t.super[k]);
    radius = std::max(radius, std::abs(t.diag[k] - center) + off);
  }
  return poly::aberth_roots(t.n + 1, eval, center, std::max(radius, 1e-12));
}

}  // namespace

SubsystemSpectrum energies_from_subsystem(int n, const AnsatzParameters& params) {
  if (!(is_finite(params.alpha) && is_finite(params.beta) && is_finite(params.gamma))) {
    throw Error(ErrorCode::invalid_input, "ansatz parameters must be finite");
  }
  const TopSubsystem t = TopSubsystem::build(n, params);
  SubsystemSpectrum out;
  if (n == 0 || params.gamma == 0.0) {
    out.eigenvalues = t.diag;
    out.method = SubsystemMethod::diagonal;
    return out;
  }
  const Symmetrized<Wide> wide = symmetrize(n, params);
  const Symmetrized<Complex> sym = narrow(wide);
  if (auto ql = symmetric_tridiagonal_ql(wide.diag, wide.off)) {
    for (const Wide& x : *ql) out.eigenvalues.emplace_back(x);
    out.method = SubsystemMethod::symmetrized_ql;
  } else {
    out.eigenvalues = roots_by_recurrence(t);
    out.method = SubsystemMethod::polynomial_roots;
  }
  out.condition_estimate = condition_estimate(sym, out.eigenvalues);
  out.ill_conditioned = out.condition_estimate > kIllConditionedThreshold;
  return out;
}

std::vector<Complex> closed_form_subsystem_energies(int n, const AnsatzParameters& params) {
  if (n < 0) throw Error(ErrorCode::invalid_input, "n must be nonnegative");
  const Complex base = double(n + 1) * (params.alpha + params.beta);
  const Complex diff = params.alpha - params.beta;
  const Complex radical = std::sqrt(diff * diff + 4.0 * params.gamma * params.gamma);
  std::vector<Complex> out;
  for (int m = n % 2; m <= n; m += 2) {
    if (m == 0) {
      out.push_back(base);
    } else {
      out.push_back(base + double(m) * radical);
      out.push_back(base - double(m) * radical);
    }
  }
  return out;
}

EnergyPolynomial energy_polynomial(int n, const AnsatzParameters& params, int max_n) {
  if (n < 0 || n > max_n) {
    throw Error(ErrorCode::invalid_input,
                "energy polynomial supports 0 <= n <= " + std::to_string(max_n) + ", got " + std::to_string(n));
  }
  const TopSubsystem t = TopSubsystem::build(n, params);
  // P_k(E) = (E - d_k) P_{k-1}(E) - super_{k-1} sub_{k-1} P_{k-2}(E)
  std::vector<Complex> prev{1.0};
  std::vector<Complex> cur{-t.diag[0], 1.0};
  for (int k = 1; k <= n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Complex coupling = t.super[ku - 1] * t.sub[ku - 1];
    std::vector<Complex> next(cur.size() + 1, Complex(0.0));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= t.diag[ku] * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= coupling * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  EnergyPolynomial out;
  out.coefficients = std::move(cur);
  for (const auto& c : out.coefficients) {
    if (!is_finite(c) || std::abs(c) > 1e250) out.overflow_advisory = true;
  }
  return out;
}

namespace {

// Reduced coefficient system at energy E: one row per monomial x^p y^q with
// p + q <= n, the three parameter relations already imposed.
Eigen::MatrixXcd reduced_system(int n, const AnsatzParameters& params, Complex e) {
  const auto size = static_cast<Eigen::Index>((n + 1) * (n + 2) / 2);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  const auto col = [n](int p, int q) -> Eigen::Index {
    if (p < 0 || q < 0 || p + q > n) return -1;
    return static_cast<Eigen::Index>(CoefficientTable::flat_index(p, q));
  };
  for (int i = 0; i <= n; ++i) {
    for (int p = 0; p <= i; ++p) {
      const int q = i - p;
      const auto row = col(p, q);
      m(row, row) = e - params.alpha * double(2 * p + 1) - params.beta * double(2 * q + 1);
      if (auto c = col(p + 1, q - 1); c >= 0) m(row, c) += 2.0 * params.gamma * double(p + 1);
      if (auto c = col(p - 1, q + 1); c >= 0) m(row, c) += 2.0 * params.gamma * double(q + 1);
      if (auto c = col(p + 2, q); c >= 0) m(row, c) += double((p + 2) * (p + 1));
      if (auto c = col(p, q + 2); c >= 0) m(row, c) += double((q + 2) * (q + 1));
    }
  }
  return m;
}

}  // namespace

CoefficientSolution solve_coefficients(int n, const AnsatzParameters& params, Complex e) {
  if (n < 0) throw Error(ErrorCode::invalid_input, "n must be nonnegative");
  require_finite(e, "energy");
  const Eigen::MatrixXcd system = reduced_system(n, params, e);
  // Size of the terms that enter a row; the diagonal itself can cancel to
  // rounding level, so the assembled row norms are not a usable scale.
  const double term_scale = std::abs(e) + double(2 * n + 1) * (std::abs(params.alpha) + std::abs(params.beta)) +
                            2.0 * double(n) * std::abs(params.gamma) + double((n + 1) * (n + 2));

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(system, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double threshold = 1e-10 * term_scale;
  Eigen::Index null_dim = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) <= threshold) ++null_dim;
  }
  if (null_dim == 0) {
    throw Error(ErrorCode::not_an_eigenvalue,
                "coefficient system has no nullspace at this energy (smallest singular value " +
                    std::to_string(sigma(sigma.size() - 1)) + ")");
  }
  const Eigen::MatrixXcd basis = svd.matrixV().rightCols(null_dim);

  std::vector<Eigen::Index> top_rows;
  for (int p = 0; p <= n; ++p) top_rows.push_back(static_cast<Eigen::Index>(CoefficientTable::flat_index(p, n - p)));

  Eigen::VectorXcd v;
  if (null_dim == 1) {
    v = basis.col(0);
  } else {
    // Pick the nullspace direction with the most weight on the top degree.
    Eigen::MatrixXcd top(static_cast<Eigen::Index>(top_rows.size()), null_dim);
    for (std::size_t r = 0; r < top_rows.size(); ++r) top.row(static_cast<Eigen::Index>(r)) = basis.row(top_rows[r]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> top_svd(top, Eigen::ComputeFullV);
    v = basis * top_svd.matrixV().col(0);
  }

  Eigen::Index lead = top_rows.front();
  for (auto r : top_rows) {
    if (std::abs(v(r)) > std::abs(v(lead))) lead = r;
  }
  if (std::abs(v(lead)) <= 1e-8 * v.norm()) {
    throw Error(ErrorCode::not_an_eigenvalue, "nullspace at this energy has no top-degree component");
  }
  v /= v(lead);

  CoefficientSolution out{CoefficientTable(n), static_cast<int>(null_dim), 0.0, null_dim > 1};
  for (Eigen::Index k = 0; k < v.size(); ++k) out.table.data()[static_cast<std::size_t>(k)] = v(k);

  const Eigen::VectorXcd residual = system * v;
  const double scale = term_scale * v.norm();
  out.max_residual = residual.cwiseAbs().maxCoeff() / scale;
  return out;
}

Complex evaluate_wavefunction(const CoefficientTable& table, const AnsatzParameters& params, double x, double y) {
  const Complex exponent = -params.alpha * (x * x / 2.0) - params.beta * (y * y / 2.0) + params.gamma * (x * y);
  return table.polynomial(Complex(x), Complex(y)) * std::exp(exponent);
}

}  // namespace cho
