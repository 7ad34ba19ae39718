#include "cho/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cho::poly {

namespace {
constexpr double kStallTolerance = 1e-8;
}  // namespace

Complex evaluate(std::span<const Complex> coeffs, Complex z) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> aberth_roots(int degree, const Evaluator& eval, Complex center, double radius,
                                  const RootOptions& options) {
  if (degree <= 0) return {};
  const auto n = static_cast<std::size_t>(degree);
  std::vector<Complex> z(n);
  const double r = radius > 0.0 ? radius : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    // The 0.4 offset keeps starting points off any symmetry axis of the roots.
    const double phase = 2.0 * std::numbers::pi * (double(k) + 0.4) / double(n);
    z[k] = center + r * std::polar(1.0, phase);
  }

  std::vector<bool> done(n, false);
  std::vector<double> last_step(n, std::numeric_limits<double>::infinity());
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const auto [p, dp] = eval(z[k]);
      if (p == 0.0) {
        done[k] = true;
        continue;
      }
      const Complex ratio = p / dp;
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      const double size = std::abs(step);
      const double scale = std::max(1.0, std::abs(z[k]));
      // Past sqrt(eps) a step that stops shrinking is rounding noise.
      const bool stalled = size <= kStallTolerance * scale && size >= 0.5 * last_step[k];
      last_step[k] = size;
      if (size <= options.tolerance * scale || stalled) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return z;
  }
  throw Error(ErrorCode::no_convergence, "Aberth iteration did not converge");
}

std::vector<Complex> roots(std::span<const Complex> coeffs, const RootOptions& options) {
  std::size_t degree = coeffs.size();
  while (degree > 0 && coeffs[degree - 1] == 0.0) --degree;
  if (degree <= 1) return {};
  degree -= 1;
  const Complex lead = coeffs[degree];

  std::vector<Complex> monic(degree + 1);
  for (std::size_t i = 0; i <= degree; ++i) monic[i] = coeffs[i] / lead;
  std::vector<Complex> deriv(degree);
  for (std::size_t i = 1; i <= degree; ++i) deriv[i - 1] = double(i) * monic[i];

  // Fujiwara bound: every root satisfies |z| <= 2 max_k |c_{d-k}|^(1/k).
  double bound = 0.0;
  for (std::size_t k = 1; k <= degree; ++k) {
    const double c = std::abs(monic[degree - k]) / (k == degree ? 2.0 : 1.0);
    bound = std::max(bound, std::pow(c, 1.0 / double(k)));
  }
  const Complex center = -monic[degree - 1] / double(degree);
  const double radius = std::max(bound, 1e-300);

  const Evaluator eval = [&](Complex x) {
    return ValueAndSlope{evaluate(monic, x), evaluate(deriv, x)};
  };
  return aberth_roots(static_cast<int>(degree), eval, center, radius, options);
}

}  // namespace cho::poly
