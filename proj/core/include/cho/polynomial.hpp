#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "cho/types.hpp"

namespace cho::poly {

/// Coefficients are stored in ascending order: c[0] + c[1] z + ... + c[d] z^d.
Complex evaluate(std::span<const Complex> coeffs, Complex z);

/// Value and first derivative at z.
using ValueAndSlope = std::pair<Complex, Complex>;
using Evaluator = std::function<ValueAndSlope(Complex)>;

struct RootOptions {
  int max_iterations = 500;
  double tolerance = 4e-16;
};

/// Simultaneous Aberth-Ehrlich iteration for all `degree` roots of a monic
/// polynomial given only by an evaluator. Starting points are spread on the
/// circle |z - center| = radius. Throws no_convergence if the iteration
/// budget is exhausted.
std::vector<Complex> aberth_roots(int degree, const Evaluator& eval, Complex center, double radius,
                                  const RootOptions& options = {});

/// All roots of the polynomial with the given ascending coefficients.
std::vector<Complex> roots(std::span<const Complex> coeffs, const RootOptions& options = {});

}  // namespace cho::poly
