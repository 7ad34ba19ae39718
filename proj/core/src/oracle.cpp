#include "cho/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace cho {

namespace {

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

std::vector<Eigen::Index> parity_indices(int basis_size, int parity) {
  std::vector<Eigen::Index> out;
  for (int kx = 0; kx < basis_size; ++kx) {
    for (int ky = 0; ky < basis_size; ++ky) {
      if ((kx + ky) % 2 == parity) out.push_back(TruncatedHamiltonian::index(kx, ky, basis_size));
    }
  }
  return out;
}

// Repeated power-of-two row/column scaling until row and column norms balance.
void balance(Eigen::MatrixXcd& a) {
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double bound = r / radix;
      while (c < bound) {
        f *= radix;
        c *= radix_sq;
      }
      bound = r * radix;
      while (c > bound) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

void reduce_to_hessenberg(Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXcd v = h.block(k + 1, k, len, 1);
    const double tail = v.tail(len - 1).norm();
    if (tail == 0.0) continue;
    const double norm = std::hypot(std::abs(v(0)), tail);
    const Complex phase = v(0) == 0.0 ? Complex(1.0) : v(0) / std::abs(v(0));
    v(0) += phase * norm;
    const double tau = 2.0 / v.squaredNorm();

    auto lower = h.block(k + 1, k, len, n - k);
    const Eigen::RowVectorXcd w = v.adjoint() * lower;
    lower.noalias() -= (tau * v) * w;
    auto right = h.block(0, k + 1, n, len);
    const Eigen::VectorXcd u = right * v;
    right.noalias() -= (tau * u) * v.adjoint();

    h(k + 1, k) = -phase * norm;
    h.block(k + 2, k, len - 1, 1).setZero();
  }
}

struct Rotation {
  double c = 1.0;
  Complex s = 0.0;
};

// G = [[c, s], [-conj(s), c]] maps (a, b) to (r, 0).
Rotation make_rotation(Complex a, Complex b, Complex& r) {
  const double aa = std::abs(a);
  const double bb = std::abs(b);
  if (bb == 0.0) {
    r = a;
    return {};
  }
  if (aa == 0.0) {
    r = bb;
    return {0.0, std::conj(b) / bb};
  }
  const double norm = std::hypot(aa, bb);
  const Complex phase = a / aa;
  r = phase * norm;
  return {aa / norm, phase * std::conj(b) / norm};
}

void rotate_rows(Eigen::MatrixXcd& h, const Rotation& g, Eigen::Index p, Eigen::Index from, Eigen::Index to) {
  for (Eigen::Index j = from; j <= to; ++j) {
    const Complex x = h(p, j);
    const Complex y = h(p + 1, j);
    h(p, j) = g.c * x + g.s * y;
    h(p + 1, j) = -std::conj(g.s) * x + g.c * y;
  }
}

void rotate_cols(Eigen::MatrixXcd& h, const Rotation& g, Eigen::Index p, Eigen::Index from, Eigen::Index to) {
  for (Eigen::Index i = from; i <= to; ++i) {
    const Complex x = h(i, p);
    const Complex y = h(i, p + 1);
    h(i, p) = g.c * x + std::conj(g.s) * y;
    h(i, p + 1) = -g.s * x + g.c * y;
  }
}

bool negligible_subdiagonal(const Eigen::MatrixXcd& h, Eigen::Index i, double scale) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double sub = abs1(h(i + 1, i));
  if (sub <= std::numeric_limits<double>::min()) return true;
  double ref = abs1(h(i, i)) + abs1(h(i + 1, i + 1));
  if (ref == 0.0) ref = scale;
  return sub <= eps * ref;
}

// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry,
// with ad hoc shifts after 10 and 30 stalled iterations.
Complex wilkinson_shift(const Eigen::MatrixXcd& h, Eigen::Index iu, int iter) {
  if (iter == 10 || iter == 30) {
    const double extra = iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0;
    return h(iu, iu) + std::abs(h(iu, iu - 1).real()) + extra;
  }
  Eigen::Matrix2cd t = h.block(iu - 1, iu - 1, 2, 2);
  const double scale = t.cwiseAbs().sum();
  if (scale == 0.0) return 0.0;
  t /= scale;
  const Complex b = t(0, 1) * t(1, 0);
  const Complex c = t(0, 0) - t(1, 1);
  const Complex disc = std::sqrt(c * c + 4.0 * b);
  const Complex det = t(0, 0) * t(1, 1) - b;
  const Complex trace = t(0, 0) + t(1, 1);
  Complex e1 = (trace + disc) / 2.0;
  Complex e2 = (trace - disc) / 2.0;
  if (abs1(e1) > abs1(e2)) {
    e2 = det / e1;
  } else if (abs1(e2) != 0.0) {
    e1 = det / e2;
  }
  return scale * (abs1(e1 - t(1, 1)) < abs1(e2 - t(1, 1)) ? e1 : e2);
}

std::vector<Complex> hessenberg_qr(Eigen::MatrixXcd& h, const DenseEigenOptions& options) {
  const Eigen::Index n = h.rows();
  std::vector<Complex> eig(static_cast<std::size_t>(n));
  const double scale = std::max(h.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const long budget = static_cast<long>(options.sweeps_per_dimension) * static_cast<long>(n);
  long total = 0;
  int iter = 0;
  Eigen::Index iu = n - 1;
  while (true) {
    while (iu > 0 && negligible_subdiagonal(h, iu - 1, scale)) {
      h(iu, iu - 1) = 0.0;
      eig[static_cast<std::size_t>(iu)] = h(iu, iu);
      --iu;
      iter = 0;
    }
    if (iu == 0) {
      eig[0] = h(0, 0);
      return eig;
    }
    if (++total > budget) {
      throw Error(ErrorCode::no_convergence, "QR iteration exceeded " + std::to_string(budget) + " steps");
    }
    ++iter;

    Eigen::Index il = iu - 1;
    while (il > 0 && !negligible_subdiagonal(h, il - 1, scale)) --il;

    // Only the active window [il, iu] affects the remaining eigenvalues.
    const Complex shift = wilkinson_shift(h, iu, iter);
    Complex r;
    Rotation g = make_rotation(h(il, il) - shift, h(il + 1, il), r);
    rotate_rows(h, g, il, il, iu);
    rotate_cols(h, g, il, il, std::min(il + 2, iu));
    for (Eigen::Index i = il + 1; i < iu; ++i) {
      g = make_rotation(h(i, i - 1), h(i + 1, i - 1), r);
      h(i, i - 1) = r;
      h(i + 1, i - 1) = 0.0;
      rotate_rows(h, g, i, i, iu);
      rotate_cols(h, g, i, il, std::min(i + 2, iu));
    }
  }
}

bool by_real_then_imag(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::array<Eigen::MatrixXcd, 2> TruncatedHamiltonian::parity_blocks() const {
  std::array<Eigen::MatrixXcd, 2> blocks;
  for (int parity = 0; parity < 2; ++parity) {
    const auto idx = parity_indices(basis_size, parity);
    const auto size = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd& b = blocks[static_cast<std::size_t>(parity)];
    b.resize(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
      for (Eigen::Index i = 0; i < size; ++i) b(i, j) = matrix(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return blocks;
}

TruncatedHamiltonian build_truncated(const Frequencies& freqs, Complex g, int basis_size) {
  if (basis_size < 2) throw Error(ErrorCode::invalid_input, "basis size must be at least 2");
  require_finite(g, "g");
  const int n = basis_size;
  TruncatedHamiltonian h;
  h.basis_size = n;
  h.matrix = Eigen::MatrixXcd::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);

  // <k+1| x |k> = sqrt(k+1) / sqrt(2 nu) for p^2 + nu^2 x^2 = nu (2 a^dag a + 1).
  std::vector<double> xs(static_cast<std::size_t>(n - 1));
  std::vector<double> ys(static_cast<std::size_t>(n - 1));
  for (int k = 0; k + 1 < n; ++k) {
    xs[static_cast<std::size_t>(k)] = std::sqrt((k + 1) / (2.0 * freqs.nu()));
    ys[static_cast<std::size_t>(k)] = std::sqrt((k + 1) / (2.0 * freqs.omega()));
  }
  auto elem = [](const std::vector<double>& ladder, int from, int to) {
    if (to == from + 1) return ladder[static_cast<std::size_t>(from)];
    if (from == to + 1) return ladder[static_cast<std::size_t>(to)];
    return 0.0;
  };

  for (int kx = 0; kx < n; ++kx) {
    for (int ky = 0; ky < n; ++ky) {
      const auto col = TruncatedHamiltonian::index(kx, ky, n);
      h.matrix(col, col) = (2.0 * kx + 1.0) * freqs.nu() + (2.0 * ky + 1.0) * freqs.omega();
      if (g == 0.0) continue;
      for (int dx : {-1, 1}) {
        for (int dy : {-1, 1}) {
          const int px = kx + dx;
          const int py = ky + dy;
          if (px < 0 || py < 0 || px >= n || py >= n) continue;
          h.matrix(TruncatedHamiltonian::index(px, py, n), col) = g * elem(xs, kx, px) * elem(ys, ky, py);
        }
      }
    }
  }
  return h;
}

std::vector<Complex> eigenvalues_dense(Eigen::MatrixXcd matrix, const DenseEigenOptions& options) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorCode::invalid_input, "matrix must be square");
  if (!matrix.allFinite()) throw Error(ErrorCode::invalid_input, "matrix has non-finite entries");
  if (matrix.rows() == 0) return {};
  if (options.balance) balance(matrix);
  reduce_to_hessenberg(matrix);
  return hessenberg_qr(matrix, options);
}

std::vector<Complex> truncated_spectrum(const TruncatedHamiltonian& h) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(h.matrix.rows()));
  for (auto& block : h.parity_blocks()) {
    const auto part = eigenvalues_dense(std::move(block));
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), by_real_then_imag);
  return out;
}

std::vector<LevelMatch> conventional_targets(const Frequencies& freqs, double g, int limit) {
  std::vector<LevelMatch> out;
  out.reserve(static_cast<std::size_t>(limit) * static_cast<std::size_t>(limit));
  const Radicals rad = radicals(freqs, g);
  for (int kx = 0; kx < limit; ++kx) {
    for (int ky = 0; ky < limit; ++ky) {
      const LevelSpec level(kx + ky, std::abs(kx - ky));
      const SheetLabel sheet{Sign::plus, Sign::plus, kx >= ky ? Sign::plus : Sign::minus};
      LevelMatch m;
      m.kx = kx;
      m.ky = ky;
      m.closed_form = energy(rad, level, sheet);
      out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LevelMatch& a, const LevelMatch& b) { return by_real_then_imag(a.closed_form, b.closed_form); });
  return out;
}

std::vector<LevelMatch> match_levels(std::span<const Complex> computed, std::vector<LevelMatch> targets) {
  struct Pair {
    double distance;
    std::size_t value;
    std::size_t target;
  };
  std::vector<Pair> pairs;
  pairs.reserve(computed.size() * targets.size());
  for (std::size_t v = 0; v < computed.size(); ++v) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      pairs.push_back({std::abs(computed[v] - targets[t].closed_form), v, t});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.value != b.value) return a.value < b.value;
    return a.target < b.target;
  });
  std::vector<bool> value_used(computed.size(), false);
  std::vector<bool> target_used(targets.size(), false);
  std::vector<LevelMatch> out(computed.size());
  std::size_t assigned = 0;
  for (const Pair& p : pairs) {
    if (assigned == computed.size()) break;
    if (value_used[p.value] || target_used[p.target]) continue;
    value_used[p.value] = true;
    target_used[p.target] = true;
    LevelMatch m = targets[p.target];
    m.computed = computed[p.value];
    m.deviation = p.distance;
    out[p.value] = m;
    ++assigned;
  }
  if (assigned != computed.size()) throw Error(ErrorCode::invalid_input, "fewer targets than computed values");
  return out;
}

ValidationReport validate_closed_forms(const Frequencies& freqs, std::span<const double> g_list, int n_max,
                                       int basis_size, const ValidationOptions& options) {
  if (n_max < 0) throw Error(ErrorCode::invalid_input, "n_max must be nonnegative");
  if (basis_size < 2) throw Error(ErrorCode::invalid_input, "basis size must be at least 2");
  const double threshold = 2.0 * freqs.nu() * freqs.omega();
  for (double g : g_list) {
    if (!std::isfinite(g) || std::abs(g) >= threshold) {
      throw Error(ErrorCode::invalid_input, "oracle requires real |g| < 2 nu omega");
    }
  }

  std::vector<int> sizes = options.coarser_sizes;
  if (sizes.empty()) sizes.push_back(std::max(2, basis_size / 2));
  std::erase_if(sizes, [&](int s) { return s < 2 || s >= basis_size; });
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  sizes.push_back(basis_size);

  const auto count = static_cast<std::size_t>((n_max + 1) * (n_max + 2) / 2);
  ValidationReport report;
  report.nu = freqs.nu();
  report.omega = freqs.omega();
  report.n_max = n_max;
  report.basis_size = basis_size;
  report.points.resize(g_list.size());

  detail::parallel_for(g_list.size(), [&](std::size_t gi) {
    ValidationPoint& point = report.points[gi];
    point.g = g_list[gi];
    // Enough closed-form candidates that greedy matching never runs short.
    const auto targets = conventional_targets(freqs, point.g, 2 * (n_max + 2));
    for (int size : sizes) {
      const auto spectrum = truncated_spectrum(build_truncated(freqs, point.g, size));
      const std::size_t take = std::min(count, spectrum.size());
      SweepEntry entry;
      entry.basis_size = size;
      entry.matches = match_levels(std::span(spectrum).first(take), targets);
      for (const auto& m : entry.matches) entry.max_deviation = std::max(entry.max_deviation, m.deviation);
      point.sweep.push_back(std::move(entry));
    }
    const SweepEntry& last = point.sweep.back();
    point.max_deviation = last.max_deviation;
    if (point.sweep.size() >= 2) {
      const SweepEntry& prev = point.sweep[point.sweep.size() - 2];
      for (const auto& m : last.matches) {
        for (const auto& p : prev.matches) {
          if (p.kx == m.kx && p.ky == m.ky) {
            point.max_change_on_doubling = std::max(point.max_change_on_doubling, std::abs(m.computed - p.computed));
          }
        }
      }
      if (prev.max_deviation > 0.0 && last.max_deviation > 0.0) {
        point.convergence_slope = std::log(prev.max_deviation / last.max_deviation) /
                                  std::log(double(last.basis_size) / double(prev.basis_size));
      }
      point.truncation_insufficient = point.max_change_on_doubling > options.truncation_threshold;
    }
  });

  for (const auto& p : report.points) {
    report.max_deviation = std::max(report.max_deviation, p.max_deviation);
    report.truncation_insufficient = report.truncation_insufficient || p.truncation_insufficient;
  }
  return report;
}

}  // namespace cho
