#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

#include "cho/spectral.hpp"

namespace cho {

/// H = p^2 + nu^2 x^2 + q^2 + omega^2 y^2 + g x y in the product basis
/// |kx, ky>, 0 <= kx, ky < N, each oscillator in its own frequency basis.
/// Row/column index is kx * N + ky.
struct TruncatedHamiltonian {
  int basis_size = 0;
  Eigen::MatrixXcd matrix;

  static Eigen::Index index(int kx, int ky, int basis_size) {
    return static_cast<Eigen::Index>(kx) * basis_size + ky;
  }

  /// The coupling x y flips the parity of both kx and ky, so the subspaces
  /// with kx + ky even and odd are invariant. Returns {even, odd}.
  std::array<Eigen::MatrixXcd, 2> parity_blocks() const;
};

TruncatedHamiltonian build_truncated(const Frequencies& freqs, Complex g, int basis_size);

struct DenseEigenOptions {
  bool balance = true;
  /// Iteration budget is sweeps_per_dimension * dimension QR steps in total.
  int sweeps_per_dimension = 30;
};

/// All eigenvalues of a general complex square matrix: diagonal balancing,
/// Householder reduction to upper Hessenberg form, then single-shift QR
/// with deflation. Throws no_convergence when the iteration budget runs out.
std::vector<Complex> eigenvalues_dense(Eigen::MatrixXcd matrix, const DenseEigenOptions& options = {});

/// Eigenvalues of the truncated Hamiltonian (computed block by block),
/// sorted by real part, then imaginary part.
std::vector<Complex> truncated_spectrum(const TruncatedHamiltonian& h);

struct LevelMatch {
  int kx = 0;  ///< quantum number of the Omega+ normal mode
  int ky = 0;  ///< quantum number of the Omega- normal mode
  Complex closed_form;
  Complex computed;
  double deviation = 0.0;
};

struct SweepEntry {
  int basis_size = 0;
  double max_deviation = 0.0;
  std::vector<LevelMatch> matches;
};

struct ValidationPoint {
  double g = 0.0;
  std::vector<SweepEntry> sweep;  ///< ascending basis sizes, last one is the requested N
  double max_deviation = 0.0;     ///< at the requested N
  /// Largest change of a matched eigenvalue between the last two sweep entries.
  double max_change_on_doubling = 0.0;
  /// log(dev_prev / dev_last) / log(N_last / N_prev); 0 when undefined.
  double convergence_slope = 0.0;
  bool truncation_insufficient = false;
};

struct ValidationOptions {
  /// Basis sizes evaluated before the requested N. Empty means {N/2}.
  std::vector<int> coarser_sizes;
  double truncation_threshold = 1e-8;
};

struct ValidationReport {
  double nu = 0.0;
  double omega = 0.0;
  int n_max = 0;
  int basis_size = 0;
  std::vector<ValidationPoint> points;
  double max_deviation = 0.0;
  bool truncation_insufficient = false;
};

/// Conventional-sheet closed forms E(kx, ky) = (2kx+1)Omega+ + (2ky+1)Omega-
/// for every normal-mode occupation with kx, ky < limit.
std::vector<LevelMatch> conventional_targets(const Frequencies& freqs, double g, int limit);

/// Greedy nearest-distance assignment of computed eigenvalues to closed-form
/// targets; each target is used at most once.
std::vector<LevelMatch> match_levels(std::span<const Complex> computed, std::vector<LevelMatch> targets);

/// Matches the lowest (n_max+1)(n_max+2)/2 truncated eigenvalues against the
/// conventional-sheet closed forms for each real g with |g| < 2 nu omega.
ValidationReport validate_closed_forms(const Frequencies& freqs, std::span<const double> g_list, int n_max,
                                       int basis_size, const ValidationOptions& options = {});

}  // namespace cho
