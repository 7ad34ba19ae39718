#include <doctest.h>

#include <algorithm>
#include <Eigen/SVD>
#include <cmath>

#include "cho/oracle.hpp"
#include "oracles.hpp"

using namespace cho;
using cho::testing::multiset_distance;
using cho::testing::Rng;

namespace {

const Frequencies kFreqs(2.0, 1.0);

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("truncated matrix entries") {
    const auto h = build_truncated(kFreqs, 0.0, 3);
    REQUIRE(h.matrix.rows() == 9);
    for (int kx = 0; kx < 3; ++kx)
      for (int ky = 0; ky < 3; ++ky) {
        const auto i = TruncatedHamiltonian::index(kx, ky, 3);
        CHECK(h.matrix(i, i) == Complex((2 * kx + 1) * 2.0 + (2 * ky + 1) * 1.0));
      }
    CHECK(h.matrix.isDiagonal());

    // <1,1| g x y |0,0> = g / (2 sqrt(nu omega)).
    const auto hg = build_truncated(kFreqs, 1.0, 3);
    const auto a = TruncatedHamiltonian::index(1, 1, 3), b = TruncatedHamiltonian::index(0, 0, 3);
    CHECK(std::abs(hg.matrix(a, b) - 1.0 / (2.0 * std::sqrt(2.0))) < 1e-15);
    CHECK_THROWS_AS(build_truncated(kFreqs, 1.0, 1), Error);
  }

  TEST_CASE("complex coupling gives a complex-symmetric matrix") {
    const auto h = build_truncated(kFreqs, Complex(1.0, 2.0), 6);
    CHECK((h.matrix - h.matrix.transpose()).norm() == 0.0);
    CHECK((h.matrix - h.matrix.adjoint()).norm() > 0.0);
  }

  TEST_CASE("parity blocks carry the full spectrum") {
    const auto h = build_truncated(kFreqs, Complex(0.7, 0.3), 8);
    const auto blocks = h.parity_blocks();
    CHECK(blocks[0].rows() + blocks[1].rows() == 64);
    auto joined = eigenvalues_dense(blocks[0]);
    const auto odd = eigenvalues_dense(blocks[1]);
    joined.insert(joined.end(), odd.begin(), odd.end());
    CHECK(multiset_distance(joined, eigenvalues_dense(h.matrix), true) < 1e-10);
  }

  TEST_CASE("dense eigensolver on small known matrices") {
    CHECK(multiset_distance(eigenvalues_dense(Eigen::MatrixXcd::Identity(4, 4)), {1.0, 1.0, 1.0, 1.0}) < 1e-14);
    Eigen::MatrixXcd companion(2, 2);
    companion << 0.0, -3.0, 1.0, 4.0;  // E^2 - 4E + 3
    CHECK(multiset_distance(eigenvalues_dense(companion), {1.0, 3.0}) < 1e-13);
    Eigen::MatrixXcd rot(2, 2);
    rot << 0.0, -1.0, 1.0, 0.0;
    CHECK(multiset_distance(eigenvalues_dense(rot), {Complex(0.0, 1.0), Complex(0.0, -1.0)}) < 1e-14);
  }

  TEST_CASE("dense eigensolver has small backward error on random matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = rng.integer(5, 40);
      Eigen::MatrixXcd m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = rng.complex_in_box(1.0);
      const auto eig = eigenvalues_dense(m);
      REQUIRE(eig.size() == static_cast<std::size_t>(n));
      for (const Complex lambda : eig) {
        // Smallest singular value of (M - lambda I) relative to ||M||.
        const Eigen::MatrixXcd shifted = m - lambda * Eigen::MatrixXcd::Identity(n, n);
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
        CHECK(svd.singularValues()(n - 1) / m.norm() < 1e-9);
      }
    }
  }

  TEST_CASE("dense eigensolver reports an exhausted budget") {
    Eigen::MatrixXcd m(3, 3);
    m << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0;
    DenseEigenOptions opts;
    opts.sweeps_per_dimension = 0;
    try {
      eigenvalues_dense(m, opts);
      FAIL("expected no_convergence");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::no_convergence);
    }
  }

  TEST_CASE("ground level converges with basis size") {
    const Complex exact = energy(kFreqs, LevelSpec(0, 0), SheetLabel{}, 1.0);
    const auto e20 = truncated_spectrum(build_truncated(kFreqs, 1.0, 20)).front();
    const auto e30 = truncated_spectrum(build_truncated(kFreqs, 1.0, 30)).front();
    CHECK(std::abs(e20 - exact) < 1e-9);
    CHECK(std::abs(e30 - exact) < 1e-9);
  }

  TEST_CASE("conventional targets") {
    const auto targets = conventional_targets(kFreqs, 1.0, 3);
    CHECK(targets.size() == 9);
    const auto eff = effective_frequencies(kFreqs, 1.0);
    for (const auto& t : targets) {
      CHECK(std::abs(t.closed_form - ((2.0 * t.kx + 1.0) * eff.plus + (2.0 * t.ky + 1.0) * eff.minus)) < 1e-12);
    }
  }

  TEST_CASE("validation matches low levels at modest basis size") {
    const std::vector<double> gs{0.0, 1.0, 2.0};
    ValidationOptions opts;
    opts.coarser_sizes = {16};
    const auto report = validate_closed_forms(kFreqs, gs, 3, 20, opts);
    CHECK(report.points.size() == 3);
    CHECK(report.max_deviation < 1e-7);
    CHECK_FALSE(report.truncation_insufficient);
    for (const auto& pt : report.points) {
      CHECK(pt.sweep.size() == 2);
      CHECK(pt.sweep.front().basis_size == 16);
      CHECK(pt.sweep.back().matches.size() == 10);
    }
  }

  TEST_CASE("too small a basis is flagged") {
    const std::vector<double> gs{3.0};
    const auto report = validate_closed_forms(kFreqs, gs, 4, 6);
    CHECK(report.truncation_insufficient);
  }

  TEST_CASE("couplings at or beyond the real branch points are rejected") {
    const std::vector<double> gs{4.0};
    CHECK_THROWS_AS(validate_closed_forms(kFreqs, gs, 2, 10), Error);
  }

  TEST_CASE("real coupling below threshold gives a real spectrum") {
    for (double g : {-3.5, 0.0, 2.0, 3.9}) {
      const auto spectrum = truncated_spectrum(build_truncated(kFreqs, g, 12));
      for (const Complex e : spectrum) CHECK(std::abs(e.imag()) < 1e-8);
    }
  }

  TEST_CASE("equal frequencies") {
    const Frequencies eq(1.0, 1.0);
    const Complex exact = energy(eq, LevelSpec(0, 0), SheetLabel{}, 0.5);
    CHECK(std::abs(truncated_spectrum(build_truncated(eq, 0.5, 20)).front() - exact) < 1e-9);
  }
}
