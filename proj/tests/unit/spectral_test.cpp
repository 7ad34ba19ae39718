#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cho/oracle.hpp"
#include "cho/spectral.hpp"
#include "oracles.hpp"

using namespace cho;
using cho::testing::Rng;

namespace {

const Frequencies kFreqs(2.0, 1.0);

int find_id(const std::vector<BranchPoint>& pts, std::string_view id) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("branch points of the unequal-frequency surface") {
    const auto pts = branch_points(kFreqs);
    REQUIRE(pts.size() == 4);
    const auto& rp = pts[static_cast<std::size_t>(find_id(pts, "real+"))];
    CHECK(rp.g == Complex(4.0, 0.0));
    CHECK(rp.multiplicity == 2);
    CHECK(rp.kind == BranchKind::real_axis);
    const auto& im = pts[static_cast<std::size_t>(find_id(pts, "imag-"))];
    CHECK(std::abs(im.g - Complex(0.0, -3.0)) < 1e-15);
    CHECK(im.multiplicity == 1);
    CHECK(find_id(pts, "origin") == -1);

    // Swapping the frequencies leaves the set unchanged.
    const auto swapped = branch_points(Frequencies(1.0, 2.0));
    for (const auto& p : pts) {
      const auto& q = swapped[static_cast<std::size_t>(find_id(swapped, p.id))];
      CHECK(std::abs(p.g - q.g) < 1e-15);
    }
    CHECK_THROWS_AS(branch_point_by_id(kFreqs, "origin"), Error);
  }

  TEST_CASE("equal frequencies collapse the imaginary pair onto the origin") {
    const auto pts = branch_points(Frequencies(1.5, 1.5));
    REQUIRE(find_id(pts, "origin") >= 0);
    CHECK(find_id(pts, "imag+") == -1);
    const auto origin = branch_point_by_id(Frequencies(1.5, 1.5), "origin");
    CHECK(origin.g == Complex(0.0, 0.0));
    CHECK(origin.kind == BranchKind::diabolic_candidate);
  }

  TEST_CASE("closed form agrees with an independent evaluation on every sheet") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const double nu = rng.uniform(0.3, 3.0), om = rng.uniform(0.3, 3.0);
      const Frequencies f(nu, om);
      const Complex g = rng.complex_in_box(6.0);
      const int n = rng.integer(0, 6);
      const int m = n % 2 + 2 * rng.integer(0, n / 2);
      for (const auto& s : SheetLabel::all()) {
        const Complex ref = cho::testing::reference_energy(nu, om, n, m, to_int(s.inner), to_int(s.a), to_int(s.b), g);
        CHECK(std::abs(energy(f, LevelSpec(n, m), s, g) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
      }
    }
  }

  TEST_CASE("ground energy at g = 1 matches the frozen value and the truncated oracle") {
    const Complex e = energy(kFreqs, LevelSpec(0, 0), SheetLabel{}, Complex(1.0, 0.0));
    CHECK(e.real() == doctest::Approx(2.978755335069904).epsilon(1e-15));
    CHECK(std::abs(e - std::sqrt(5.0 + std::sqrt(15.0))) < 1e-14);
    const auto spectrum = truncated_spectrum(build_truncated(kFreqs, 1.0, 20));
    CHECK(std::abs(spectrum.front() - e) < 1e-9);
  }

  TEST_CASE("effective frequencies") {
    const auto eff = effective_frequencies(kFreqs, 1.0);
    CHECK(eff.plus.real() == doctest::Approx(2.0201828704560856).epsilon(1e-14));
    CHECK(eff.minus.real() == doctest::Approx(0.9585724646138185).epsilon(1e-14));
    CHECK_FALSE(eff.transformation_invalid);
    // Omega+ + Omega- and Omega+ - Omega- reproduce the outer radicals.
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      const Complex g = rng.complex_in_box(3.5);
      const auto e2 = effective_frequencies(kFreqs, g);
      const auto r = radicals(kFreqs, g);
      const Complex sum = e2.plus + e2.minus, diff = e2.plus - e2.minus;
      const bool ok_plus = std::abs(sum - r.r_plus) < 1e-10 || std::abs(sum + r.r_plus) < 1e-10 ||
                           std::abs(sum - r.r_minus) < 1e-10 || std::abs(sum + r.r_minus) < 1e-10;
      const bool ok_minus = std::abs(diff - r.r_minus) < 1e-10 || std::abs(diff + r.r_minus) < 1e-10 ||
                            std::abs(diff - r.r_plus) < 1e-10 || std::abs(diff + r.r_plus) < 1e-10;
      CHECK(ok_plus);
      CHECK(ok_minus);
    }
    CHECK(effective_frequencies(kFreqs, 4.0).transformation_invalid);
  }

  TEST_CASE("branch-point flag") {
    CHECK(evaluate_energy(kFreqs, LevelSpec(0, 0), SheetLabel{}, 4.0).at_branch_point);
    CHECK(evaluate_energy(kFreqs, LevelSpec(0, 0), SheetLabel{}, Complex(0.0, 3.0)).at_branch_point);
    CHECK_FALSE(evaluate_energy(kFreqs, LevelSpec(0, 0), SheetLabel{}, 3.9).at_branch_point);
    CHECK(near_branch_point(kFreqs, Complex(4.0 + 1e-9, 0.0)));
  }

  TEST_CASE("decoupled spectrum covers every state exactly once") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
      const Frequencies f(rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0));
      if (f.equal()) continue;
      const int n = rng.integer(0, 7);
      for (const auto& group : decoupled_spectrum(f, n)) {
        CHECK(group.states.size() == (group.quartet() ? 4u : 8u));
        std::vector<int> hits(group.states.size(), 0);
        for (const auto& a : group.sheets) {
          ++hits[a.state];
          const auto& st = group.states[a.state];
          CHECK(std::abs(energy(f, group.level, a.sheet, 0.0) - st.energy) < 1e-12 * (1.0 + std::abs(st.energy)));
          const SheetLabel back = sheet_for_state(f, st.kx, st.ky, st.sx, st.sy);
          if (group.quartet()) {
            CHECK(back.inner == a.sheet.inner);
            CHECK(back.a == a.sheet.a);
          } else {
            CHECK(back == a.sheet);
          }
          CHECK(phase_aligned(a.sheet) == (st.sx == st.sy));
        }
        for (int h : hits) CHECK(h == (group.quartet() ? 2 : 1));
      }
    }
  }

  TEST_CASE("ansatz parameters satisfy the defining relations") {
    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
      const Frequencies f(rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0));
      const Complex g = rng.complex_in_box(5.0);
      for (const auto& s : SheetLabel::all()) {
        if (s.b == Sign::minus) continue;
        const Complex e0 = energy(f, LevelSpec(0, 0), s, g);
        if (std::abs(e0) < 1e-6) continue;
        const auto p = ansatz_parameters(f, g, s);
        for (double r : ansatz_residuals(p, f, g, e0)) CHECK(r < 1e-12);
      }
    }
  }

  TEST_CASE("ansatz recovery refuses a vanishing ground energy") {
    const Frequencies eq(1.0, 1.0);
    const SheetLabel mixed{Sign::minus, Sign::plus, Sign::plus};
    CHECK(std::abs(energy(eq, LevelSpec(0, 0), mixed, 0.0)) < 1e-15);
    CHECK_THROWS_AS(ansatz_parameters(eq, 0.0, mixed), Error);
    try {
      ansatz_parameters(eq, 0.0, mixed);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate_ground_energy);
    }
  }

  TEST_CASE("reality along the real axis ends at the real branch points") {
    const auto report = reality_classification(kFreqs, LevelSpec(1, 1), SheetLabel{}, {ScanAxis::real, 6.0, 1201});
    CHECK(report.first_complex == doctest::Approx(4.0).epsilon(0.01 / 4.0));
    CHECK(report.segments.size() == 3);
  }

  TEST_CASE("aligned quartet sheets stay real on the imaginary axis") {
    for (const auto& s : SheetLabel::all()) {
      if (s.b == Sign::minus) continue;
      const auto report = reality_classification(kFreqs, LevelSpec(0, 0), s, {ScanAxis::imaginary, 8.0, 1601});
      if (s.inner == Sign::plus) {
        CHECK(std::isinf(report.first_complex));
      } else {
        CHECK(report.first_complex == doctest::Approx(3.0).epsilon(0.01 / 3.0));
      }
    }
  }
}
