#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "cho/mesh.hpp"
#include "cho/serialization.hpp"

using namespace cho;

namespace {

const Frequencies kFreqs(2.0, 1.0);

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("default window covers every branch point") {
    const auto w = default_window(kFreqs);
    CHECK(w.re_max == doctest::Approx(6.0));
    CHECK(w.im_min == doctest::Approx(-6.0));
    for (const auto& bp : branch_points(kFreqs)) {
      CHECK(bp.g.real() < w.re_max);
      CHECK(bp.g.imag() > w.im_min);
    }
  }

  TEST_CASE("coupled surface shape and values") {
    const MeshWindow w{-5.0, 5.0, -4.0, 4.0};
    const auto mesh = coupled_surface(kFreqs, LevelSpec(1, 1), w, 21, 17);
    CHECK(mesh.sheets.size() == 8);
    CHECK(mesh.coordinate(0, 0) == Complex(-5.0, -4.0));
    CHECK(mesh.coordinate(20, 16) == Complex(5.0, 4.0));
    CHECK(mesh.coordinate(10, 8) == Complex(0.0, 0.0));
    for (std::size_t s = 0; s < mesh.sheets.size(); ++s) {
      REQUIRE(mesh.sheets[s].values.size() == 21u * 17u);
      for (int iy = 0; iy < 17; iy += 4)
        for (int ix = 0; ix < 21; ix += 5) {
          const Complex v = mesh.value(s, ix, iy);
          CHECK(is_finite(v));
          CHECK(v == energy(kFreqs, LevelSpec(1, 1), mesh.sheets[s].label, mesh.coordinate(ix, iy)));
        }
    }
    CHECK(coupled_surface(kFreqs, LevelSpec(2, 0), w, 5, 5).sheets.size() == 4);
    CHECK_THROWS_AS(coupled_surface(kFreqs, LevelSpec(0, 0), w, 1, 5), Error);
  }

  TEST_CASE("equal-frequency ground surface at the origin") {
    const Frequencies eq(1.5, 1.5);
    const auto mesh = coupled_surface(eq, LevelSpec(0, 0), {-1.0, 1.0, -1.0, 1.0}, 11, 11);
    int zeros = 0, plus = 0, minus = 0;
    for (std::size_t s = 0; s < mesh.sheets.size(); ++s) {
      const Complex v = mesh.value(s, 5, 5);
      if (std::abs(v) < 1e-12) ++zeros;
      if (std::abs(v - 3.0) < 1e-12) ++plus;
      if (std::abs(v + 3.0) < 1e-12) ++minus;
    }
    CHECK(zeros == 2);
    CHECK(plus == 1);
    CHECK(minus == 1);
  }

  TEST_CASE("oscillator surfaces") {
    const auto mesh = oscillator_surface(OscillatorModel::ho_mod, 0.5, {-1.0, 1.0, -1.0, 1.0}, 9, 9);
    REQUIRE(mesh.sheets.size() == 2);
    CHECK(mesh.metadata.model == "ho-mod");
    CHECK(mesh.value(0, 4, 4) == -mesh.value(1, 4, 4));
    CHECK(std::abs(mesh.value(0, 4, 4) - 0.5) < 1e-15);
  }

  TEST_CASE("JSON round trip is bit-exact") {
    auto mesh = coupled_surface(kFreqs, LevelSpec(2, 2), default_window(kFreqs), 13, 9);
    mesh.metadata.timestamp = "2026-01-01T00:00:00Z";
    const Json j = to_json(mesh);
    const auto back = mesh_from_json(Json::parse(j.dump()));
    REQUIRE(back.sheets.size() == mesh.sheets.size());
    CHECK(back.nx == 13);
    CHECK(back.metadata.timestamp == mesh.metadata.timestamp);
    for (std::size_t s = 0; s < mesh.sheets.size(); ++s) {
      CHECK(back.sheets[s].label == mesh.sheets[s].label);
      for (std::size_t i = 0; i < mesh.sheets[s].values.size(); ++i) {
        CHECK(bit_equal(back.sheets[s].values[i].real(), mesh.sheets[s].values[i].real()));
        CHECK(bit_equal(back.sheets[s].values[i].imag(), mesh.sheets[s].values[i].imag()));
      }
    }
  }

  TEST_CASE("checksum ignores metadata and catches payload edits") {
    auto mesh = coupled_surface(kFreqs, LevelSpec(0, 0), default_window(kFreqs), 7, 7);
    const Json a = to_json(mesh);
    mesh.metadata.timestamp = "later";
    const Json b = to_json(mesh);
    CHECK(a["payload_checksum"] == b["payload_checksum"]);
    Json tampered = a;
    tampered["sheets"][0]["re"][3] = 123.0;
    CHECK_THROWS_AS(mesh_from_json(tampered), Error);
  }

  TEST_CASE("meshes are deterministic") {
    const auto a = to_json(coupled_surface(kFreqs, LevelSpec(3, 1), default_window(kFreqs), 31, 31)).dump();
    const auto b = to_json(coupled_surface(kFreqs, LevelSpec(3, 1), default_window(kFreqs), 31, 31)).dump();
    CHECK(a == b);
  }

  TEST_CASE("CSV carries the same values as JSON") {
    const auto mesh = coupled_surface(kFreqs, LevelSpec(1, 1), {-3.0, 3.0, -2.0, 2.0}, 6, 5);
    std::stringstream csv;
    write_mesh_csv(csv, mesh);
    const std::string text = csv.str();
    CHECK(text.rfind("re_g,im_g,sheet_inner,sheet_sA,sheet_sB,re_E,im_E\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    const auto rows = read_mesh_csv(csv);
    CHECK(rows.size() == 8u * 30u);
    for (const auto& r : rows) {
      std::size_t s = 0;
      while (mesh.sheets[s].label != r.sheet) ++s;
      bool found = false;
      for (int iy = 0; iy < 5 && !found; ++iy)
        for (int ix = 0; ix < 6 && !found; ++ix) {
          if (mesh.coordinate(ix, iy) == Complex(r.re_g, r.im_g)) {
            found = true;
            CHECK(bit_equal(mesh.value(s, ix, iy).real(), r.re_e));
            CHECK(bit_equal(mesh.value(s, ix, iy).imag(), r.im_e));
          }
        }
      CHECK(found);
    }
  }

  TEST_CASE("SVG output") {
    const auto mesh = coupled_surface(kFreqs, LevelSpec(0, 0), default_window(kFreqs), 40, 40);
    std::ostringstream svg;
    write_mesh_svg(svg, mesh, 0, MeshComponent::imag, 20);
    const std::string s = svg.str();
    CHECK(s.rfind("<svg", 0) == 0);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK_THROWS_AS(write_mesh_svg(svg, mesh, 9, MeshComponent::real), Error);
  }
}
