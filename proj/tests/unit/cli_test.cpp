#include <doctest.h>

#ifdef CHO_HAVE_CLI

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "cho/serialization.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cho::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cho_cli_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("energy at the sample coupling") {
    const auto r = run({"energy", "--nu", "2", "--omega", "1", "--sheet", "+++", "--g-re", "1"});
    CHECK(r.code == cho::cli::kExitOk);
    const auto j = cho::Json::parse(r.out);
    CHECK(j["E"][0].get<double>() == doctest::Approx(2.978755335069904).epsilon(1e-15));
  }

  TEST_CASE("exit codes") {
    CHECK(run({"energy", "--nu", "2", "--omega", "1", "--n", "1", "--m", "0"}).code == cho::cli::kExitValidation);
    CHECK(run({"energy", "--nu", "2", "--omega", "1", "--g-re", "4"}).code == cho::cli::kExitNumerical);
    CHECK(run({"energy", "--nu", "-1", "--omega", "1"}).code == cho::cli::kExitValidation);
    CHECK(run({"no-such-command"}).code == cho::cli::kExitValidation);
    CHECK(run({"single-osc", "matrix", "--nu-re", "0", "--nu-im", "1", "--delta", "1"}).code ==
          cho::cli::kExitNumerical);
    const auto bad = run({"energy", "--nu", "2", "--omega", "1", "--sheet", "+?+"});
    CHECK(bad.code == cho::cli::kExitValidation);
    CHECK(cho::Json::parse(bad.err).contains("error"));
    CHECK(run({"--version"}).code == cho::cli::kExitOk);
  }

  TEST_CASE("config file values yield to explicit flags") {
    const auto cfg = temp_file("config.json");
    std::ofstream(cfg) << R"({"nu": 2, "omega": 1, "g-re": 4, "sheet": "+++"})";
    const auto from_config = run({"energy", "--config", cfg.string()});
    CHECK(from_config.code == cho::cli::kExitNumerical);
    const auto overridden = run({"energy", "--config", cfg.string(), "--g-re", "1"});
    CHECK(overridden.code == cho::cli::kExitOk);
    CHECK(cho::Json::parse(overridden.out)["E"][0].get<double>() == doctest::Approx(2.978755335069904));
    std::filesystem::remove(cfg);
  }

  TEST_CASE("monodromy and reachability") {
    const auto m = run({"monodromy", "--nu", "2", "--omega", "1", "--n", "1", "--m", "1", "--around", "real+"});
    CHECK(m.code == 0);
    CHECK(cho::Json::parse(m.out)["moved"] == 8);
    const auto r = run({"reachability", "--nu", "2", "--omega", "1", "--n", "1", "--m", "1"});
    CHECK(r.code == 0);
    CHECK(cho::Json::parse(r.out)["orbits"].size() == 1);
  }

  TEST_CASE("surface export to every format") {
    for (const std::string ext : {".json", ".csv", ".svg"}) {
      const auto path = temp_file("surface" + ext);
      const auto r = run({"surface", "--nu", "2", "--omega", "1", "--res", "11", "--out", path.string()});
      CHECK(r.code == 0);
      CHECK(std::filesystem::file_size(path) > 0);
      if (ext == ".json") {
        std::ifstream in(path);
        const auto mesh = cho::mesh_from_json(cho::Json::parse(in));
        CHECK(mesh.nx == 11);
        CHECK(mesh.sheets.size() == 4);
      }
      std::filesystem::remove(path);
    }
  }

  TEST_CASE("continuation from a path file") {
    const auto path = temp_file("path.json");
    std::ofstream(path) << R"({"segments":[{"type":"arc","center":[4,0],"radius":1,"from_angle":3.141592653589793,"to_angle":9.42477796076938}]})";
    const auto r = run({"continue", "--nu", "2", "--omega", "1", "--path", path.string(), "--start-sheet", "+++"});
    CHECK(r.code == 0);
    CHECK(cho::Json::parse(r.out)["end_sheet"] == "-++");
    std::filesystem::remove(path);
  }

  TEST_CASE("oracle and single-oscillator commands") {
    const auto o = run({"oracle", "--nu", "2", "--omega", "1", "--g", "0", "1", "--nmax", "2", "--basis", "24", "--sweep", "20"});
    CHECK(o.code == 0);
    CHECK(cho::Json::parse(o.out)["max_deviation"].get<double>() < 1e-7);
    const auto scan = run({"single-osc", "scan", "--model", "ho-mod", "--delta", "1", "--samples", "5", "--format", "csv"});
    CHECK(scan.code == 0);
    CHECK(scan.out.find('\n') != std::string::npos);
    const auto chir = run({"single-osc", "chirality", "--delta", "1"});
    CHECK(chir.code == 0);
    CHECK(chir.out.find("right") != std::string::npos);
  }
}

#endif
