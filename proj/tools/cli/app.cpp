#include "app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>

#include "cho/continuation.hpp"
#include "cho/mesh.hpp"
#include "cho/oracle.hpp"
#include "cho/serialization.hpp"
#include "cho/single_oscillator.hpp"
#include "cho/spectral.hpp"
#include "config_merge.hpp"

namespace cho::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct SystemArgs {
  double nu = kUnset;
  double omega = kUnset;
  int n = 0;
  int m = 0;

  Frequencies freqs() const {
    if (std::isnan(nu) || std::isnan(omega)) throw Error(ErrorCode::invalid_input, "--nu and --omega are required");
    return Frequencies(nu, omega);
  }
  LevelSpec level() const { return LevelSpec(n, m); }
};

void add_frequencies(CLI::App* cmd, SystemArgs& s) {
  cmd->add_option("--nu", s.nu, "x-oscillator frequency (> 0)");
  cmd->add_option("--omega", s.omega, "y-oscillator frequency (> 0)");
}

void add_level(CLI::App* cmd, SystemArgs& s) {
  cmd->add_option("--n", s.n, "total excitation")->capture_default_str();
  cmd->add_option("--m", s.m, "constituent difference |kx - ky|")->capture_default_str();
}

/// Writes to the named file, or to the default stream when the name is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::invalid_input, "cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  return dot == std::string::npos ? std::string() : path.substr(dot + 1);
}

ScanAxis parse_axis(const std::string& s) { return s == "real" ? ScanAxis::real : ScanAxis::imaginary; }

OscillatorModel parse_model(const std::string& s) { return s == "ho" ? OscillatorModel::ho : OscillatorModel::ho_mod; }

using Action = std::function<int()>;

void add_branch_points(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("branch-points", "List the square-root branch points of the energy surface");
  auto s = std::make_shared<SystemArgs>();
  auto format = std::make_shared<std::string>("json");
  add_frequencies(cmd, *s);
  cmd->add_option("--format", *format)->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      const auto points = branch_points(s->freqs());
      if (*format == "json") {
        print_json(out, to_json(points));
      } else {
        out << std::left << std::setw(8) << "id" << std::setw(26) << "re" << std::setw(26) << "im" << std::setw(14)
            << "multiplicity" << "kind\n";
        out << std::setprecision(17);
        for (const auto& bp : points) {
          out << std::setw(8) << bp.id << std::setw(26) << bp.g.real() << std::setw(26) << bp.g.imag() << std::setw(14)
              << bp.multiplicity << to_string(bp.kind) << '\n';
        }
      }
      return kExitOk;
    };
  });
}

void add_energy(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("energy", "Evaluate the closed-form energy on one sheet");
  auto s = std::make_shared<SystemArgs>();
  auto sheet = std::make_shared<std::string>("+++");
  auto g = std::make_shared<std::array<double, 2>>();
  add_frequencies(cmd, *s);
  add_level(cmd, *s);
  cmd->add_option("--sheet", *sheet, "sheet label (inner, sA, sB), e.g. +-+")->capture_default_str();
  cmd->add_option("--g-re", (*g)[0], "real part of the coupling");
  cmd->add_option("--g-im", (*g)[1], "imaginary part of the coupling");
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      const Frequencies f = s->freqs();
      const LevelSpec level = s->level();
      const SheetLabel label = SheetLabel::parse(*sheet);
      const Complex coupling{(*g)[0], (*g)[1]};
      const auto ev = evaluate_energy(f, level, label, coupling);
      print_json(out, {{"schema_version", kSchemaVersion},
                       {"kind", "energy"},
                       {"nu", f.nu()},
                       {"omega", f.omega()},
                       {"n", level.n},
                       {"m", level.m},
                       {"sheet", label.str()},
                       {"g", complex_to_json(coupling)},
                       {"E", complex_to_json(ev.value)},
                       {"at_branch_point", ev.at_branch_point}});
      return ev.at_branch_point ? kExitNumerical : kExitOk;
    };
  });
}

void add_surface(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("surface", "Sample all sheets of a surface on a rectangular grid");
  struct Args {
    SystemArgs sys;
    std::string model = "coupled";
    double delta = 0.1;
    std::vector<double> window;
    std::vector<int> res;
    std::string out_path;
    std::size_t svg_sheet = 0;
    std::string component = "re";
    std::string timestamp;
  };
  auto a = std::make_shared<Args>();
  add_frequencies(cmd, a->sys);
  add_level(cmd, a->sys);
  cmd->add_option("--model", a->model, "coupled | ho | ho-mod")
      ->check(CLI::IsMember({"coupled", "ho", "ho-mod"}))
      ->capture_default_str();
  cmd->add_option("--delta", a->delta, "gap of the modified oscillator")->capture_default_str();
  cmd->add_option("--window", a->window, "re_min re_max im_min im_max")->expected(4);
  cmd->add_option("--res", a->res, "nx [ny]")->expected(1, 2);
  cmd->add_option("--out", a->out_path, "output file; format from extension (.json, .csv, .svg)");
  cmd->add_option("--svg-sheet", a->svg_sheet, "sheet index rendered in SVG output")->capture_default_str();
  cmd->add_option("--component", a->component, "re | im for SVG output")
      ->check(CLI::IsMember({"re", "im"}))
      ->capture_default_str();
  cmd->add_option("--timestamp", a->timestamp, "optional metadata timestamp (excluded from the checksum)");
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      int nx = kDefaultResolution;
      int ny = kDefaultResolution;
      if (!a->res.empty()) {
        nx = a->res[0];
        ny = a->res.size() > 1 ? a->res[1] : a->res[0];
      }
      SurfaceMesh mesh;
      if (a->model == "coupled") {
        const Frequencies f = a->sys.freqs();
        const MeshWindow w = a->window.empty() ? default_window(f)
                                               : MeshWindow{a->window[0], a->window[1], a->window[2], a->window[3]};
        mesh = coupled_surface(f, a->sys.level(), w, nx, ny);
      } else {
        const double half = std::max(1.5, 3.0 * a->delta);
        const MeshWindow w = a->window.empty() ? MeshWindow{-half, half, -half, half}
                                               : MeshWindow{a->window[0], a->window[1], a->window[2], a->window[3]};
        mesh = oscillator_surface(parse_model(a->model), a->delta, w, nx, ny);
      }
      if (!a->timestamp.empty()) mesh.metadata.timestamp = a->timestamp;

      const std::string ext = extension(a->out_path);
      Sink sink(a->out_path, out);
      if (ext == "csv") {
        write_mesh_csv(*sink, mesh);
      } else if (ext == "svg") {
        write_mesh_svg(*sink, mesh, a->svg_sheet, a->component == "re" ? MeshComponent::real : MeshComponent::imag);
      } else {
        *sink << to_json(mesh).dump() << '\n';
      }
      return kExitOk;
    };
  });
}

void add_continue(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("continue", "Continue one eigenvalue along a path in the coupling plane");
  struct Args {
    SystemArgs sys;
    std::string path;
    std::string start = "+++";
    std::string out_path;
  };
  auto a = std::make_shared<Args>();
  add_frequencies(cmd, a->sys);
  add_level(cmd, a->sys);
  cmd->add_option("--path", a->path, "path.json")->required();
  cmd->add_option("--start-sheet", a->start, "starting sheet label")->capture_default_str();
  cmd->add_option("--out", a->out_path, "write the trace here instead of stdout");
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      std::ifstream in(a->path);
      if (!in) throw Error(ErrorCode::invalid_input, "cannot open path file " + a->path);
      Json j;
      try {
        in >> j;
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::invalid_input, "path file is not valid JSON: " + std::string(e.what()));
      }
      const auto trace = continue_along(a->sys.freqs(), a->sys.level(), SheetLabel::parse(a->start), path_from_json(j));
      Sink sink(a->out_path, out);
      print_json(*sink, to_json(trace));
      return kExitOk;
    };
  });
}

void add_monodromy(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("monodromy", "Sheet permutation induced by a loop around one branch point");
  struct Args {
    SystemArgs sys;
    std::string around;
    std::optional<double> radius;
    int samples = PathSpec::kDefaultSamples;
    std::string format = "json";
  };
  auto a = std::make_shared<Args>();
  add_frequencies(cmd, a->sys);
  add_level(cmd, a->sys);
  cmd->add_option("--around", a->around, "branch point id: real+, real-, imag+, imag- or origin")->required();
  cmd->add_option("--radius", a->radius, "loop radius (default: half the distance to the nearest other point)");
  cmd->add_option("--samples", a->samples, "samples on the loop")->capture_default_str();
  cmd->add_option("--format", a->format, "json | text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      const Frequencies f = a->sys.freqs();
      const auto loop = generator_loop(f, branch_point_by_id(f, a->around), a->radius, a->samples);
      const auto perm = monodromy(f, a->sys.level(), loop);
      if (a->format == "text") {
        out << perm.cycle_notation() << '\n';
      } else {
        Json j = to_json(perm);
        j["around"] = a->around;
        print_json(out, j);
      }
      return kExitOk;
    };
  });
}

void add_reachability(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("reachability", "Orbits of the sheets under all single-branch-point loops");
  auto s = std::make_shared<SystemArgs>();
  add_frequencies(cmd, *s);
  add_level(cmd, *s);
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      print_json(out, to_json(reachability(s->freqs(), s->level())));
      return kExitOk;
    };
  });
}

void add_oracle(CLI::App& app, std::ostream& out, Action& action) {
  auto* cmd = app.add_subcommand("oracle", "Compare closed forms with a truncated-basis diagonalization");
  struct Args {
    SystemArgs sys;
    std::vector<double> g;
    int nmax = 4;
    int basis = 40;
    std::vector<int> sweep;
    std::string out_path;
  };
  auto a = std::make_shared<Args>();
  add_frequencies(cmd, a->sys);
  cmd->add_option("--g", a->g, "real couplings with |g| < 2 nu omega")->required()->expected(1, -1);
  cmd->add_option("--nmax", a->nmax, "highest n whose levels are matched")->capture_default_str();
  cmd->add_option("--basis", a->basis, "basis size N per oscillator")->capture_default_str();
  cmd->add_option("--sweep", a->sweep, "coarser basis sizes for the convergence table (default N/2)")->expected(1, -1);
  cmd->add_option("--out", a->out_path, "write the report here instead of stdout");
  cmd->callback([=, &out, &action] {
    action = [=, &out] {
      ValidationOptions options;
      options.coarser_sizes = a->sweep;
      const auto report = validate_closed_forms(a->sys.freqs(), a->g, a->nmax, a->basis, options);
      Sink sink(a->out_path, out);
      print_json(*sink, to_json(report));
      return report.truncation_insufficient ? kExitNumerical : kExitOk;
    };
  });
}

void add_single_osc(CLI::App& app, std::ostream& out, Action& action) {
  auto* group = app.add_subcommand("single-osc", "Single oscillator and its gapped variant");
  group->require_subcommand(1);

  {
    auto* cmd = group->add_subcommand("scan", "Energies on both sheets along a frequency axis");
    struct Args {
      std::string axis = "real";
      std::string model = "ho-mod";
      double delta = 0.5;
      double extent = kUnset;
      int samples = 401;
      std::string format = "json";
      std::string out_path;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--axis", a->axis, "real | imag")->check(CLI::IsMember({"real", "imag"}))->capture_default_str();
    cmd->add_option("--model", a->model, "ho | ho-mod")->check(CLI::IsMember({"ho", "ho-mod"}))->capture_default_str();
    cmd->add_option("--delta", a->delta, "gap parameter")->capture_default_str();
    cmd->add_option("--extent", a->extent, "scan covers [-extent, extent] (default max(1.5, 3 delta))");
    cmd->add_option("--samples", a->samples, "number of samples")->capture_default_str();
    cmd->add_option("--format", a->format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd->add_option("--out", a->out_path, "write here instead of stdout");
    cmd->callback([=, &out, &action] {
      action = [=, &out] {
        const double extent = std::isnan(a->extent) ? std::max(1.5, 3.0 * a->delta) : a->extent;
        const auto model = parse_model(a->model);
        const auto axis = parse_axis(a->axis);
        const auto scan = axis_scan(model, axis, a->delta, extent, a->samples);
        Sink sink(a->out_path, out);
        if (a->format == "csv") {
          char buf[256];
          *sink << "t,re_nu,im_nu,re_E_plus,im_E_plus,re_E_minus,im_E_minus\n";
          for (const auto& s : scan) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.nu.real(),
                          s.nu.imag(), s.energy[0].real(), s.energy[0].imag(), s.energy[1].real(), s.energy[1].imag());
            *sink << buf;
          }
        } else {
          print_json(*sink, to_json(scan, model, axis, a->delta));
        }
        return kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("matrix", "Eigensystem of the two-level model");
    auto nu = std::make_shared<std::array<double, 2>>();
    auto delta = std::make_shared<double>(0.5);
    cmd->add_option("--nu-re", (*nu)[0], "real part of nu");
    cmd->add_option("--nu-im", (*nu)[1], "imaginary part of nu");
    cmd->add_option("--delta", *delta, "gap parameter")->capture_default_str();
    cmd->callback([=, &out, &action] {
      action = [=, &out] {
        const Complex z{(*nu)[0], (*nu)[1]};
        const auto sys = matrix_model(z, *delta);
        Json vecs = Json::array();
        for (const auto& v : sys.eigenvectors) vecs.push_back({complex_to_json(v[0]), complex_to_json(v[1])});
        print_json(out, {{"schema_version", kSchemaVersion},
                         {"kind", "matrix_model"},
                         {"nu", complex_to_json(z)},
                         {"delta", *delta},
                         {"eigenvalues", {complex_to_json(sys.eigenvalues[0]), complex_to_json(sys.eigenvalues[1])}},
                         {"eigenvectors", std::move(vecs)},
                         {"coalescence_measure", sys.coalescence_measure},
                         {"determinant", complex_to_json(eigenvector_determinant(sys))},
                         {"at_exceptional_point", sys.at_exceptional_point}});
        return sys.at_exceptional_point ? kExitNumerical : kExitOk;
      };
    });
  }
  {
    auto* cmd = group->add_subcommand("chirality", "Chirality tags of the branch points at +-i delta");
    auto delta = std::make_shared<double>(0.5);
    cmd->add_option("--delta", *delta, "gap parameter")->capture_default_str();
    cmd->callback([=, &out, &action] {
      action = [=, &out] {
        print_json(out, {{"schema_version", kSchemaVersion},
                         {"kind", "chirality"},
                         {"delta", *delta},
                         {"plus_i_delta", std::string(to_string(chirality(Sign::plus, *delta)))},
                         {"minus_i_delta", std::string(to_string(chirality(Sign::minus, *delta)))},
                         {"bubble_boundary", *delta > 0.0 ? Json(bubble_boundary(*delta)) : Json(nullptr)}});
        return kExitOk;
      };
    });
  }
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riemann-surface toolkit for two coupled harmonic oscillators", "cho"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));
  app.footer("Any command accepts --config file.json; keys are flag names and explicit flags win.");

  Action action;
  add_branch_points(app, out, action);
  add_energy(app, out, action);
  add_surface(app, out, action);
  add_continue(app, out, action);
  add_monodromy(app, out, action);
  add_reachability(app, out, action);
  add_oracle(app, out, action);
  add_single_osc(app, out, action);

  auto fail = [&err](ErrorCode code, const std::string& message) {
    err << error_json(code, message).dump() << '\n';
    return is_validation_error(code) ? kExitValidation : kExitNumerical;
  };

  try {
    std::vector<std::string> args = merge_config_args(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCode::invalid_input, e.what());
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  }

  try {
    return action ? action() : kExitOk;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const Json::exception& e) {
    return fail(ErrorCode::invalid_input, e.what());
  }
}

}  // namespace cho::cli
