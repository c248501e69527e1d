#include "fraczeta/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "fraczeta/builders.hpp"
#include "fraczeta/errors.hpp"
#include "fraczeta/gridcsv.hpp"
#include "fraczeta/scene.hpp"

namespace fraczeta::cli {

namespace {

struct EvalOptions {
  std::string method;  // "", direct, tube, exact, closed, grid, mc
  std::uint64_t samples = 200000;
  int panels = 0;  // 0: per-kind default
  std::uint64_t seed = 0;
  bool seed_set = false;
};

zeta::ZetaValue evaluate_point(const Scene& scene, Complex s,
                               const EvalOptions& opt,
                               nc::Evaluator* nc_eval) {
  if (scene.kind == Scene::Kind::noncommutative) {
    std::string method = opt.method.empty() ? "grid" : opt.method;
    if (method == "mc")
      return nc_eval->zeta(s, nc::NcMc{opt.samples});
    if (method == "grid" || method == "direct")
      return nc_eval->zeta(s, nc::NcGrid{opt.panels > 0 ? opt.panels : 16, 2});
    if (method == "tube") {
      nc::TubeRouteParams params;
      params.scheme = nc::NcGrid{opt.panels > 0 ? opt.panels : 12, 2};
      double delta = nc_eval->max_support_distance(params.scheme) * 1.02;
      return nc_eval->zeta_via_tube(s, delta, params);
    }
    throw InvalidInputError("unknown method '" + method + "' for nc scenes");
  }

  std::string method = opt.method;
  if (method.empty()) method = scene.fstring ? "exact" : "direct";
  if (method == "exact" || method == "closed") {
    if (!scene.fstring)
      throw InvalidInputError("method needs an exact string in the scene");
    const auto& str = *scene.fstring;
    double mass = scene.weight ? geometry::measure_mass(*scene.weight)
                               : str.natural_mass();
    if (method == "exact") {
      Complex v = strings::string_zeta_exact(str, s, mass);
      return {v, 0.0, zeta::Method::exact_string, s, str.dimension()};
    }
    double c = mass / str.natural_mass();
    Complex v = strings::string_series_closed(str, s) +
                2.0 * real_pow(str.collar, s) / s;
    return {c * v, 0.0, zeta::Method::closed_form, s, str.dimension()};
  }
  if (!scene.weight)
    throw InvalidInputError("scene has no weight measure");
  if (method == "direct" || method == "mc") {
    if (!scene.ifs)
      throw InvalidInputError("direct method needs an IFS distance oracle");
    auto dist = geometry::make_distance_oracle(*scene.ifs);
    geometry::Scheme scheme;
    if (method == "mc") {
      scheme = geometry::McScheme{opt.samples,
                                  opt.seed_set ? opt.seed : scene.seed};
    } else {
      scheme = geometry::GridScheme{opt.panels > 0 ? opt.panels : 2048, 4};
    }
    return zeta::zeta_direct(dist, *scene.weight, s, scene.ambient_dim(),
                             scene.abscissa_hint, scheme);
  }
  if (method == "tube") {
    auto tube = scene.tube_function();
    double mass = geometry::measure_mass(*scene.weight);
    double delta = scene.fstring ? scene.fstring->cover_radius() : scene.R;
    return zeta::zeta_via_tube(tube, mass, s, scene.ambient_dim(),
                               scene.abscissa_hint, delta);
  }
  throw InvalidInputError("unknown method '" + method + "'");
}

int cmd_eval(const std::string& scene_path, const std::string& s_text,
             const EvalOptions& opt, std::ostream& out) {
  Scene scene = load_scene(scene_path);
  if (opt.seed_set) {
    scene.seed = opt.seed;
    if (scene.ncscene) scene.ncscene->seed = opt.seed;
  }
  Complex s = parse_complex(s_text);
  std::optional<nc::Evaluator> nc_eval;
  if (scene.ncscene) nc_eval.emplace(*scene.ncscene);
  zeta::ZetaValue z =
      evaluate_point(scene, s, opt, nc_eval ? &*nc_eval : nullptr);
  out << "value_re= " << format_double(z.value.real()) << "\n"
      << "value_im= " << format_double(z.value.imag()) << "\n"
      << "abs= " << format_double(std::abs(z.value)) << "\n"
      << "err= " << format_double(z.err) << "\n"
      << "method= " << zeta::method_name(z.method) << "\n"
      << "abscissa= " << format_double(z.abscissa_hint) << "\n"
      << "R= " << format_double(scene.R) << "\n";
  if (z.method == zeta::Method::exact_string && scene.fstring) {
    // the window contribution away from the gaps, reported separately
    if (std::holds_alternative<strings::GeometricFamily>(
            scene.fstring->family)) {
      Complex series = strings::string_series_closed(*scene.fstring, s);
      Complex boundary = 2.0 * real_pow(scene.fstring->collar, s) / s;
      out << "series_re= " << format_double(series.real()) << "\n"
          << "series_im= " << format_double(series.imag()) << "\n"
          << "boundary_re= " << format_double(boundary.real()) << "\n"
          << "boundary_im= " << format_double(boundary.imag()) << "\n";
    }
  }
  return kExitOk;
}

int cmd_grid(const std::string& scene_path, const GridSpec& spec,
             const std::string& out_path, const EvalOptions& opt,
             std::ostream& err) {
  Scene scene = load_scene(scene_path);
  if (opt.seed_set) {
    scene.seed = opt.seed;
    if (scene.ncscene) scene.ncscene->seed = opt.seed;
  }
  std::optional<nc::Evaluator> nc_eval;
  if (scene.ncscene) nc_eval.emplace(*scene.ncscene);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw InvalidInputError("cannot open output file " + out_path);
  std::size_t failures = write_grid_csv(file, spec, [&](Complex s) {
    return evaluate_point(scene, s, opt, nc_eval ? &*nc_eval : nullptr);
  });
  std::size_t total = std::size_t(spec.re_count) * std::size_t(spec.im_count);
  if (failures * 100 > total) {
    err << "grid: " << failures << " of " << total << " points failed\n";
    return kExitPartialGrid;
  }
  return kExitOk;
}

int cmd_tube(const std::string& scene_path, double tmin, double tmax,
             int points, const std::string& out_path) {
  Scene scene = load_scene(scene_path);
  auto tube = scene.tube_function();
  auto grid = minkowski::log_grid(tmin, tmax, points,
                                  scene.declared_log_period());
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw InvalidInputError("cannot open output file " + out_path);
  file << "t,volume\n";
  for (double t : grid)
    file << format_double(t) << ',' << format_double(tube(t)) << '\n';
  return kExitOk;
}

int cmd_dim(const std::string& scene_path, double tmin, double tmax,
            int points, std::ostream& out) {
  Scene scene = load_scene(scene_path);
  auto tube = scene.tube_function();
  auto grid = minkowski::log_grid(tmin, tmax, points,
                                  scene.declared_log_period());
  auto samples = minkowski::sample_tube(tube, grid, scene.ambient_dim(),
                                        scene.declared_log_period());
  auto est = minkowski::estimate_dims(samples);
  out << "lower_dim= " << format_double(est.lower_dim) << "\n"
      << "upper_dim= " << format_double(est.upper_dim) << "\n"
      << "lower_content= " << format_double(est.lower_content) << "\n"
      << "upper_content= " << format_double(est.upper_content) << "\n"
      << "window_lo= " << format_double(est.window.first) << "\n"
      << "window_hi= " << format_double(est.window.second) << "\n"
      << "strip_violation= " << (est.strip_violation ? "true" : "false")
      << "\n";
  return kExitOk;
}

int cmd_poles(const std::string& path, int count, std::ostream& out) {
  complexdims::ScalingSystem sys = load_scaling_system(path);
  auto lattice = complexdims::lattice_poles(sys, count);
  out << "D= " << format_double(lattice.D) << "\n"
      << "period= " << format_double(lattice.period) << "\n"
      << "lattice= " << (lattice.lattice ? "true" : "false") << "\n";
  for (std::size_t i = 0; i < lattice.poles.size(); ++i)
    out << "pole[" << i << "]= " << format_double(lattice.poles[i].real())
        << (lattice.poles[i].imag() >= 0 ? "+" : "")
        << format_double(lattice.poles[i].imag()) << "i\n";
  out << "provenance= " << (sys.description.empty() ? "-" : sys.description)
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"fractal zeta functions and their matrix-state analogues"};
  app.require_subcommand(1);

  EvalOptions opt;
  std::string scene_path, s_text, out_path, suite = "all", poles_path;
  GridSpec spec;
  double tmin = 1e-6, tmax = 1e-1;
  int points = 64, pole_count = 3;

  auto add_eval_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", opt.method,
                    "direct|tube|exact|closed (commutative), grid|mc|tube (nc)");
    cmd->add_option("--samples", opt.samples, "Monte Carlo sample count");
    cmd->add_option("--panels", opt.panels, "quadrature panels per axis");
    cmd->add_option("--seed", opt.seed, "override the scene seed")
        ->each([&](const std::string&) { opt.seed_set = true; });
  };

  auto* eval = app.add_subcommand("eval", "evaluate the zeta value at one s");
  eval->add_option("scene", scene_path)->required();
  eval->add_option("-s,--s", s_text, "complex point, e.g. 2+0.5i")->required();
  add_eval_flags(eval);

  auto* grid = app.add_subcommand("grid", "CSV of zeta values over a grid");
  grid->add_option("scene", scene_path)->required();
  grid->add_option("--re", spec.re_start, "Re start")->required();
  grid->add_option("--re-stop", spec.re_stop, "Re stop");
  grid->add_option("--re-count", spec.re_count, "Re count");
  grid->add_option("--im", spec.im_start, "Im start")->required();
  grid->add_option("--im-stop", spec.im_stop, "Im stop");
  grid->add_option("--im-count", spec.im_count, "Im count");
  grid->add_option("--jobs", spec.jobs, "worker threads (FRACZETA_JOBS)");
  grid->add_option("--out", out_path, "output CSV path")->required();
  add_eval_flags(grid);

  auto* tube = app.add_subcommand("tube", "CSV of tube volumes over a log grid");
  tube->add_option("scene", scene_path)->required();
  tube->add_option("--tmin", tmin);
  tube->add_option("--tmax", tmax);
  tube->add_option("--points", points);
  tube->add_option("--out", out_path)->required();

  auto* dim = app.add_subcommand("dim", "Minkowski dimension estimate");
  dim->add_option("scene", scene_path)->required();
  dim->add_option("--tmin", tmin);
  dim->add_option("--tmax", tmax);
  dim->add_option("--points", points);

  auto* poles = app.add_subcommand("poles", "complex-dimension lattice");
  poles->add_option("system", poles_path,
                    "scaling system file or scene with a scaling block")
      ->required();
  poles->add_option("--count", pole_count, "poles above and below the axis");

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suite,
                     "all|tube|transform|tensor|reduction|product");
  std::uint64_t verify_seed = 7;
  verify->add_option("--seed", verify_seed);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (eval->parsed()) return cmd_eval(scene_path, s_text, opt, out);
    if (grid->parsed()) {
      if (spec.re_count == 1) spec.re_stop = spec.re_start;
      if (spec.im_count == 1) spec.im_stop = spec.im_start;
      if (spec.re_count < 1 || spec.im_count < 1 ||
          spec.re_stop < spec.re_start || spec.im_stop < spec.im_start)
        throw InvalidInputError("grid: counts must be >= 1, start <= stop");
      return cmd_grid(scene_path, spec, out_path, opt, err);
    }
    if (tube->parsed()) return cmd_tube(scene_path, tmin, tmax, points, out_path);
    if (dim->parsed()) return cmd_dim(scene_path, tmin, tmax, points, out);
    if (poles->parsed()) return cmd_poles(poles_path, pole_count, out);
    if (verify->parsed())
      return run_verify_suite(suite, verify_seed, out) == 0 ? kExitOk
                                                            : kExitVerifyFail;
  } catch (const DivergentAbscissaError& e) {
    err << "domain error: " << e.what() << " (abscissa "
        << format_double(e.abscissa) << ")\n";
    return kExitDomain;
  } catch (const NearPoleError& e) {
    err << "domain error: " << e.what() << " (pole "
        << format_double(e.pole.real()) << "," << format_double(e.pole.imag())
        << ")\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace fraczeta::cli
