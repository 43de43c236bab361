#include "cli/run.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "cli/plot.hpp"
#include "cpflow/analysis.hpp"
#include "cpflow/io.hpp"
#include "cpflow/variational.hpp"

namespace cpflow::cli {

namespace fs = std::filesystem;

Command parse_command(const std::string& name) {
  if (name == "gen") return Command::gen;
  if (name == "check") return Command::check;
  if (name == "flow") return Command::flow;
  if (name == "newton") return Command::newton;
  if (name == "exhaust") return Command::exhaust;
  if (name == "validate") return Command::validate;
  throw Error("unknown command '" + name + "' (expected gen, check, flow, newton, exhaust or validate)");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::gen: return "gen";
    case Command::check: return "check";
    case Command::flow: return "flow";
    case Command::newton: return "newton";
    case Command::exhaust: return "exhaust";
    case Command::validate: return "validate";
  }
  return "unknown";
}

std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunSpec spec;
  std::string command;
  std::string input, target_file, r0_file, out_dir;

  CLI::App app{"Circle-pattern curvature flow solver (spherical background geometry)", "cpflow"};
  app.add_option("command", command, "gen | check | flow | newton | exhaust | validate")->required();
  app.add_option("--input", input, "complex JSON file");
  app.add_option("--kind", spec.kind, "lattice kind: triangular-disk | square-grid");
  app.add_option("--n", spec.n, "ball radius (gen, check without --input) or largest ball (exhaust)");
  app.add_option("--n-min", spec.n_min, "exhaust: smallest ball radius (default window radius + 1)");
  app.add_option("--window-radius", spec.window_radius, "exhaust: comparison window radius");
  app.add_option("--theta-const", spec.theta_const, "intersection angle for generated lattices (radians)");
  app.add_option("--target-const", spec.target_const, "constant target curvature");
  app.add_option("--target-file", target_file, "per-vertex target curvature JSON {id: value}");
  app.add_option("--r0-const", spec.r0_const, "constant initial radius in (0, pi/2)");
  app.add_option("--r0-file", r0_file, "per-vertex initial radius JSON {id: value}");
  app.add_option("--dt", spec.dt, "time step (upper bound in adaptive mode)");
  app.add_option("--t-end", spec.t_end, "flow horizon; exhaust: tau (default 5)");
  app.add_option("--tol", spec.tol, "residual infinity-norm tolerance");
  app.add_option("--integrator", spec.integrator, "euler | rk4 | adaptive");
  app.add_option("--max-iter", spec.max_iter, "newton: iteration limit");
  app.add_flag("--no-freeze", [&](std::int64_t) { spec.freeze_boundary = false; },
               "flow: integrate boundary-marked vertices too");
  app.add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(std::string("command line: ") + e.what());
  }

  spec.command = parse_command(command);
  if (!input.empty()) spec.input = input;
  if (!target_file.empty()) spec.target_file = target_file;
  if (!r0_file.empty()) spec.r0_file = r0_file;
  if (!out_dir.empty()) spec.out_dir = out_dir;
  if (spec.target_const && spec.target_file) throw Error("--target-const and --target-file are exclusive");
  if (spec.r0_const && spec.r0_file) throw Error("--r0-const and --r0-file are exclusive");
  if (spec.integrator) parse_integrator(*spec.integrator);
  return spec;
}

namespace {

ComplexTopology load_complex(const RunSpec& spec) {
  if (spec.input) return io::read_complex(*spec.input);
  if (spec.command == Command::check || spec.command == Command::validate)
    return lattice_generator(spec.kind, spec.theta_const).extract(spec.n).complex;
  throw Error("--input is required for '" + to_string(spec.command) + "'");
}

TargetCurvature load_targets(const RunSpec& spec, const ComplexTopology& c) {
  if (spec.target_const) return TargetCurvature::constant(c.vertex_count(), *spec.target_const);
  if (spec.target_file) return TargetCurvature(io::read_vertex_values(*spec.target_file, c, "target file"));
  throw Error("one of --target-const or --target-file is required");
}

std::optional<PatternState> load_initial(const RunSpec& spec, const ComplexTopology& c) {
  if (spec.r0_const) {
    const double r = *spec.r0_const;
    if (!(r > 0.0 && r < std::numbers::pi / 2)) throw Error("--r0-const must lie in (0, pi/2)");
    return PatternState::uniform_radius(c.vertex_count(), r);
  }
  if (spec.r0_file) {
    const std::vector<double> radii = io::read_vertex_values(*spec.r0_file, c, "r0 file");
    for (std::size_t v = 0; v < radii.size(); ++v)
      if (!(radii[v] > 0.0 && radii[v] < std::numbers::pi / 2))
        throw Error("r0 file[\"" + c.id(v).name + "\"]: radius must lie in (0, pi/2)");
    return PatternState::from_radii(radii);
  }
  return std::nullopt;
}

PatternState require_initial(const RunSpec& spec, const ComplexTopology& c) {
  auto s = load_initial(spec, c);
  if (!s) throw Error("one of --r0-const or --r0-file is required");
  return *s;
}

FlowConfig flow_config(const RunSpec& spec) {
  FlowConfig cfg;
  if (spec.dt) cfg.dt = *spec.dt;
  if (spec.t_end) cfg.t_end = *spec.t_end;
  if (spec.tol) cfg.residual_tol = *spec.tol;
  if (spec.integrator) cfg.integrator = parse_integrator(*spec.integrator);
  cfg.validate();
  return cfg;
}

void write_trace(const fs::path& dir, const FlowTrace& trace, const ComplexTopology& c, const TargetCurvature& t) {
  std::ofstream csv(dir / "trace.csv");
  if (!csv) throw Error("cannot write '" + (dir / "trace.csv").string() + "'");
  io::write_trace_csv(csv, trace, c, t);
}

int run_gen(const RunSpec& spec, std::ostream& log) {
  const ExtractedBall ball = lattice_generator(spec.kind, spec.theta_const).extract(spec.n);
  io::write_complex(spec.out_dir / "complex.json", ball.complex);
  log << "gen: " << spec.kind << " ball n=" << spec.n << ": " << ball.complex.vertex_count() << " vertices, "
      << ball.complex.edge_count() << " edges\n";
  return kExitOk;
}

int run_check(const RunSpec& spec, std::ostream& log) {
  const ComplexTopology c = load_complex(spec);
  const TargetCurvature t = load_targets(spec, c);
  const auto s0 = load_initial(spec, c);
  const CheckMode mode = c.vertex_count() <= kBruteForceMaxVertices ? CheckMode::brute : CheckMode::sampled;
  const ConditionReport rep = check_conditions(c, t, s0 ? &*s0 : nullptr, mode);
  io::write_json(spec.out_dir / "conditions.json", io::to_json(rep, c));
  log << "check (" << to_string(mode) << "): S1 " << (rep.s1_ok ? "ok" : "FAIL") << ", S2 "
      << (rep.s2_ok ? "ok" : "FAIL");
  if (rep.s3_checked) log << ", S3 " << (rep.s3_ok ? "ok" : "FAIL");
  if (!rep.s2_ok && rep.s2_subset) {
    log << " (U = {";
    for (std::size_t k = 0; k < rep.s2_subset->vertices.size(); ++k)
      log << (k ? "," : "") << c.id(rep.s2_subset->vertices[k]).name;
    log << "}, slack " << rep.s2_subset->slack << ")";
  }
  log << '\n';
  return rep.all_ok() ? kExitOk : kExitNotConverged;
}

int run_flow(const RunSpec& spec, std::ostream& log) {
  const ComplexTopology c = load_complex(spec);
  const TargetCurvature t = load_targets(spec, c);
  const PatternState init = require_initial(spec, c);
  const FlowConfig cfg = flow_config(spec);
  const std::vector<std::size_t> frozen = spec.freeze_boundary ? c.boundary_vertices() : std::vector<std::size_t>{};

  const FlowResult res = integrate_finite(c, t, init, frozen, cfg);
  const TraceDiagnostics diag = verify_trace(res.trace, t, c, 10.0 * cfg.residual_tol);

  io::json report = io::to_json(res.report);
  report["frozen_vertices"] = frozen.size();
  report["diagnostics"] = io::to_json(diag, c);
  io::write_json(spec.out_dir / "report.json", report);
  write_trace(spec.out_dir, res.trace, c, t);
  write_plot(spec.out_dir / "residual.svg", res.trace, "flow residual");
  log << "flow: " << to_string(res.report.status) << " after " << res.report.steps << " steps, t = "
      << res.report.final_time << ", residual " << res.report.final_residual << '\n';
  return res.report.converged() ? kExitOk : kExitNotConverged;
}

int run_newton(const RunSpec& spec, std::ostream& log) {
  const ComplexTopology c = load_complex(spec);
  const TargetCurvature t = load_targets(spec, c);
  const PatternState init = require_initial(spec, c);
  NewtonConfig cfg;
  if (spec.tol) cfg.tol = *spec.tol;
  if (spec.max_iter) cfg.max_iter = *spec.max_iter;

  const NewtonResult res = newton_solve(c, t, init, cfg);
  io::write_json(spec.out_dir / "report.json", io::to_json(res.report));
  write_trace(spec.out_dir, res.trace, c, t);
  write_plot(spec.out_dir / "residual.svg", res.trace, "newton residual");
  log << "newton: " << to_string(res.report.status) << " after " << res.report.steps << " iterations, residual "
      << res.report.final_residual << '\n';
  return res.report.converged() ? kExitOk : kExitNotConverged;
}

int run_exhaust(const RunSpec& spec, std::ostream& log) {
  if (spec.target_file || spec.r0_file)
    throw Error("exhaust takes constant rules only (--target-const, --r0-const)");
  if (!spec.target_const) throw Error("--target-const is required for exhaust");
  const double r0 = spec.r0_const.value_or(std::numbers::pi / 4);
  if (!(r0 > 0.0 && r0 < std::numbers::pi / 2)) throw Error("--r0-const must lie in (0, pi/2)");
  const double u0 = u_from_radius(r0);
  const double t_hat = *spec.target_const;

  ExhaustionSettings settings;
  settings.tau = spec.t_end.value_or(5.0);
  settings.window_radius = spec.window_radius;
  const int n_min = spec.n_min.value_or(spec.window_radius + 1);
  if (spec.n < n_min) throw Error("--n must be >= the smallest ball radius " + std::to_string(n_min));
  for (int n = n_min; n <= spec.n; ++n) settings.levels.push_back(n);
  settings.config.integrator = spec.integrator ? parse_integrator(*spec.integrator) : Integrator::rk4;
  settings.config.dt = spec.dt.value_or(settings.tau / 512.0);
  if (spec.tol) settings.config.residual_tol = *spec.tol;

  const auto gen = lattice_generator(spec.kind, spec.theta_const);
  const ExhaustionReport rep = solve_exhaustion(
      gen, [t_hat](const VertexId&) { return t_hat; }, [u0](const VertexId&) { return u0; }, settings);

  bool contracting = true;
  for (std::size_t k = 1; k < rep.comparisons.size(); ++k)
    if (rep.comparisons[k].sup_difference > rep.comparisons[k - 1].sup_difference) contracting = false;

  io::json j = io::to_json(rep);
  j["contracting"] = contracting;
  io::write_json(spec.out_dir / "exhaustion.json", j);
  const LevelRun& finest = rep.levels.back();
  TargetCurvature finest_targets = TargetCurvature::constant(finest.ball.complex.vertex_count(), t_hat);
  write_trace(spec.out_dir, finest.result.trace, finest.ball.complex, finest_targets);
  write_plot(spec.out_dir / "residual.svg", finest.result.trace, "exhaustion n=" + std::to_string(finest.n));
  for (const auto& cmp : rep.comparisons)
    log << "exhaust: sup |u[" << cmp.n << "] - u[" << cmp.n_next << "]| on window = " << cmp.sup_difference << '\n';
  return contracting ? kExitOk : kExitNotConverged;
}

int run_validate(const RunSpec& spec, std::ostream& log) {
  const ComplexTopology c = load_complex(spec);
  const PatternState state = require_initial(spec, c);
  const double tol = spec.tol.value_or(1e-6);
  const FdValidation v = fd_validate(c, state, 1e-6, tol);
  io::write_json(spec.out_dir / "validation.json", io::to_json(v, c));
  log << "validate: max |J - J_fd| = " << v.max_deviation << (v.pass ? " (pass)" : " (FAIL)") << '\n';
  return v.pass ? kExitOk : kExitNotConverged;
}

}  // namespace

int run(const RunSpec& spec, std::ostream& log) {
  try {
    fs::create_directories(spec.out_dir);
    switch (spec.command) {
      case Command::gen: return run_gen(spec, log);
      case Command::check: return run_check(spec, log);
      case Command::flow: return run_flow(spec, log);
      case Command::newton: return run_newton(spec, log);
      case Command::exhaust: return run_exhaust(spec, log);
      case Command::validate: return run_validate(spec, log);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cpflow::cli
