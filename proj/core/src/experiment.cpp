#include "fracstep/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "fracstep/io.hpp"
#include "fracstep/parallel.hpp"

namespace fracstep {
namespace {

using io::format_double;

// A run whose final max |U| exceeds this multiple of the initial data has
// clearly left the bounded regime; the canonical problems obey a maximum
// principle, so stable runs never come close.
constexpr double kSolutionGrowthLimit = 10.0;

std::string run_description(const ExperimentSpec& spec, const ResolvedRun& run) {
  std::ostringstream out;
  out << "name=" << spec.name << " gamma=" << format_double(spec.gamma) << " kgamma=" << format_double(spec.k_gamma)
      << " lambda=" << format_double(spec.lambda) << " family=" << to_string(spec.family)
      << " S=" << format_double(spec.s.value_or(run.s)) << " dx=" << format_double(run.scheme.dx)
      << " dt=" << format_double(run.scheme.dt) << " steps=" << run.scheme.steps << " ic=" << spec.ic;
  if (run.scheme.startup_explicit_steps > 0) out << " startup_explicit_steps=" << run.scheme.startup_explicit_steps;
  return out.str();
}

double max_abs(std::span<const double> row) {
  double m = 0.0;
  for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

// Applies the t_end override to specs that are defined by t_end; specs with a
// fixed step count (the instability figures) keep their steps.
ExperimentSpec with_override(ExperimentSpec spec, const RunOptions& options) {
  if (!options.t_end_override || spec.steps) return spec;
  const double t_end = *options.t_end_override;
  spec.t_end = t_end;
  std::erase_if(spec.output_times, [t_end](double t) { return t > t_end; });
  return spec;
}

ExperimentResult run_solve(const ExperimentSpec& raw, const RunOptions& options) {
  const ExperimentSpec spec = with_override(raw, options);
  const ResolvedRun run = resolve(spec);
  const std::string description = run_description(spec, run);
  ExperimentResult result;

  WaStepper stepper(run.problem, run.scheme);
  try {
    while (stepper.current_level() < run.scheme.steps) stepper.step();
  } catch (const SolverOverflow& e) {
    result.status = RunStatus::unstable;
    result.overflow_level = e.level();
  }
  const SolutionHistory& history = stepper.history();

  std::ostringstream summary;
  summary << spec.name << ": " << description << '\n';
  if (result.overflow_level) summary << "UNSTABLE at step " << *result.overflow_level << '\n';

  std::vector<double> xs(static_cast<std::size_t>(history.nodes()));
  for (int j = 0; j < history.nodes(); ++j) xs[static_cast<std::size_t>(j)] = j * history.dx();

  for (int level : run.output_levels) {
    if (level > history.top_level()) continue;
    const double t = level * history.dt();
    const auto row = history.row(level);
    std::optional<std::vector<double>> exact;
    if (spec.error_vs_exact) {
      exact = exact_profile(*run.ic.sine_series, spec.gamma, spec.k_gamma, xs, t);
      const auto err = profile_error(history, *run.ic.sine_series, spec.gamma, spec.k_gamma, level);
      result.errors.push_back(err);
      summary << "level " << level << " t=" << format_double(t) << " max_error=" << format_double(err.max_error)
              << " l2_error=" << format_double(err.l2_error) << '\n';
    }
    if (spec.profile_csv) {
      std::vector<std::string> columns{"x", "u_numeric"};
      if (exact) {
        columns.emplace_back("u_exact");
        columns.emplace_back("abs_error");
      }
      io::CsvBuilder csv(columns, description + " level=" + std::to_string(level) + " t=" + format_double(t));
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (exact) {
          const double e = (*exact)[j];
          csv.add_row(std::vector<double>{xs[j], row[j], e, std::abs(row[j] - e)});
        } else {
          csv.add_row(std::vector<double>{xs[j], row[j]});
        }
      }
      const auto path = options.out_dir / (spec.name + "_step" + std::to_string(level) + ".csv");
      io::write_file_atomic(path, csv.str());
      result.files.push_back(path);
    }
  }

  if (spec.history_csv || options.history_path) {
    std::vector<std::string> columns{"level", "t"};
    for (int j = 0; j < history.nodes(); ++j) columns.push_back("u" + std::to_string(j));
    io::CsvBuilder csv(columns, description);
    for (int m = 0; m <= history.top_level(); ++m) {
      std::vector<double> cells{static_cast<double>(m), m * history.dt()};
      const auto row = history.row(m);
      cells.insert(cells.end(), row.begin(), row.end());
      csv.add_row(cells);
    }
    const auto path = options.history_path ? *options.history_path : options.out_dir / (spec.name + "_history.csv");
    io::write_file_atomic(path, csv.str());
    result.files.push_back(path);
  }

  const double initial = std::max({max_abs(history.row(0)), std::abs(spec.left_value), std::abs(spec.right_value)});
  const double final_max = max_abs(history.row(history.top_level()));
  if (!result.overflow_level && final_max > kSolutionGrowthLimit * initial && initial > 0.0) {
    result.status = RunStatus::unstable;
    summary << "UNSTABLE: max |U| grew from " << format_double(initial) << " to " << format_double(final_max)
            << " by step " << history.top_level() << '\n';
  }

  if (spec.stability_report) {
    ProbeOptions probe;
    probe.nodes = spec.probe_nodes;
    probe.steps = spec.probe_steps;
    const auto report = probe_stability(spec.family, spec.gamma, spec.lambda, run.s, probe);
    summary << "stability S=" << format_double(report.s_value) << " S_cross="
            << (report.s_cross ? format_double(*report.s_cross) : std::string("none"))
            << " theoretical=" << to_string(report.theoretical) << " empirical=" << to_string(report.empirical)
            << " growth_factor=" << format_double(report.growth_factor) << '\n';
    if (report.empirical == Verdict::unstable) result.status = RunStatus::unstable;
    result.stability = report;
  }
  summary << "status " << (result.status == RunStatus::completed ? "completed" : "unstable") << '\n';

  result.summary = summary.str();
  const auto summary_path = options.out_dir / (spec.name + "_summary.txt");
  io::write_file_atomic(summary_path, result.summary);
  result.files.push_back(summary_path);
  return result;
}

ExperimentResult run_phase(const ExperimentSpec& spec, const RunOptions& options) {
  std::vector<double> gammas;
  std::vector<double> lambdas;
  try {
    gammas = io::parse_grid(spec.gamma_grid);
    lambdas = io::parse_grid(spec.lambda_grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (spec.families.empty()) throw ConfigError("families must not be empty");
  ExperimentResult result;
  std::ostringstream summary;
  const std::string grid_text = "gamma_grid=" + spec.gamma_grid + " lambda_grid=" + spec.lambda_grid;

  io::CsvBuilder phase({"family", "gamma", "lambda", "inv_s_cross"},
                       "name=" + spec.name + " inverse critical mesh ratio " + grid_text);
  for (auto family : spec.families) {
    for (const auto& p : phase_diagram(family, gammas, lambdas)) {
      phase.add_row(std::vector<std::string>{std::string(to_string(family)), format_double(p.gamma),
                                             format_double(p.lambda), format_double(p.inv_s_cross)});
    }
  }
  auto path = options.out_dir / (spec.name + "_phase.csv");
  io::write_file_atomic(path, phase.str());
  result.files.push_back(path);
  summary << spec.name << ": phase sweep over " << spec.families.size() << " families, " << grid_text << '\n';

  if (!spec.markers.empty()) {
    const FormulaFamily family = spec.families.front();
    io::CsvBuilder markers({"family", "gamma", "lambda", "s", "inv_s", "inv_s_cross", "verdict"},
                           "name=" + spec.name + " marked parameter points");
    for (const auto& m : spec.markers) {
      markers.add_row(std::vector<std::string>{
          std::string(to_string(family)), format_double(m.gamma), format_double(m.lambda), format_double(m.s),
          format_double(1.0 / m.s), format_double(inverse_critical_ratio(family, m.gamma, m.lambda)),
          to_string(theoretical_verdict(family, m.gamma, m.lambda, m.s))});
    }
    path = options.out_dir / (spec.name + "_markers.csv");
    io::write_file_atomic(path, markers.str());
    result.files.push_back(path);
  }

  if (spec.empirical_family) {
    std::vector<double> emp_gammas;
    try {
      emp_gammas = io::parse_grid(spec.empirical_gamma_grid);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    struct Task {
      double gamma;
      double lambda;
      double s_cross;
      double s_emp = 0.0;
    };
    std::vector<Task> tasks;
    for (double g : emp_gammas) {
      for (double l : lambdas) {
        if (const auto bound = stability_bound(*spec.empirical_family, g, l)) tasks.push_back({g, l, *bound});
      }
    }
    ProbeOptions probe;
    probe.nodes = spec.probe_nodes;
    probe.steps = spec.probe_steps;
    parallel_for(tasks.size(), [&](std::size_t i) {
      auto& t = tasks[i];
      t.s_emp = find_empirical_threshold(*spec.empirical_family, t.gamma, t.lambda,
                                         {0.5 * t.s_cross, 2.0 * t.s_cross}, probe);
    });
    io::CsvBuilder emp({"family", "gamma", "lambda", "s_cross", "s_empirical", "inv_s_empirical", "relative_difference"},
                       "name=" + spec.name + " bisected probe thresholds; probe_nodes=" +
                           std::to_string(spec.probe_nodes) + " probe_steps=" + std::to_string(spec.probe_steps));
    for (const auto& t : tasks) {
      emp.add_row(std::vector<std::string>{std::string(to_string(*spec.empirical_family)), format_double(t.gamma),
                                           format_double(t.lambda), format_double(t.s_cross), format_double(t.s_emp),
                                           format_double(1.0 / t.s_emp),
                                           format_double(std::abs(t.s_emp - t.s_cross) / t.s_cross)});
    }
    path = options.out_dir / (spec.name + "_empirical.csv");
    io::write_file_atomic(path, emp.str());
    result.files.push_back(path);
    summary << "empirical thresholds: " << tasks.size() << " points\n";
  }

  summary << "status completed\n";
  result.summary = summary.str();
  path = options.out_dir / (spec.name + "_summary.txt");
  io::write_file_atomic(path, result.summary);
  result.files.push_back(path);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  return spec.kind == ExperimentKind::solve ? run_solve(spec, options) : run_phase(spec, options);
}

ProfileError profile_error(const SolutionHistory& history, const SineSeriesIC& ic, double gamma, double k_gamma,
                           int level, double tol) {
  std::vector<double> xs(static_cast<std::size_t>(history.nodes()));
  for (int j = 0; j < history.nodes(); ++j) xs[static_cast<std::size_t>(j)] = j * history.dx();
  const double t = level * history.dt();
  const auto exact = exact_profile(ic, gamma, k_gamma, xs, t, tol);
  const auto row = history.row(level);
  double max_error = 0.0;
  double sq = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double e = std::abs(row[j] - exact[j]);
    max_error = std::max(max_error, e);
    sq += e * e;
  }
  return {level, t, max_error, std::sqrt(history.dx() * sq)};
}

RefineMode parse_refine_mode(std::string_view text) {
  if (text == "refine_dt" || text == "dt") return RefineMode::refine_dt;
  if (text == "refine_dx" || text == "dx") return RefineMode::refine_dx;
  if (text == "refine_both" || text == "both") return RefineMode::refine_both;
  throw std::invalid_argument("unknown refinement mode '" + std::string(text) + "'");
}

std::string_view to_string(RefineMode mode) noexcept {
  switch (mode) {
    case RefineMode::refine_dt: return "refine_dt";
    case RefineMode::refine_dx: return "refine_dx";
    case RefineMode::refine_both: return "refine_both";
  }
  return "?";
}

ConvergenceAborted::ConvergenceAborted(int refinement, int overflow_level)
    : std::runtime_error(overflow_level >= 0
                             ? "convergence study aborted: refinement level " + std::to_string(refinement) +
                                   " overflowed at step " + std::to_string(overflow_level)
                             : "convergence study aborted: refinement level " + std::to_string(refinement) +
                                   " violates the stability bound"),
      refinement_(refinement) {}

namespace {

struct LevelRun {
  double max_error;
  int overflow_level = -1;
};

LevelRun final_error(const ResolvedRun& run, const ExperimentSpec& spec) {
  WaStepper stepper(run.problem, run.scheme);
  try {
    while (stepper.current_level() < run.scheme.steps) stepper.step();
  } catch (const SolverOverflow& e) {
    return {std::numeric_limits<double>::infinity(), e.level()};
  }
  const auto err = profile_error(stepper.history(), *run.ic.sine_series, spec.gamma, spec.k_gamma, run.scheme.steps);
  return {err.max_error};
}

double mean_order(const std::vector<RefinementLevel>& levels, double RefinementLevel::*h) {
  if (levels.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    sum += std::log(levels[i].max_error / levels[i + 1].max_error) / std::log(levels[i].*h / levels[i + 1].*h);
  }
  return sum / static_cast<double>(levels.size() - 1);
}

}  // namespace

ConvergenceReport convergence_study(const ExperimentSpec& base, int refinements, RefineMode mode) {
  if (refinements < 0) throw std::invalid_argument("refinements must be >= 0");
  const ResolvedRun base_run = resolve(base);
  if (!base_run.ic.sine_series) throw ConfigError("convergence study needs an initial condition with an exact solution");
  const double t_final = base_run.scheme.steps * base_run.scheme.dt;

  std::vector<ResolvedRun> runs;
  std::vector<ExperimentSpec> specs;
  for (int r = 0; r <= refinements; ++r) {
    ExperimentSpec spec = base;
    const double factor = std::ldexp(1.0, -r);
    double dx = base_run.scheme.dx;
    double dt = base_run.scheme.dt;
    if (mode != RefineMode::refine_dt) dx *= factor;
    if (mode == RefineMode::refine_dt) dt *= factor;
    if (mode == RefineMode::refine_both) dt = time_step_for_ratio(base_run.s, dx, base.k_gamma, base.gamma);
    spec.dx = dx;
    spec.s.reset();
    spec.dt = dt;
    spec.t_end.reset();
    spec.steps = static_cast<int>(std::round(t_final / dt));
    spec.output_times.clear();
    spec.output_steps.clear();
    auto run = resolve(spec);
    if (theoretical_verdict(spec.family, spec.gamma, spec.lambda, run.s) == Verdict::unstable) {
      throw ConvergenceAborted(r, -1);
    }
    runs.push_back(std::move(run));
    specs.push_back(std::move(spec));
  }

  std::vector<LevelRun> outcomes(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) { outcomes[i] = final_error(runs[i], specs[i]); });

  ConvergenceReport report;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (outcomes[i].overflow_level >= 0) throw ConvergenceAborted(static_cast<int>(i), outcomes[i].overflow_level);
    const auto& sc = runs[i].scheme;
    report.levels.push_back({sc.dt, sc.dx, sc.steps, sc.steps * sc.dt, outcomes[i].max_error});
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.estimated_order_dt = mode == RefineMode::refine_dx ? nan : mean_order(report.levels, &RefinementLevel::dt);
  report.estimated_order_dx = mode == RefineMode::refine_dt ? nan : mean_order(report.levels, &RefinementLevel::dx);
  return report;
}

std::vector<StartupRow> startup_comparison(const ExperimentSpec& spec, const std::vector<int>& startup_steps) {
  if (spec.lambda != 0.5) throw ConfigError("start-up comparison needs lambda = 0.5");
  const ResolvedRun base = resolve(spec);
  if (!base.ic.sine_series) throw ConfigError("start-up comparison needs an initial condition with an exact solution");
  const auto explicit_bound = stability_bound(spec.family, spec.gamma, 1.0);
  std::vector<ResolvedRun> runs;
  for (int s : startup_steps) {
    if (s < 0) throw ConfigError("start-up step counts must be >= 0");
    if (s > 0 && explicit_bound && base.s > *explicit_bound) {
      throw ConfigError("S = " + format_double(base.s) + " exceeds the explicit bound " + format_double(*explicit_bound) +
                        "; an explicit start would be unstable");
    }
    if (s > base.scheme.steps) throw ConfigError("start-up steps exceed the run length");
    ResolvedRun run = base;
    run.scheme.startup_explicit_steps = s;
    runs.push_back(std::move(run));
  }
  std::vector<LevelRun> outcomes(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) { outcomes[i] = final_error(runs[i], spec); });
  std::vector<StartupRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (outcomes[i].overflow_level >= 0) throw SolverOverflow(outcomes[i].overflow_level);
    rows.push_back({startup_steps[i], outcomes[i].max_error});
  }
  return rows;
}

FigureId parse_figure_id(std::string_view text) {
  static constexpr std::string_view names[] = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    if (text == names[i]) return static_cast<FigureId>(i);
  }
  throw std::invalid_argument("unknown figure id '" + std::string(text) + "' (expected fig1..fig7)");
}

std::string_view to_string(FigureId id) noexcept {
  static constexpr std::string_view names[] = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return names[static_cast<std::size_t>(id)];
}

namespace {

ExperimentSpec canonical_solve(std::string name, double gamma, double lambda, double s, double dx) {
  ExperimentSpec spec;
  spec.name = std::move(name);
  spec.gamma = gamma;
  spec.lambda = lambda;
  spec.s = s;
  spec.dx = dx;
  return spec;
}

}  // namespace

std::vector<ExperimentSpec> figure_specs(FigureId id) {
  switch (id) {
    case FigureId::fig1: {
      ExperimentSpec spec;
      spec.name = "fig1";
      spec.kind = ExperimentKind::phase;
      spec.gamma_grid = "0.5:0.5:1";
      spec.lambda_grid = "0:1:21";
      spec.markers = {{0.5, 0.8, 0.55}, {0.5, 0.8, 0.7}};
      return {spec};
    }
    case FigureId::fig2: {
      ExperimentSpec spec;
      spec.name = "fig2";
      spec.kind = ExperimentKind::phase;
      spec.families = {FormulaFamily::bdf1, FormulaFamily::bdf2, FormulaFamily::bdf3, FormulaFamily::ng2};
      spec.gamma_grid = "0.1:1:19";
      spec.lambda_grid = "1:1:1";
      spec.markers = {{0.5, 1.0, 0.33}, {0.75, 1.0, 0.4}, {1.0, 1.0, 0.5}, {0.5, 1.0, 0.37}};
      spec.empirical_family = FormulaFamily::bdf1;
      spec.empirical_gamma_grid = "0.1:0.9:9";
      return {spec};
    }
    case FigureId::fig3: {
      std::vector<ExperimentSpec> specs{canonical_solve("fig3_gamma0.5", 0.5, 1.0, 0.33, 0.1),
                                        canonical_solve("fig3_gamma0.75", 0.75, 1.0, 0.4, 0.05),
                                        canonical_solve("fig3_gamma1", 1.0, 1.0, 0.5, 0.02)};
      for (auto& spec : specs) {
        spec.t_end = 0.5;
        spec.error_vs_exact = true;
      }
      return specs;
    }
    case FigureId::fig4: {
      auto spec = canonical_solve("fig4", 0.5, 1.0, 0.37, 0.05);
      spec.steps = 200;
      spec.output_steps = {150, 200};
      spec.stability_report = true;
      return {spec};
    }
    case FigureId::fig5: {
      auto spec = canonical_solve("fig5", 0.5, 0.8, 0.55, 0.05);
      spec.steps = 500;
      spec.error_vs_exact = true;
      spec.stability_report = true;
      return {spec};
    }
    case FigureId::fig6:
    case FigureId::fig7: {
      auto spec = canonical_solve(std::string(to_string(id)), 0.5, 0.8, 0.7, 0.05);
      spec.steps = id == FigureId::fig6 ? 50 : 100;
      spec.stability_report = true;
      return {spec};
    }
  }
  throw std::invalid_argument("unknown figure id");
}

FigureResult reproduce_figure(FigureId id, const RunOptions& options) {
  const auto specs = figure_specs(id);
  std::vector<ExperimentResult> results(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { results[i] = run_experiment(specs[i], options); });
  FigureResult figure;
  for (const auto& r : results) {
    figure.files.insert(figure.files.end(), r.files.begin(), r.files.end());
    figure.instability_detected = figure.instability_detected || r.status == RunStatus::unstable;
    figure.summary += r.summary;
  }
  return figure;
}

}  // namespace fracstep
