// fracstep command-line front end.
//
// Exit codes: 0 completed, 2 instability detected, 1 usage or config error,
// 3 internal failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracstep/coefficients.hpp"
#include "fracstep/exact_solution.hpp"
#include "fracstep/experiment.hpp"
#include "fracstep/io.hpp"
#include "fracstep/mittag_leffler.hpp"
#include "fracstep/stability.hpp"

namespace {

using namespace fracstep;
using io::format_double;
using io::format_significant;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitInternal = 3;

const std::vector<std::string> kFamilyNames{"bdf1", "bdf2", "bdf3", "ng2"};

int cmd_coeffs(FormulaFamily family, double alpha, long long count) {
  if (count < 1) throw std::invalid_argument("--count must be >= 1");
  const auto table = build_table(family, alpha, count);
  std::cout << "# columns=k,omega; family=" << to_string(family) << " alpha=" << format_double(alpha) << '\n';
  for (long long k = 0; k < count; ++k) {
    std::cout << k << ',' << format_significant(table[static_cast<std::size_t>(k)], 17) << '\n';
  }
  return kExitOk;
}

int cmd_ml(double gamma, const std::vector<double>& zs) {
  const MittagLeffler ml(gamma);
  std::cout << "# columns=z,value,branch; gamma=" << format_double(gamma) << '\n';
  for (double z : zs) {
    const auto branch = ml.branch(z);
    const char* name = branch == MLBranch::exponential ? "exponential"
                       : branch == MLBranch::series    ? "series"
                       : branch == MLBranch::asymptotic ? "asymptotic"
                                                        : "integral";
    std::cout << format_double(z) << ',' << format_significant(ml(z), 15) << ',' << name << '\n';
  }
  return kExitOk;
}

int cmd_exact(double gamma, double k_gamma, double t, int nx, const std::string& ic_text) {
  if (nx < 1) throw std::invalid_argument("--nx must be >= 1");
  const auto ic = InitialCondition::parse(ic_text);
  if (!ic.sine_series) throw ConfigError("no closed-form solution for ic '" + ic_text + "'");
  std::vector<double> xs(static_cast<std::size_t>(nx) + 1);
  for (int j = 0; j <= nx; ++j) xs[static_cast<std::size_t>(j)] = static_cast<double>(j) / nx;
  const auto u = exact_profile(*ic.sine_series, gamma, k_gamma, xs, t);
  io::CsvBuilder csv({"x", "u_exact"}, "gamma=" + format_double(gamma) + " kgamma=" + format_double(k_gamma) +
                                           " t=" + format_double(t) + " ic=" + ic_text);
  for (std::size_t j = 0; j < xs.size(); ++j) csv.add_row(std::vector<double>{xs[j], u[j]});
  std::cout << csv.str();
  return kExitOk;
}

int cmd_solve(const std::string& config, const RunOptions& options) {
  const auto spec = load_experiment(config);
  const auto result = run_experiment(spec, options);
  std::cout << result.summary;
  return result.status == RunStatus::unstable ? kExitUnstable : kExitOk;
}

int cmd_bound(FormulaFamily family, double gamma, double lambda) {
  const double inv = inverse_critical_ratio(family, gamma, lambda);
  const auto bound = stability_bound(family, gamma, lambda);
  std::cout << "inv_s_cross=" << format_double(inv) << '\n';
  std::cout << "s_cross=" << (bound ? format_double(*bound) : std::string("unconditional")) << '\n';
  return kExitOk;
}

int cmd_probe(FormulaFamily family, double gamma, double lambda, double s, const ProbeOptions& probe) {
  const auto report = probe_stability(family, gamma, lambda, s, probe);
  std::cout << "S=" << format_double(report.s_value) << '\n'
            << "s_cross=" << (report.s_cross ? format_double(*report.s_cross) : std::string("unconditional")) << '\n'
            << "theoretical=" << to_string(report.theoretical) << '\n'
            << "growth_factor=" << format_double(report.growth_factor) << '\n'
            << "empirical=" << to_string(report.empirical) << '\n';
  if (report.overflow_level) std::cout << "overflow_level=" << *report.overflow_level << '\n';
  return report.empirical == Verdict::unstable ? kExitUnstable : kExitOk;
}

int cmd_phase(FormulaFamily family, const std::string& gamma_grid, const std::string& lambda_grid,
              const std::optional<std::string>& out) {
  const auto points = phase_diagram(family, io::parse_grid(gamma_grid), io::parse_grid(lambda_grid));
  io::CsvBuilder csv({"gamma", "lambda", "inv_s_cross"}, "family=" + std::string(to_string(family)) +
                                                             " gamma_grid=" + gamma_grid +
                                                             " lambda_grid=" + lambda_grid);
  for (const auto& p : points) csv.add_row(std::vector<double>{p.gamma, p.lambda, p.inv_s_cross});
  if (out) {
    io::write_file_atomic(*out, csv.str());
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

int cmd_converge(const std::string& config, int refinements, const std::string& mode_text) {
  const auto mode = parse_refine_mode(mode_text);
  try {
    const auto report = convergence_study(load_experiment(config), refinements, mode);
    std::cout << "# columns=dt,dx,steps,t_final,max_error; mode=" << to_string(mode) << '\n';
    for (const auto& l : report.levels) {
      std::cout << format_double(l.dt) << ',' << format_double(l.dx) << ',' << l.steps << ','
                << format_double(l.t_final) << ',' << format_double(l.max_error) << '\n';
    }
    std::cout << "estimated_order_dt=" << format_double(report.estimated_order_dt) << '\n'
              << "estimated_order_dx=" << format_double(report.estimated_order_dx) << '\n';
  } catch (const ConvergenceAborted& e) {
    std::cerr << e.what() << '\n';
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_startup(const std::string& config, const std::vector<int>& grid) {
  const auto rows = startup_comparison(load_experiment(config), grid);
  std::cout << "# columns=startup_steps,max_error\n";
  for (const auto& r : rows) std::cout << r.startup_steps << ',' << format_double(r.max_error) << '\n';
  return kExitOk;
}

int cmd_figure(const std::string& id, const RunOptions& options) {
  const auto result = reproduce_figure(parse_figure_id(id), options);
  std::cout << result.summary;
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  return result.instability_detected ? kExitUnstable : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-fractional subdiffusion solver, stability analyzer and figure harness"};
  app.require_subcommand(1);
  std::function<int()> action;

  FormulaFamily family = FormulaFamily::bdf1;
  std::string family_text = "bdf1";
  auto add_family = [&](CLI::App* cmd) {
    cmd->add_option("--family", family_text, "bdf1, bdf2, bdf3 or ng2")
        ->capture_default_str()
        ->check(CLI::IsMember(kFamilyNames))
        ->each([&](const std::string& v) { family = parse_family(v); });
  };

  // coeffs
  double alpha = 0.5;
  long long count = 10;
  auto* coeffs = app.add_subcommand("coeffs", "Print the weights omega_0 .. omega_{count-1}");
  add_family(coeffs);
  coeffs->add_option("--alpha", alpha, "Exponent alpha in [0, 2)")->required();
  coeffs->add_option("--count", count, "Number of weights")->capture_default_str();
  coeffs->callback([&] { action = [&] { return cmd_coeffs(family, alpha, count); }; });

  // ml
  double gamma = 0.5;
  std::vector<double> zs;
  auto* ml = app.add_subcommand("ml", "Evaluate the Mittag-Leffler function E_gamma(z), z <= 0");
  ml->add_option("--gamma", gamma, "Order in (0, 1]")->required();
  ml->add_option("--z", zs, "Arguments")->required()->delimiter(',');
  ml->callback([&] { action = [&] { return cmd_ml(gamma, zs); }; });

  // exact
  double k_gamma = 1.0;
  double t = 0.0;
  int nx = 10;
  std::string ic = "poly:x*(1-x)";
  auto* exact = app.add_subcommand("exact", "Print the exact solution on [0, 1] as CSV");
  exact->add_option("--gamma", gamma)->required();
  exact->add_option("--kgamma", k_gamma)->capture_default_str();
  exact->add_option("--t", t)->required();
  exact->add_option("--nx", nx, "Number of intervals")->capture_default_str();
  exact->add_option("--ic", ic)->capture_default_str();
  exact->callback([&] { action = [&] { return cmd_exact(gamma, k_gamma, t, nx, ic); }; });

  // solve
  std::string config;
  RunOptions run_options;
  std::string out_dir = ".";
  std::optional<double> t_end;
  std::optional<std::string> history;
  auto* solve = app.add_subcommand("solve", "Run an experiment config");
  solve->add_option("--config", config)->required()->check(CLI::ExistingFile);
  solve->add_option("--out-dir", out_dir)->capture_default_str();
  solve->add_option("--dump-history", history, "Write every level to this CSV");
  solve->add_option("--t-end", t_end, "Override t_end for t_end-driven runs");
  solve->callback([&] {
    action = [&] {
      run_options.out_dir = out_dir;
      run_options.t_end_override = t_end;
      if (history) run_options.history_path = *history;
      return cmd_solve(config, run_options);
    };
  });

  // stability
  double lambda = 1.0;
  double s = 0.5;
  ProbeOptions probe;
  std::string gamma_grid = "0.1:1:10";
  std::string lambda_grid = "0:1:11";
  std::optional<std::string> out;
  auto* stability = app.add_subcommand("stability", "Stability bound, probe and phase diagram");
  stability->require_subcommand(1);
  auto* bound = stability->add_subcommand("bound", "Closed-form critical mesh ratio");
  add_family(bound);
  bound->add_option("--gamma", gamma)->required();
  bound->add_option("--lambda", lambda)->required();
  bound->callback([&] { action = [&] { return cmd_bound(family, gamma, lambda); }; });
  auto* probe_cmd = stability->add_subcommand("probe", "Empirical growth of the checkerboard mode");
  add_family(probe_cmd);
  probe_cmd->add_option("--gamma", gamma)->required();
  probe_cmd->add_option("--lambda", lambda)->required();
  probe_cmd->add_option("--S", s)->required();
  probe_cmd->add_option("--nodes", probe.nodes)->capture_default_str();
  probe_cmd->add_option("--steps", probe.steps)->capture_default_str();
  probe_cmd->callback([&] { action = [&] { return cmd_probe(family, gamma, lambda, s, probe); }; });
  auto* phase = stability->add_subcommand("phase", "inv_s_cross over a gamma x lambda grid");
  add_family(phase);
  phase->add_option("--gamma-grid", gamma_grid, "a:b:n")->capture_default_str();
  phase->add_option("--lambda-grid", lambda_grid, "a:b:n")->capture_default_str();
  phase->add_option("--out", out, "CSV path (default stdout)");
  phase->callback([&] { action = [&] { return cmd_phase(family, gamma_grid, lambda_grid, out); }; });

  // converge
  int refinements = 3;
  std::string mode = "refine_dt";
  auto* converge = app.add_subcommand("converge", "Refinement study against the exact solution");
  converge->add_option("--config", config)->required()->check(CLI::ExistingFile);
  converge->add_option("--refinements", refinements)->capture_default_str();
  converge->add_option("--mode", mode, "refine_dt, refine_dx or refine_both")->capture_default_str();
  converge->callback([&] { action = [&] { return cmd_converge(config, refinements, mode); }; });

  // startup
  std::vector<int> grid{0, 2, 5, 10};
  auto* startup = app.add_subcommand("startup", "Crank-Nicolson error against explicit start-up steps");
  startup->add_option("--config", config)->required()->check(CLI::ExistingFile);
  startup->add_option("--grid", grid)->delimiter(',');
  startup->callback([&] { action = [&] { return cmd_startup(config, grid); }; });

  // figure
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "Write the data behind one of the published figures");
  figure->add_option("--id", figure_id, "fig1 .. fig7")->required();
  figure->add_option("--out-dir", out_dir)->capture_default_str();
  figure->add_option("--t-end", t_end, "Override t_end for t_end-driven runs");
  figure->callback([&] {
    action = [&] {
      run_options.out_dir = out_dir;
      run_options.t_end_override = t_end;
      return cmd_figure(figure_id, run_options);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const ConvergenceAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const SolverOverflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
