#pragma once

// Config-driven experiments: solver runs compared against the exact
// solution, stability sweeps, convergence studies and the figure presets.
//
// Config files are flat `key = value` text under an `[experiment]` header,
// one experiment per file. `#` and `;` start comments.

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/coefficients.hpp"
#include "fracstep/exact_solution.hpp"
#include "fracstep/solver.hpp"
#include "fracstep/stability.hpp"

namespace fracstep {

/// Raised for malformed or inconsistent experiment configs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Initial profile given as text: "poly:x*(1-x)", "poly:c0,c1,...",
/// "sine:n" or "zero".
struct InitialCondition {
  std::string text;
  std::function<double(double)> profile;
  std::optional<SineSeriesIC> sine_series;  // present when the exact solution applies

  static InitialCondition parse(std::string_view text);
};

enum class ExperimentKind { solve, phase };

struct PhaseMarker {
  double gamma;
  double lambda;
  double s;

  bool operator==(const PhaseMarker&) const = default;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::solve;

  // problem
  double gamma = 1.0;
  double k_gamma = 1.0;
  double domain_length = 1.0;
  double left_value = 0.0;
  double right_value = 0.0;
  std::string ic = "poly:x*(1-x)";

  // scheme; exactly one of s/dt and at most one of steps/t_end
  double lambda = 1.0;
  FormulaFamily family = FormulaFamily::bdf1;
  double dx = 0.1;
  std::optional<double> s;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<double> t_end;
  int startup_explicit_steps = 0;

  // outputs; empty output lists mean "final level only"
  std::vector<double> output_times;
  std::vector<int> output_steps;
  bool profile_csv = true;
  bool history_csv = false;
  bool error_vs_exact = false;
  bool stability_report = false;

  // phase sweeps
  std::vector<FormulaFamily> families{FormulaFamily::bdf1};
  std::string gamma_grid = "0.5:0.5:1";
  std::string lambda_grid = "1:1:1";
  std::vector<PhaseMarker> markers;
  std::optional<FormulaFamily> empirical_family;
  std::string empirical_gamma_grid = "0.5:0.5:1";
  int probe_nodes = 32;
  int probe_steps = 400;

  bool operator==(const ExperimentSpec&) const = default;
};

/// Resolved numerical parameters of a solve experiment.
struct ResolvedRun {
  ProblemSpec problem;
  SchemeConfig scheme;
  InitialCondition ic;
  double s = 0.0;
  std::vector<int> output_levels;  // ascending, unique
};

ExperimentSpec parse_experiment(std::string_view text);
ExperimentSpec load_experiment(const std::filesystem::path& path);
std::string serialize_experiment(const ExperimentSpec& spec);

/// Validates and converts a solve spec (dt derived from S when given).
ResolvedRun resolve(const ExperimentSpec& spec);

struct ProfileError {
  int level;
  double t;
  double max_error;
  double l2_error;  // sqrt(dx * sum e_j^2)
};

enum class RunStatus { completed, unstable };

struct ExperimentResult {
  RunStatus status = RunStatus::completed;
  std::optional<int> overflow_level;
  std::optional<StabilityReport> stability;
  std::vector<ProfileError> errors;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<double> t_end_override;
  std::optional<std::filesystem::path> history_path;  // overrides <name>_history.csv
};

/// Executes one experiment and writes its files into options.out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// max-norm and L2 error of one level against the exact solution.
ProfileError profile_error(const SolutionHistory& history, const SineSeriesIC& ic, double gamma, double k_gamma,
                           int level, double tol = kDefaultExactTol);

enum class RefineMode { refine_dt, refine_dx, refine_both };

RefineMode parse_refine_mode(std::string_view text);
std::string_view to_string(RefineMode mode) noexcept;

struct RefinementLevel {
  double dt;
  double dx;
  int steps;
  double t_final;
  double max_error;
};

struct ConvergenceReport {
  std::vector<RefinementLevel> levels;
  double estimated_order_dt = 0.0;  // NaN when dt was not refined
  double estimated_order_dx = 0.0;  // NaN when dx was not refined
};

class ConvergenceAborted : public std::runtime_error {
 public:
  ConvergenceAborted(int refinement, int overflow_level);
  int refinement() const noexcept { return refinement_; }

 private:
  int refinement_;
};

/// Runs the base spec and `refinements` further levels, halving dt, dx, or
/// dx with dt rescaled to keep S fixed. Each order is the mean over
/// successive levels of log(e_l / e_{l+1}) / log(h_l / h_{l+1}), with e the
/// max-norm error at the final time; for dyadic refinement that is the log2
/// error ratio.
ConvergenceReport convergence_study(const ExperimentSpec& base, int refinements, RefineMode mode);

struct StartupRow {
  int startup_steps;
  double max_error;
};

/// Crank-Nicolson runs with 0, s1, s2, ... explicit start-up steps.
/// Requires lambda = 1/2 and, when any count is positive, S within the
/// explicit bound of the family.
std::vector<StartupRow> startup_comparison(const ExperimentSpec& spec, const std::vector<int>& startup_steps);

enum class FigureId { fig1, fig2, fig3, fig4, fig5, fig6, fig7 };

FigureId parse_figure_id(std::string_view text);
std::string_view to_string(FigureId id) noexcept;

/// Experiment presets with the published parameters.
std::vector<ExperimentSpec> figure_specs(FigureId id);

struct FigureResult {
  std::vector<std::filesystem::path> files;
  bool instability_detected = false;
  std::string summary;
};

FigureResult reproduce_figure(FigureId id, const RunOptions& options = {});

}  // namespace fracstep
