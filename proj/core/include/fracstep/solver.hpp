#pragma once

// Weighted-average (theta-method) finite-difference scheme for
//
//     du/dt = K  D_t^{1-g}  d^2u/dx^2
//
// with the Riemann-Liouville operator replaced by the discrete convolution
// sum_k w_k f(t - k dt) / dt^{1-g}. One step reads
//
//   U_j^{m+1} = U_j^m + (1 - lambda) S sum_{k=0}^{m+1} w_k D_j^{m+1-k}
//                     +      lambda S sum_{k=0}^{m}   w_k D_j^{m-k}
//
// where D_j^n = U_{j-1}^n - 2 U_j^n + U_{j+1}^n and S = K dt^g / dx^2.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracstep/coefficients.hpp"

namespace fracstep {

struct ProblemSpec {
  double gamma = 1.0;          // anomalous exponent, (0, 1]
  double k_gamma = 1.0;        // generalized diffusion coefficient
  double domain_length = 1.0;  // x in [0, domain_length]
  std::function<double(double)> initial_condition;
  double left_value = 0.0;     // Dirichlet data, constant in time
  double right_value = 0.0;

  void validate() const;
};

struct SchemeConfig {
  double lambda = 1.0;  // 1 explicit, 1/2 Crank-Nicolson, 0 fully implicit
  double dx = 0.1;
  double dt = 1e-3;     // the convolution step h always equals dt
  FormulaFamily family = FormulaFamily::bdf1;
  int steps = 1;
  int startup_explicit_steps = 0;  // hybrid start: first steps with lambda = 1

  void validate() const;
};

/// S = K dt^g / dx^2.
double mesh_ratio(double k_gamma, double gamma, double dt, double dx);
double mesh_ratio(const ProblemSpec& problem, const SchemeConfig& config);

/// dt = (S dx^2 / K)^(1/g).
double time_step_for_ratio(double s, double dx, double k_gamma, double gamma);

/// Number of intervals N = domain_length / dx; throws std::invalid_argument
/// unless dx divides the domain to within 1e-9 relative.
int interval_count(double domain_length, double dx);

/// Raised when a new level contains a non-finite value or |U| > 1e150.
class SolverOverflow : public std::runtime_error {
 public:
  explicit SolverOverflow(int level);
  int level() const noexcept { return level_; }

 private:
  int level_;
};

inline constexpr double kOverflowThreshold = 1e150;

/// Time levels 0..M of the nodal values U_j^m, j = 0..N.
class SolutionHistory {
 public:
  SolutionHistory(int intervals, double dx, double dt);

  int intervals() const noexcept { return intervals_; }
  int nodes() const noexcept { return intervals_ + 1; }
  int levels() const noexcept { return static_cast<int>(values_.size() / static_cast<std::size_t>(nodes())); }
  int top_level() const noexcept { return levels() - 1; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }

  std::span<const double> row(int level) const;
  double operator()(int level, int node) const { return row(level)[static_cast<std::size_t>(node)]; }

  void append(std::span<const double> row);
  std::span<const double> data() const noexcept { return values_; }

 private:
  int intervals_;
  double dx_;
  double dt_;
  std::vector<double> values_;
};

/// sum_{k=0}^{m} w_k D_j^{m-k}, summed directly from the stored levels.
/// Throws std::logic_error when the table is shorter than m + 1 entries.
double memory_term(const SolutionHistory& history, const CoefficientTable& table, int level, int node);

/// Advances one problem level by level. Keeps the second-difference rows of
/// every level so that the memory convolution of a step costs O(m N).
class WaStepper {
 public:
  /// Builds its own coefficient table (capacity steps + 1).
  WaStepper(const ProblemSpec& problem, const SchemeConfig& config);
  /// Shares a read-only table; it must already cover steps + 1 weights and
  /// match (config.family, 1 - gamma).
  WaStepper(const ProblemSpec& problem, const SchemeConfig& config,
            std::shared_ptr<const CoefficientTable> table);

  const SolutionHistory& history() const noexcept { return history_; }
  const CoefficientTable& table() const noexcept { return *table_; }
  double mesh_ratio() const noexcept { return s_; }
  int current_level() const noexcept { return history_.top_level(); }

  /// Weight used for the step from the current level: 1 during the hybrid
  /// start, config.lambda afterwards.
  double active_lambda() const noexcept;

  /// Computes level m + 1. Throws SolverOverflow (carrying m + 1) on blow-up;
  /// the offending level is not appended.
  void step();

  /// max_j |A U - b| / max_j |b| of the last implicit solve (0 for explicit
  /// steps).
  double last_residual() const noexcept { return last_residual_; }

 private:
  void seed_initial_row();

  ProblemSpec problem_;
  SchemeConfig config_;
  std::shared_ptr<const CoefficientTable> table_;
  double s_;
  SolutionHistory history_;
  // Interior second differences, one row of N - 1 values per level.
  std::vector<double> second_diff_;
  std::vector<double> rhs_;
  std::vector<double> next_;
  std::vector<double> sweep_;
  double last_residual_ = 0.0;
};

/// Runs config.steps steps and returns the full history. Throws
/// SolverOverflow if any level blows up.
SolutionHistory run(const ProblemSpec& problem, const SchemeConfig& config);

/// Solves the constant-coefficient system
///   -a x_{i-1} + (1 + 2a) x_i - a x_{i+1} = rhs_i,   x_{-1} = x_n = 0
/// by forward elimination and back substitution. scratch must have rhs.size()
/// entries. Stable without pivoting since the matrix is diagonally dominant.
void solve_symmetric_tridiagonal(double a, std::span<const double> rhs, std::span<double> x,
                                 std::span<double> scratch);

}  // namespace fracstep
