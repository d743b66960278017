#include "fracstep/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracstep {

void ProblemSpec::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("ProblemSpec: gamma must lie in (0, 1]");
  if (!(k_gamma > 0.0) || !std::isfinite(k_gamma)) throw std::invalid_argument("ProblemSpec: k_gamma must be > 0");
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw std::invalid_argument("ProblemSpec: domain_length must be > 0");
  }
  if (!initial_condition) throw std::invalid_argument("ProblemSpec: initial condition missing");
  if (!std::isfinite(left_value) || !std::isfinite(right_value)) {
    throw std::invalid_argument("ProblemSpec: boundary values must be finite");
  }
}

void SchemeConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("SchemeConfig: lambda must lie in [0, 1]");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("SchemeConfig: dx must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SchemeConfig: dt must be > 0");
  if (steps < 0) throw std::invalid_argument("SchemeConfig: steps must be >= 0");
  if (startup_explicit_steps < 0) throw std::invalid_argument("SchemeConfig: startup_explicit_steps must be >= 0");
}

double mesh_ratio(double k_gamma, double gamma, double dt, double dx) {
  return k_gamma * std::pow(dt, gamma) / (dx * dx);
}

double mesh_ratio(const ProblemSpec& problem, const SchemeConfig& config) {
  return mesh_ratio(problem.k_gamma, problem.gamma, config.dt, config.dx);
}

double time_step_for_ratio(double s, double dx, double k_gamma, double gamma) {
  if (!(s > 0.0) || !(dx > 0.0) || !(k_gamma > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("time_step_for_ratio: arguments must be positive");
  }
  return std::pow(s * dx * dx / k_gamma, 1.0 / gamma);
}

int interval_count(double domain_length, double dx) {
  const double ratio = domain_length / dx;
  const double rounded = std::round(ratio);
  if (rounded < 2.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("dx = " + std::to_string(dx) + " does not divide the domain into >= 2 intervals");
  }
  return static_cast<int>(rounded);
}

SolverOverflow::SolverOverflow(int level)
    : std::runtime_error("solution overflow at level " + std::to_string(level)), level_(level) {}

SolutionHistory::SolutionHistory(int intervals, double dx, double dt)
    : intervals_(intervals), dx_(dx), dt_(dt) {
  if (intervals < 2) throw std::invalid_argument("SolutionHistory: need at least two intervals");
}

std::span<const double> SolutionHistory::row(int level) const {
  if (level < 0 || level >= levels()) throw std::out_of_range("SolutionHistory: level out of range");
  const auto n = static_cast<std::size_t>(nodes());
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(level) * n, n);
}

void SolutionHistory::append(std::span<const double> row) {
  if (row.size() != static_cast<std::size_t>(nodes())) throw std::invalid_argument("SolutionHistory: row size mismatch");
  values_.insert(values_.end(), row.begin(), row.end());
}

double memory_term(const SolutionHistory& history, const CoefficientTable& table, int level, int node) {
  if (node < 1 || node >= history.intervals()) throw std::out_of_range("memory_term: node must be interior");
  if (level < 0 || level > history.top_level()) throw std::out_of_range("memory_term: level out of range");
  if (table.capacity() < static_cast<std::size_t>(level)) {
    throw std::logic_error("memory_term: coefficient table shorter than the requested level");
  }
  double sum = 0.0;
  for (int k = 0; k <= level; ++k) {
    const auto u = history.row(level - k);
    const auto j = static_cast<std::size_t>(node);
    sum += table[static_cast<std::size_t>(k)] * (u[j - 1] - 2.0 * u[j] + u[j + 1]);
  }
  return sum;
}

void solve_symmetric_tridiagonal(double a, std::span<const double> rhs, std::span<double> x,
                                 std::span<double> scratch) {
  const std::size_t n = rhs.size();
  if (x.size() != n || scratch.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
  if (n == 0) return;
  const double diag = 1.0 + 2.0 * a;
  // scratch holds the modified super-diagonal, x the modified right-hand side.
  double pivot = diag;
  scratch[0] = -a / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag + a * scratch[i - 1];
    scratch[i] = -a / pivot;
    x[i] = (rhs[i] + a * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

WaStepper::WaStepper(const ProblemSpec& problem, const SchemeConfig& config)
    : WaStepper(problem, config,
                std::make_shared<const CoefficientTable>(config.family, 1.0 - problem.gamma,
                                                         static_cast<std::size_t>(std::max(config.steps, 0)) + 1)) {}

WaStepper::WaStepper(const ProblemSpec& problem, const SchemeConfig& config,
                     std::shared_ptr<const CoefficientTable> table)
    : problem_(problem),
      config_(config),
      table_(std::move(table)),
      s_(0.0),
      history_(2, 1.0, 1.0) {
  problem_.validate();
  config_.validate();
  if (!table_) throw std::invalid_argument("WaStepper: coefficient table missing");
  if (table_->family() != config_.family || table_->alpha() != 1.0 - problem_.gamma) {
    throw std::invalid_argument("WaStepper: coefficient table does not match (family, 1 - gamma)");
  }
  s_ = fracstep::mesh_ratio(problem_, config_);
  if (!(s_ > 0.0) || !std::isfinite(s_)) throw std::invalid_argument("WaStepper: mesh ratio S must be finite and > 0");
  history_ = SolutionHistory(interval_count(problem_.domain_length, config_.dx), config_.dx, config_.dt);
  seed_initial_row();
}

void WaStepper::seed_initial_row() {
  const int n = history_.intervals();
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = (j == n) ? problem_.domain_length : j * config_.dx;
    row[static_cast<std::size_t>(j)] = problem_.initial_condition(x);
    if (!std::isfinite(row[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("initial condition is not finite at x = " + std::to_string(x));
    }
  }
  if (std::abs(row.front() - problem_.left_value) > 1e-12 || std::abs(row.back() - problem_.right_value) > 1e-12) {
    throw std::invalid_argument("initial condition endpoints disagree with the boundary data");
  }
  history_.append(row);

  const auto interior = static_cast<std::size_t>(n - 1);
  second_diff_.reserve(interior * (static_cast<std::size_t>(std::max(config_.steps, 0)) + 1));
  for (std::size_t i = 0; i < interior; ++i) second_diff_.push_back(row[i] - 2.0 * row[i + 1] + row[i + 2]);
  rhs_.resize(interior);
  next_.resize(interior);
  sweep_.resize(interior);
}

double WaStepper::active_lambda() const noexcept {
  return current_level() < config_.startup_explicit_steps ? 1.0 : config_.lambda;
}

void WaStepper::step() {
  const int m = current_level();
  const auto mu = static_cast<std::size_t>(m);
  if (table_->capacity() < mu + 1) throw std::logic_error("WaStepper: coefficient table too short for this step");
  const double lambda = active_lambda();
  const auto& w = *table_;
  const std::size_t interior = rhs_.size();

  const auto current = history_.row(m);
  for (std::size_t i = 0; i < interior; ++i) rhs_[i] = current[i + 1];

  // Known-level contributions: level n enters with
  //   (1 - lambda) w_{m+1-n} + lambda w_{m-n}.
  for (std::size_t n = 0; n <= mu; ++n) {
    const double c = (1.0 - lambda) * w[mu + 1 - n] + lambda * w[mu - n];
    if (c == 0.0) continue;
    const double scale = s_ * c;
    const double* d = second_diff_.data() + n * interior;
    for (std::size_t i = 0; i < interior; ++i) rhs_[i] += scale * d[i];
  }

  const double a = (1.0 - lambda) * s_ * w[0];
  last_residual_ = 0.0;
  if (a == 0.0) {
    next_ = rhs_;
  } else {
    rhs_.front() += a * problem_.left_value;
    rhs_.back() += a * problem_.right_value;
    solve_symmetric_tridiagonal(a, rhs_, next_, sweep_);

    double res = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < interior; ++i) {
      const double lower = i > 0 ? next_[i - 1] : 0.0;
      const double upper = i + 1 < interior ? next_[i + 1] : 0.0;
      res = std::max(res, std::abs((1.0 + 2.0 * a) * next_[i] - a * (lower + upper) - rhs_[i]));
      scale = std::max(scale, std::abs(rhs_[i]));
    }
    last_residual_ = scale > 0.0 ? res / scale : res;
  }

  std::vector<double> row;
  row.reserve(interior + 2);
  row.push_back(problem_.left_value);
  for (double v : next_) {
    if (!std::isfinite(v) || std::abs(v) > kOverflowThreshold) throw SolverOverflow(m + 1);
    row.push_back(v);
  }
  row.push_back(problem_.right_value);
  history_.append(row);
  for (std::size_t i = 0; i < interior; ++i) second_diff_.push_back(row[i] - 2.0 * row[i + 1] + row[i + 2]);
}

SolutionHistory run(const ProblemSpec& problem, const SchemeConfig& config) {
  WaStepper stepper(problem, config);
  for (int i = 0; i < config.steps; ++i) stepper.step();
  return stepper.history();
}

}  // namespace fracstep
