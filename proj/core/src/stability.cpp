#include "fracstep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracstep/solver.hpp"

namespace fracstep {
namespace {

void check_gamma_lambda(double gamma, double lambda) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("stability: gamma must lie in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("stability: lambda must lie in [0, 1]");
}

}  // namespace

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::unconditionally_stable: return "unconditionally_stable";
  }
  return "unknown";
}

double inverse_critical_ratio(FormulaFamily family, double gamma, double lambda) {
  check_gamma_lambda(gamma, lambda);
  return 2.0 * (2.0 * lambda - 1.0) * eval_generating_function(family, 1.0 - gamma, -1.0);
}

std::optional<double> stability_bound(FormulaFamily family, double gamma, double lambda) {
  const double inv = inverse_critical_ratio(family, gamma, lambda);
  if (lambda <= 0.5) return std::nullopt;
  return 1.0 / inv;
}

Verdict theoretical_verdict(FormulaFamily family, double gamma, double lambda, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("stability: S must be > 0");
  const double inv = inverse_critical_ratio(family, gamma, lambda);
  if (lambda <= 0.5) return Verdict::unconditionally_stable;
  return 1.0 / s >= inv ? Verdict::stable : Verdict::unstable;
}

StabilityReport probe_stability(FormulaFamily family, double gamma, double lambda, double s,
                                const ProbeOptions& options) {
  check_gamma_lambda(gamma, lambda);
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("probe_stability: S must be finite and > 0");
  if (options.nodes < 8 || options.nodes % 2 != 0) throw std::invalid_argument("probe_stability: nodes must be even and >= 8");
  if (options.steps < 50) throw std::invalid_argument("probe_stability: steps must be >= 50");
  if (!(options.amplitude > 0.0)) throw std::invalid_argument("probe_stability: amplitude must be > 0");

  StabilityReport report;
  report.s_value = s;
  report.s_cross = stability_bound(family, gamma, lambda);
  report.theoretical = theoretical_verdict(family, gamma, lambda, s);
  report.probe_steps = options.steps;

  // Unit-free setup: dt = 1, dx = 1/nodes and K chosen so that K dt^g / dx^2 = S.
  const double dx = 1.0 / options.nodes;
  const double eps = options.amplitude;
  const int nodes = options.nodes;
  ProblemSpec problem;
  problem.gamma = gamma;
  problem.k_gamma = s * dx * dx;
  problem.initial_condition = [dx, eps, nodes](double x) {
    const long j = std::lround(x / dx);
    if (j <= 0 || j >= nodes) return 0.0;
    return (j % 2 == 0) ? eps : -eps;
  };

  SchemeConfig config;
  config.lambda = lambda;
  config.dx = dx;
  config.dt = 1.0;
  config.family = family;
  config.steps = options.steps;

  try {
    const auto history = run(problem, config);
    const auto last = history.row(history.top_level());
    double peak = 0.0;
    for (double v : last) peak = std::max(peak, std::abs(v));
    report.growth_factor = peak / eps;
  } catch (const SolverOverflow& overflow) {
    report.growth_factor = std::numeric_limits<double>::infinity();
    report.overflow_level = overflow.level();
  }
  report.empirical = (report.overflow_level || report.growth_factor > options.instability_threshold)
                         ? Verdict::unstable
                         : Verdict::stable;
  return report;
}

double find_empirical_threshold(FormulaFamily family, double gamma, double lambda,
                                std::pair<double, double> bracket, const ProbeOptions& options,
                                double width_tol) {
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo)) throw BracketError("find_empirical_threshold: need 0 < s_lo < s_hi");
  if (!(width_tol > 0.0)) throw std::invalid_argument("find_empirical_threshold: width_tol must be > 0");
  const auto unstable = [&](double s) {
    return probe_stability(family, gamma, lambda, s, options).empirical == Verdict::unstable;
  };
  const bool lo_unstable = unstable(lo);
  const bool hi_unstable = unstable(hi);
  if (lo_unstable == hi_unstable) {
    throw BracketError("find_empirical_threshold: probe verdicts agree at both ends of [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  // Keep `lo` on the stable side.
  const bool flipped = lo_unstable;
  while (hi - lo >= width_tol) {
    const double mid = 0.5 * (lo + hi);
    if (unstable(mid) != flipped) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<PhasePoint> phase_diagram(FormulaFamily family, const std::vector<double>& gammas,
                                      const std::vector<double>& lambdas) {
  if (gammas.empty() || lambdas.empty()) throw std::invalid_argument("phase_diagram: grids must be non-empty");
  std::vector<PhasePoint> out;
  out.reserve(gammas.size() * lambdas.size());
  for (double g : gammas) {
    for (double l : lambdas) out.push_back({g, l, inverse_critical_ratio(family, g, l)});
  }
  return out;
}

}  // namespace fracstep
