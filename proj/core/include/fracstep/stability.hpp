#pragma once

// Stability of the weighted-average scheme.
//
// A single Fourier mode U_j^m = zeta_m exp(i q j dx) stays bounded as long as
//
//     1/S >= 1/S_x = 2 (2 lambda - 1) omega(-1, 1 - gamma),
//
// so every lambda <= 1/2 is unconditionally stable. This module evaluates
// that bound, checks it by running the solver on the checkerboard mode, and
// tabulates it over parameter grids.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracstep/coefficients.hpp"

namespace fracstep {

enum class Verdict { stable, unstable, unconditionally_stable };

const char* to_string(Verdict verdict) noexcept;

/// 2 (2 lambda - 1) omega(-1, 1 - gamma); <= 0 means no constraint on S.
double inverse_critical_ratio(FormulaFamily family, double gamma, double lambda);

/// S_x, or std::nullopt (the unconditional marker) when lambda <= 1/2.
std::optional<double> stability_bound(FormulaFamily family, double gamma, double lambda);

/// Verdict of the closed-form bound for a given S.
Verdict theoretical_verdict(FormulaFamily family, double gamma, double lambda, double s);

struct ProbeOptions {
  int nodes = 32;     // number of intervals; even, >= 8
  int steps = 400;    // >= 50
  double amplitude = 1e-6;
  double instability_threshold = 10.0;
};

struct StabilityReport {
  double s_value = 0.0;
  std::optional<double> s_cross;  // empty: bound non-binding
  Verdict theoretical = Verdict::stable;
  double growth_factor = 0.0;     // max |U^final| / amplitude (+inf on overflow)
  Verdict empirical = Verdict::stable;
  int probe_steps = 0;
  std::optional<int> overflow_level;
};

/// Runs the scheme with zero boundaries from U_j^0 = (-1)^j eps at interior
/// nodes (the q dx = pi mode) and classifies the growth.
StabilityReport probe_stability(FormulaFamily family, double gamma, double lambda, double s,
                                const ProbeOptions& options = {});

class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bisects on S until the bracket is narrower than width_tol; returns the
/// midpoint. Throws BracketError when both ends give the same verdict.
double find_empirical_threshold(FormulaFamily family, double gamma, double lambda,
                                std::pair<double, double> bracket, const ProbeOptions& options = {},
                                double width_tol = 1e-3);

struct PhasePoint {
  double gamma;
  double lambda;
  double inv_s_cross;
};

/// inverse_critical_ratio over the grid, gamma-major.
std::vector<PhasePoint> phase_diagram(FormulaFamily family, const std::vector<double>& gammas,
                                      const std::vector<double>& lambdas);

}  // namespace fracstep
