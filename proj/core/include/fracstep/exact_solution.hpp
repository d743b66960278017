#pragma once

// Separation-of-variables solution of the force-free subdiffusion equation on
// [0, 1] with absorbing ends:
//
//     u(x, t) = sum_n b_n sin(n pi x) E_g(-K n^2 pi^2 t^g)
//
// where b_n are the Fourier-sine coefficients of the initial profile.

#include <span>
#include <string>
#include <vector>

#include "fracstep/mittag_leffler.hpp"

namespace fracstep {

struct SineMode {
  int n;
  double amplitude;
};

struct SineSeriesIC {
  std::vector<SineMode> modes;  // strictly increasing n >= 1
  /// Upper bound on sum |b_n| over the modes not listed.
  double tail_bound = 0.0;
  std::string description;

  /// Throws std::invalid_argument on non-increasing modes, n < 1 or
  /// non-finite amplitudes.
  void validate() const;
};

/// u(x, 0) = x (1 - x): b_n = 8 / (pi^3 n^3) for odd n. Modes are listed
/// until the remaining tail sum is below tail_tol.
SineSeriesIC parabolic_ic(double tail_tol = 1e-12);

/// u(x, 0) = sin(n pi x).
SineSeriesIC single_mode_ic(int n);

inline constexpr double kDefaultExactTol = 1e-10;

/// Truncates the series once the remaining |b_n| (plus tail_bound) sum to
/// less than tol; |E_g| <= 1 and |sin| <= 1 make that a bound on the
/// omitted part for every t >= 0. Throws std::invalid_argument when the IC
/// does not list enough modes to honour tol.
double exact_eval(const SineSeriesIC& ic, double gamma, double k_gamma, double x, double t,
                  double tol = kDefaultExactTol);

std::vector<double> exact_profile(const SineSeriesIC& ic, double gamma, double k_gamma,
                                  std::span<const double> xs, double t,
                                  double tol = kDefaultExactTol);

}  // namespace fracstep
