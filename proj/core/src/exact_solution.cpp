#include "fracstep/exact_solution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracstep {
namespace {

constexpr double kPi = std::numbers::pi;

void check_parameters(double gamma, double k_gamma, double t, double tol) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("exact solution: gamma must lie in (0, 1]");
  if (!(k_gamma > 0.0) || !std::isfinite(k_gamma)) throw std::invalid_argument("exact solution: k_gamma must be > 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("exact solution: t must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("exact solution: tol must be > 0");
}

// Number of leading modes needed so that the rest sums to less than tol.
std::size_t modes_needed(const SineSeriesIC& ic, double tol) {
  double remaining = ic.tail_bound;
  for (const auto& m : ic.modes) remaining += std::abs(m.amplitude);
  std::size_t used = 0;
  while (used < ic.modes.size() && remaining >= tol) {
    remaining -= std::abs(ic.modes[used].amplitude);
    ++used;
  }
  if (remaining >= tol) {
    throw std::invalid_argument("exact solution: initial condition '" + ic.description +
                                "' lists too few modes for tol " + std::to_string(tol));
  }
  return used;
}

double sum_modes(const SineSeriesIC& ic, std::size_t used, const MittagLeffler& ml, double k_gamma,
                 double x, double t) {
  if (x == 0.0 || x == 1.0) return 0.0;
  const double t_pow = std::pow(t, ml.gamma());
  double sum = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const auto& [n, b] = ic.modes[i];
    const double q = static_cast<double>(n) * kPi;
    sum += b * std::sin(q * x) * ml(-k_gamma * q * q * t_pow);
  }
  return sum;
}

}  // namespace

void SineSeriesIC::validate() const {
  int previous = 0;
  for (const auto& m : modes) {
    if (m.n < 1 || m.n <= previous) throw std::invalid_argument("SineSeriesIC: modes must be strictly increasing and >= 1");
    if (!std::isfinite(m.amplitude)) throw std::invalid_argument("SineSeriesIC: amplitudes must be finite");
    previous = m.n;
  }
  if (!(tail_bound >= 0.0)) throw std::invalid_argument("SineSeriesIC: tail_bound must be >= 0");
}

SineSeriesIC parabolic_ic(double tail_tol) {
  if (!(tail_tol > 0.0)) throw std::invalid_argument("parabolic_ic: tail_tol must be > 0");
  constexpr double scale = 8.0 / (kPi * kPi * kPi);
  SineSeriesIC ic;
  ic.description = "x*(1-x)";
  // Sum over odd n > N of 1/n^3 is at most 1 / (4 N^2).
  int n = 1;
  for (;; n += 2) {
    ic.modes.push_back({n, scale / (static_cast<double>(n) * n * n)});
    const double tail = scale / (4.0 * static_cast<double>(n) * n);
    if (tail < tail_tol) {
      ic.tail_bound = tail;
      break;
    }
  }
  return ic;
}

SineSeriesIC single_mode_ic(int n) {
  if (n < 1) throw std::invalid_argument("single_mode_ic: n must be >= 1");
  return SineSeriesIC{{{n, 1.0}}, 0.0, "sin(" + std::to_string(n) + "*pi*x)"};
}

double exact_eval(const SineSeriesIC& ic, double gamma, double k_gamma, double x, double t, double tol) {
  check_parameters(gamma, k_gamma, t, tol);
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("exact_eval: x must lie in [0, 1]");
  ic.validate();
  const std::size_t used = modes_needed(ic, tol);
  return sum_modes(ic, used, MittagLeffler(gamma), k_gamma, x, t);
}

std::vector<double> exact_profile(const SineSeriesIC& ic, double gamma, double k_gamma,
                                  std::span<const double> xs, double t, double tol) {
  check_parameters(gamma, k_gamma, t, tol);
  for (double x : xs) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("exact_profile: x must lie in [0, 1]");
  }
  ic.validate();
  const std::size_t used = modes_needed(ic, tol);
  const MittagLeffler ml(gamma);
  // E_g factors depend only on the mode, so evaluate them once.
  const double t_pow = std::pow(t, gamma);
  std::vector<double> decay(used);
  for (std::size_t i = 0; i < used; ++i) {
    const double q = static_cast<double>(ic.modes[i].n) * kPi;
    decay[i] = ic.modes[i].amplitude * ml(-k_gamma * q * q * t_pow);
  }
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    double sum = 0.0;
    if (x != 0.0 && x != 1.0) {
      for (std::size_t i = 0; i < used; ++i) {
        sum += decay[i] * std::sin(static_cast<double>(ic.modes[i].n) * kPi * x);
      }
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace fracstep
