#include "fracstep/mittag_leffler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracstep {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series A(x) for Gamma(x + 1), x >= -1/2.
double lanczos_sum(double x) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  return a;
}

// Gamma(x) for x in [1, 2].
double gamma_unit_interval(double x) {
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, xm + 0.5) * std::exp(-t) * lanczos_sum(xm);
}

// sin(pi y) with exact zeros at the integers.
double sin_pi(double y) {
  double r = std::fmod(y, 2.0);
  if (r == std::floor(r)) return 0.0;
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  return std::sin(kPi * r);
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_arguments(double gamma, double z) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Mittag-Leffler: gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  if (!std::isfinite(z)) throw std::invalid_argument("Mittag-Leffler: z must be finite");
  if (z > 0.0) throw std::invalid_argument("Mittag-Leffler: only z <= 0 is supported");
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma: argument must be positive");
  if (x >= 1.0 && x <= 2.0) return std::log(gamma_unit_interval(x));
  if (x < 0.5) {
    // Gamma(x) = Gamma(x + 1) / x keeps the Lanczos argument in range.
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (xm + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm));
}

double gamma_function(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("gamma_function: argument must be finite");
  if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("gamma_function: pole at non-positive integer");
  if (x < 0.5) return kPi / (sin_pi(x) * gamma_function(1.0 - x));
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  if (x < 1.0) return gamma_unit_interval(x + 1.0) / x;
  // Reduce to [1, 2] and multiply back up; the relative error grows by at
  // most one rounding per factor.
  double base = x;
  double product = 1.0;
  while (base > 2.0) {
    base -= 1.0;
    product *= base;
  }
  return product * gamma_unit_interval(base);
}

double reciprocal_gamma(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("reciprocal_gamma: argument must be finite");
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x > 171.7) return std::exp(-log_gamma(x));
  if (x < 0.5) {
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    return sin_pi(x) * gamma_function(1.0 - x) / kPi;
  }
  return 1.0 / gamma_function(x);
}

void MLEvalConfig::validate() const {
  if (!(series_cutoff > 0.0)) throw std::invalid_argument("MLEvalConfig: series_cutoff must be > 0");
  if (!(series_tol > 0.0)) throw std::invalid_argument("MLEvalConfig: series_tol must be > 0");
  if (asymptotic_terms < 1) throw std::invalid_argument("MLEvalConfig: asymptotic_terms must be >= 1");
  if (!(cancellation_limit >= 1.0)) throw std::invalid_argument("MLEvalConfig: cancellation_limit must be >= 1");
  if (!(asymptotic_tol > 0.0)) throw std::invalid_argument("MLEvalConfig: asymptotic_tol must be > 0");
}

MittagLeffler::MittagLeffler(double gamma, MLEvalConfig config) : gamma_(gamma), config_(config) {
  check_arguments(gamma, 0.0);
  config_.validate();

  // Enough series terms for gamma n ~ 80, which covers every z the
  // cancellation guard lets through.
  const auto series_terms = static_cast<std::size_t>(std::min(20000.0, std::ceil(80.0 / gamma) + 16.0));
  series_rgamma_.resize(series_terms);
  for (std::size_t n = 0; n < series_terms; ++n) {
    series_rgamma_[n] = reciprocal_gamma(gamma * static_cast<double>(n) + 1.0);
  }

  const auto asym_terms = static_cast<std::size_t>(config_.asymptotic_terms);
  asym_log_mag_.resize(asym_terms + 1);
  asym_sin_.resize(asym_terms + 1);
  for (std::size_t n = 1; n <= asym_terms; ++n) {
    const double y = gamma * static_cast<double>(n);
    asym_log_mag_[n] = log_gamma(y) - std::log(kPi);
    asym_sin_[n] = sin_pi(y);
  }
}

MittagLeffler::SeriesResult MittagLeffler::power_series(double z) const {
  CompensatedSum sum;
  double abs_sum = 0.0;
  double power = 1.0;
  for (std::size_t n = 0; n < series_rgamma_.size(); ++n) {
    const double term = power * series_rgamma_[n];
    sum.add(term);
    abs_sum += std::abs(term);
    if (abs_sum > config_.cancellation_limit || !std::isfinite(abs_sum)) {
      return {sum.value(), abs_sum, false};
    }
    // Terms decrease monotonically once gamma n exceeds |z|^(1/gamma).
    if (n > 0 && std::abs(term) <= config_.series_tol * std::abs(sum.value()) &&
        std::pow(std::abs(z), 1.0 / gamma_) < gamma_ * static_cast<double>(n) + 1.0) {
      return {sum.value(), abs_sum, true};
    }
    power *= z;
  }
  return {sum.value(), abs_sum, false};
}

MittagLeffler::AsymptoticResult MittagLeffler::asymptotic(double z) const {
  if (z == 0.0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), false};
  const double log_abs_z = std::log(std::abs(z));
  CompensatedSum sum;
  double smallest = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  const std::size_t terms = asym_log_mag_.size() - 1;
  for (std::size_t n = 1; n <= terms; ++n) {
    const double bound = std::exp(asym_log_mag_[n] - static_cast<double>(n) * log_abs_z);
    if (bound > previous) break;  // optimal truncation point passed
    smallest = std::min(smallest, bound);
    previous = bound;
    // z^-n has sign (-1)^n for z < 0.
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum.add(-sign * bound * asym_sin_[n]);
  }
  return {sum.value(), smallest, smallest <= config_.asymptotic_tol};
}

double MittagLeffler::laplace_integral(double z) const {
  const double x = -z;
  if (x == 0.0) return 1.0;
  if (gamma_ == 1.0) return std::exp(z);
  const double t = std::pow(x, 1.0 / gamma_);
  const double cos_gp = std::cos(kPi * gamma_);
  const double prefactor = std::sin(kPi * gamma_) / (kPi * gamma_);

  // In s = ln u the integrand is analytic in |Im s| < min(pi (1 - g), g pi / 2);
  // the trapezoidal error is then ~ exp(-2 pi w / h).
  const double width = 0.9 * std::min(kPi * (1.0 - gamma_), 0.5 * kPi * gamma_);
  const double h = 2.0 * kPi * width / 42.0;
  const double s_hi = std::min(gamma_ * std::log(60.0 / t), 40.0);
  const double s_lo = std::min(s_hi, 0.0) - 42.0;

  CompensatedSum sum;
  const auto count = static_cast<long>(std::ceil((s_hi - s_lo) / h));
  for (long i = 0; i <= count; ++i) {
    const double s = s_lo + static_cast<double>(i) * h;
    const double u = std::exp(s);
    const double decay = std::exp(-t * std::exp(s / gamma_));
    sum.add(decay * u / (u * u + 2.0 * u * cos_gp + 1.0));
  }
  return prefactor * h * sum.value();
}

MLBranch MittagLeffler::branch(double z) const {
  check_arguments(gamma_, z);
  if (gamma_ == 1.0) return MLBranch::exponential;
  if (std::abs(z) <= config_.series_cutoff && power_series(z).accepted) return MLBranch::series;
  if (z != 0.0 && asymptotic(z).accepted) return MLBranch::asymptotic;
  return MLBranch::integral;
}

double MittagLeffler::operator()(double z) const {
  check_arguments(gamma_, z);
  if (gamma_ == 1.0) return std::exp(z);
  if (z == 0.0) return 1.0;
  if (std::abs(z) <= config_.series_cutoff) {
    const auto series = power_series(z);
    if (series.accepted) return series.value;
  }
  const auto asym = asymptotic(z);
  if (asym.accepted) return asym.value;
  return laplace_integral(z);
}

MLBranch ml_branch(double gamma, double z, const MLEvalConfig& config) {
  check_arguments(gamma, z);
  return MittagLeffler(gamma, config).branch(z);
}

double ml_eval(double gamma, double z, const MLEvalConfig& config) {
  check_arguments(gamma, z);
  if (gamma == 1.0) return std::exp(z);
  if (z == 0.0) return 1.0;
  return MittagLeffler(gamma, config)(z);
}

std::vector<double> ml_decay_profile(double gamma, double rate, std::span<const double> times,
                                     const MLEvalConfig& config) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("ml_decay_profile: rate must be >= 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw std::invalid_argument("ml_decay_profile: times must be non-negative");
    }
    if (i > 0 && times[i] < times[i - 1]) throw std::invalid_argument("ml_decay_profile: times must be ascending");
  }
  const MittagLeffler ml(gamma, config);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(ml(-rate * std::pow(t, gamma)));
  return out;
}

}  // namespace fracstep
