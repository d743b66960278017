#include "fracstep/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracstep {
namespace {

constexpr std::array<double, 2> kBdf1Base{1.0, -1.0};
constexpr std::array<double, 3> kBdf2Base{1.5, -2.0, 0.5};
constexpr std::array<double, 4> kBdf3Base{11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0};

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 2.0) {
    throw std::invalid_argument("alpha must lie in [0, 2), got " + std::to_string(alpha));
  }
}

// Next coefficient g_k of f^alpha given g_0..g_{k-1}.
double miller_step(std::span<const double> f, double alpha, std::span<const double> g,
                   std::size_t k) {
  const std::size_t upper = std::min(k, f.size() - 1);
  double acc = 0.0;
  for (std::size_t j = 1; j <= upper; ++j) {
    acc += (static_cast<double>(j) * alpha - static_cast<double>(k - j)) * f[j] * g[k - j];
  }
  return acc / (static_cast<double>(k) * f[0]);
}

}  // namespace

int formula_order(FormulaFamily family) noexcept {
  switch (family) {
    case FormulaFamily::bdf1: return 1;
    case FormulaFamily::bdf2: return 2;
    case FormulaFamily::bdf3: return 3;
    case FormulaFamily::ng2: return 2;
  }
  return 0;
}

std::string_view to_string(FormulaFamily family) noexcept {
  switch (family) {
    case FormulaFamily::bdf1: return "bdf1";
    case FormulaFamily::bdf2: return "bdf2";
    case FormulaFamily::bdf3: return "bdf3";
    case FormulaFamily::ng2: return "ng2";
  }
  return "unknown";
}

FormulaFamily parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bdf1") return FormulaFamily::bdf1;
  if (lower == "bdf2") return FormulaFamily::bdf2;
  if (lower == "bdf3") return FormulaFamily::bdf3;
  if (lower == "ng2") return FormulaFamily::ng2;
  throw std::invalid_argument("unknown formula family '" + std::string(name) + "'");
}

std::span<const double> base_polynomial(FormulaFamily family) noexcept {
  switch (family) {
    case FormulaFamily::bdf2: return kBdf2Base;
    case FormulaFamily::bdf3: return kBdf3Base;
    case FormulaFamily::bdf1:
    case FormulaFamily::ng2: break;
  }
  return kBdf1Base;
}

std::vector<double> power_series_pow(std::span<const double> f, double alpha,
                                     std::size_t count) {
  if (f.empty() || f[0] == 0.0) {
    throw std::invalid_argument("power_series_pow needs a non-zero constant term");
  }
  if (f[0] < 0.0 && alpha != std::floor(alpha)) {
    throw std::domain_error("negative constant term with non-integer exponent");
  }
  std::vector<double> g;
  g.reserve(count);
  if (count == 0) return g;
  g.push_back(std::pow(f[0], alpha));
  for (std::size_t k = 1; k < count; ++k) {
    g.push_back(miller_step(f, alpha, g, k));
  }
  return g;
}

std::vector<double> newton_gregory_omegas(double alpha, int count) {
  if (count < 1) throw std::invalid_argument("newton_gregory_omegas: count must be >= 1");
  if (!std::isfinite(alpha)) throw std::invalid_argument("newton_gregory_omegas: alpha not finite");
  // ln(1 - u) / (-u) = sum_n u^n / (n + 1), with u = 1 - xi.
  std::vector<double> base(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) base[static_cast<std::size_t>(n)] = 1.0 / (n + 1);
  return power_series_pow(base, alpha, static_cast<std::size_t>(count));
}

double eval_generating_function(FormulaFamily family, double alpha, double z) {
  if (!std::isfinite(alpha) || !std::isfinite(z)) {
    throw std::invalid_argument("eval_generating_function: non-finite argument");
  }
  const auto poly = base_polynomial(family);
  double value = 0.0;
  for (std::size_t i = poly.size(); i-- > 0;) value = value * z + poly[i];
  if (value <= 0.0 && alpha != std::floor(alpha)) {
    throw std::domain_error("generating polynomial is not positive at z = " + std::to_string(z));
  }
  double result = std::pow(value, alpha);
  if (family == FormulaFamily::ng2) {
    const double omega1 = alpha / 2.0;
    result *= 1.0 + omega1 * (1.0 - z);
  }
  return result;
}

CoefficientTable::CoefficientTable(FormulaFamily family, double alpha, std::size_t capacity)
    : family_(family), alpha_(alpha) {
  check_alpha(alpha);
  if (family_ == FormulaFamily::ng2) {
    ng_omega0_ = 1.0;
    ng_omega1_ = alpha / 2.0;
  }
  const double w0 = std::pow(base_polynomial(family)[0], alpha);
  base_stream_.push_back(w0);
  weights_.push_back(family_ == FormulaFamily::ng2 ? (ng_omega0_ + ng_omega1_) * w0 : w0);
  extend_to(capacity);
}

void CoefficientTable::extend_to(std::size_t capacity) {
  if (capacity <= this->capacity()) return;
  base_stream_.reserve(capacity + 1);
  weights_.reserve(capacity + 1);
  while (this->capacity() < capacity) append_one();
}

void CoefficientTable::append_one() {
  const std::size_t k = base_stream_.size();
  double next = 0.0;
  if (family_ == FormulaFamily::bdf1 || family_ == FormulaFamily::ng2) {
    next = (1.0 - (alpha_ + 1.0) / static_cast<double>(k)) * base_stream_[k - 1];
  } else {
    next = miller_step(base_polynomial(family_), alpha_, base_stream_, k);
  }
  base_stream_.push_back(next);

  if (family_ == FormulaFamily::ng2) {
    // (1 - z)^alpha * [Omega_0 + Omega_1 (1 - z)]
    weights_.push_back((ng_omega0_ + ng_omega1_) * base_stream_[k] - ng_omega1_ * base_stream_[k - 1]);
  } else {
    weights_.push_back(next);
  }
}

CoefficientTable build_table(FormulaFamily family, double alpha, long long capacity) {
  if (capacity < 0) throw std::invalid_argument("build_table: capacity must be non-negative");
  return CoefficientTable(family, alpha, static_cast<std::size_t>(capacity));
}

}  // namespace fracstep
