#pragma once

// Discretization weights of the Riemann-Liouville operator.
//
// A formula family is identified by its generating function
//
//     omega(z, alpha) = sum_k w_k z^k
//
// and the weights w_k are the Taylor coefficients about z = 0. The solver
// consumes them as the kernel of the discrete memory convolution.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fracstep {

enum class FormulaFamily { bdf1, bdf2, bdf3, ng2 };

/// Formal order p of the discretization formula.
int formula_order(FormulaFamily family) noexcept;

std::string_view to_string(FormulaFamily family) noexcept;

/// Accepts "bdf1", "bdf2", "bdf3", "ng2" (case-insensitive).
/// Throws std::invalid_argument for anything else.
FormulaFamily parse_family(std::string_view name);

/// Polynomial whose alpha-th power is the generating function (for NG2 the
/// BDF1 base, 1 - z). Coefficients in ascending powers of z.
std::span<const double> base_polynomial(FormulaFamily family) noexcept;

/// Taylor coefficients g_0..g_{count-1} of f(z)^alpha, where f is given by its
/// leading coefficients (f[0] != 0; missing higher coefficients are zero).
///
/// Uses the J.C.P. Miller recurrence obtained from f g' = alpha f' g:
///   g_k = 1/(k f_0) * sum_{j=1}^{k} (j alpha - (k - j)) f_j g_{k-j}
std::vector<double> power_series_pow(std::span<const double> f, double alpha,
                                     std::size_t count);

/// Omega_0..Omega_{count-1}: expansion of (ln xi / (xi - 1))^alpha in powers
/// of (1 - xi).
std::vector<double> newton_gregory_omegas(double alpha, int count);

/// Closed-form value of omega(z, alpha). Throws std::domain_error when the
/// polynomial base is not positive at z and alpha is not an integer.
double eval_generating_function(FormulaFamily family, double alpha, double z);

/// Append-only table of weights w_0..w_K for one (family, alpha) pair.
///
/// Growing the table never touches entries that are already present, so a
/// published prefix can be read concurrently while a single owner extends
/// the capacity of its own copy.
class CoefficientTable {
 public:
  /// Throws std::invalid_argument unless 0 <= alpha < 2 (alpha = 0 is the
  /// classical gamma = 1 limit, where the table is (1, 0, 0, ...)).
  CoefficientTable(FormulaFamily family, double alpha, std::size_t capacity = 0);

  FormulaFamily family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }

  /// Largest available index K; weights() has K + 1 entries.
  std::size_t capacity() const noexcept { return weights_.size() - 1; }

  /// Extends the table to at least the given capacity.
  void extend_to(std::size_t capacity);

  double operator[](std::size_t k) const noexcept { return weights_[k]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  void append_one();

  FormulaFamily family_;
  double alpha_;
  // For NG2 this holds the BDF1 stream the correction is applied to.
  std::vector<double> base_stream_;
  std::vector<double> weights_;
  double ng_omega0_ = 1.0;
  double ng_omega1_ = 0.0;
};

/// Validating factory; rejects negative capacity and alpha outside [0, 2).
CoefficientTable build_table(FormulaFamily family, double alpha, long long capacity);

}  // namespace fracstep
