#pragma once

#include <compare>
#include <cstdint>
#include <span>

namespace minclique::numerics {

/// Controls the extended-precision Irwin–Hall evaluation and the adaptive
/// quadrature used for overlapping-pair probabilities.
struct PrecisionConfig {
  int working_digits = 50;     // significant decimal digits, >= 15
  double quad_rel_tol = 1e-12;  // in (0, 1e-6]

  /// Throws DomainError when either field is out of range.
  void validate() const;
};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Products and quotients are exact in the log domain; sums use max
/// extraction, so values such as C(10^7, 10) * w^45 stay representable long
/// after a double would have overflowed or underflowed.
class SignedLogReal {
 public:
  constexpr SignedLogReal() = default;

  static SignedLogReal from_real(double x);
  /// sign must be -1, 0 or +1; logmag is ignored when sign is 0.
  static SignedLogReal from_log(double logmag, int sign = 1);
  static constexpr SignedLogReal zero() { return {}; }
  static SignedLogReal one() { return from_log(0.0); }

  int sign() const noexcept { return sign_; }
  /// Natural log of |x|; -infinity for zero.
  double log_abs() const noexcept;
  bool is_zero() const noexcept { return sign_ == 0; }

  /// Saturates to +-inf or 0 outside the double range.
  double to_real() const noexcept;

  SignedLogReal operator-() const noexcept;
  SignedLogReal& operator+=(const SignedLogReal& rhs);
  SignedLogReal& operator-=(const SignedLogReal& rhs);
  SignedLogReal& operator*=(const SignedLogReal& rhs);
  SignedLogReal& operator/=(const SignedLogReal& rhs);

  friend SignedLogReal operator+(SignedLogReal a, const SignedLogReal& b) { return a += b; }
  friend SignedLogReal operator-(SignedLogReal a, const SignedLogReal& b) { return a -= b; }
  friend SignedLogReal operator*(SignedLogReal a, const SignedLogReal& b) { return a *= b; }
  friend SignedLogReal operator/(SignedLogReal a, const SignedLogReal& b) { return a /= b; }

  /// Real power of a nonnegative value.
  SignedLogReal pow(double exponent) const;

  friend std::partial_ordering operator<=>(const SignedLogReal& a, const SignedLogReal& b);
  friend bool operator==(const SignedLogReal& a, const SignedLogReal& b);

 private:
  SignedLogReal(int sign, double logmag) : sign_(sign), logmag_(logmag) {}

  int sign_ = 0;
  double logmag_ = 0.0;
};

/// Sum of terms with a single max extraction (log-sum-exp for same-sign terms).
SignedLogReal sum(std::span<const SignedLogReal> terms);

/// ln(n!). Exact table for n <= 20, Stirling series for lnΓ(n+1) beyond.
double log_factorial(std::int64_t n);

/// ln C(n, k); exact when C(n, k) < 2^53. k > n is a DomainError.
double log_binomial(std::int64_t n, std::int64_t k);

/// ln of n (n-1) ... (n-j+1).
double log_falling_factorial(std::int64_t n, std::int64_t j);

/// Γ(x) for x > 0 via an embedded Lanczos approximation (g = 7, 9 terms).
double gamma_fn(double x);

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// CDF of the sum of m i.i.d. uniform [0,1] variables.
///
/// 0 for w <= 0, 1 for w >= m, w^m/m! on [0, 1]; otherwise the alternating
/// sum is formed from exact integer coefficients and evaluated with
/// cfg.working_digits of precision.
double irwin_hall_cdf(int m, double w, const PrecisionConfig& cfg = {});
double irwin_hall_pdf(int m, double w, const PrecisionConfig& cfg = {});
/// Natural logs of the above; -infinity where the value is 0.
double irwin_hall_log_cdf(int m, double w, const PrecisionConfig& cfg = {});
double irwin_hall_log_pdf(int m, double w, const PrecisionConfig& cfg = {});

/// CDF of the sum of m unit-rate exponentials, i.e. the regularized lower
/// incomplete gamma P(m, w). Series below the mode, complement sum above it.
double erlang_cdf(int m, double w);
double erlang_pdf(int m, double w);
double erlang_log_cdf(int m, double w);
double erlang_log_pdf(int m, double w);

}  // namespace minclique::numerics
