#include "minclique/numerics.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "minclique/errors.hpp"

namespace minclique::numerics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nonneg(std::int64_t n, const char* what) {
  if (n < 0) throw DomainError(std::string(what) + " must be nonnegative");
}

void require_order(int m, const char* fn) {
  if (m < 1) throw DomainError(std::string(fn) + ": m must be >= 1");
}

}  // namespace

void PrecisionConfig::validate() const {
  if (working_digits < 15)
    throw DomainError("working_digits must be >= 15, got " + std::to_string(working_digits));
  if (!(quad_rel_tol > 0.0 && quad_rel_tol <= 1e-6))
    throw DomainError("quad_rel_tol must lie in (0, 1e-6]");
}

// ---------------------------------------------------------------------------
// SignedLogReal

SignedLogReal SignedLogReal::from_real(double x) {
  if (std::isnan(x)) throw DomainError("SignedLogReal from NaN");
  if (x == 0.0) return {};
  return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
}

SignedLogReal SignedLogReal::from_log(double logmag, int sign) {
  if (sign < -1 || sign > 1) throw DomainError("sign must be -1, 0 or +1");
  if (std::isnan(logmag)) throw DomainError("SignedLogReal from NaN log");
  if (sign == 0 || logmag == kNegInf) return {};
  return {sign, logmag};
}

double SignedLogReal::log_abs() const noexcept { return sign_ == 0 ? kNegInf : logmag_; }

double SignedLogReal::to_real() const noexcept {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(logmag_);
}

SignedLogReal SignedLogReal::operator-() const noexcept { return {-sign_, logmag_}; }

SignedLogReal& SignedLogReal::operator+=(const SignedLogReal& rhs) {
  if (rhs.sign_ == 0) return *this;
  if (sign_ == 0) return *this = rhs;
  const bool this_larger = logmag_ >= rhs.logmag_;
  const SignedLogReal& big = this_larger ? *this : rhs;
  const SignedLogReal& small = this_larger ? rhs : *this;
  const double ratio = std::exp(small.logmag_ - big.logmag_);
  if (big.sign_ == small.sign_) {
    *this = SignedLogReal(big.sign_, big.logmag_ + std::log1p(ratio));
  } else if (ratio == 1.0) {
    *this = SignedLogReal();
  } else {
    *this = SignedLogReal(big.sign_, big.logmag_ + std::log1p(-ratio));
  }
  return *this;
}

SignedLogReal& SignedLogReal::operator-=(const SignedLogReal& rhs) { return *this += -rhs; }

SignedLogReal& SignedLogReal::operator*=(const SignedLogReal& rhs) {
  if (sign_ == 0 || rhs.sign_ == 0) return *this = SignedLogReal();
  sign_ *= rhs.sign_;
  logmag_ += rhs.logmag_;
  return *this;
}

SignedLogReal& SignedLogReal::operator/=(const SignedLogReal& rhs) {
  if (rhs.sign_ == 0) throw DomainError("SignedLogReal division by zero");
  if (sign_ == 0) return *this;
  sign_ *= rhs.sign_;
  logmag_ -= rhs.logmag_;
  return *this;
}

SignedLogReal SignedLogReal::pow(double exponent) const {
  if (sign_ < 0) throw DomainError("SignedLogReal::pow of a negative value");
  if (sign_ == 0) {
    if (exponent == 0.0) return one();
    if (exponent < 0.0) throw DomainError("SignedLogReal::pow: zero to a negative power");
    return {};
  }
  return {1, logmag_ * exponent};
}

std::partial_ordering operator<=>(const SignedLogReal& a, const SignedLogReal& b) {
  if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
  if (a.sign_ == 0) return std::partial_ordering::equivalent;
  return a.sign_ > 0 ? a.logmag_ <=> b.logmag_ : b.logmag_ <=> a.logmag_;
}

bool operator==(const SignedLogReal& a, const SignedLogReal& b) {
  return a.sign_ == b.sign_ && (a.sign_ == 0 || a.logmag_ == b.logmag_);
}

SignedLogReal sum(std::span<const SignedLogReal> terms) {
  double peak = kNegInf;
  for (const auto& t : terms)
    if (!t.is_zero()) peak = std::max(peak, t.log_abs());
  if (peak == kNegInf) return SignedLogReal::zero();
  // Accumulate positive and negative parts separately against the peak.
  double pos = 0.0, neg = 0.0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const double scaled = std::exp(t.log_abs() - peak);
    (t.sign() > 0 ? pos : neg) += scaled;
  }
  if (pos == neg) return SignedLogReal::zero();
  const double net = pos - neg;
  return SignedLogReal::from_log(peak + std::log(std::fabs(net)), net > 0 ? 1 : -1);
}

// ---------------------------------------------------------------------------
// Factorials, binomials, gamma

namespace {

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (std::uint64_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
  return f;
}();

// Stirling series for ln Γ(x), x large; terms through x^-7.
double stirling_log_gamma(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + double(i));
  return a;
}

}  // namespace

double log_factorial(std::int64_t n) {
  require_nonneg(n, "log_factorial argument");
  if (n <= 20) return std::log(static_cast<double>(kFactorials[static_cast<std::size_t>(n)]));
  return stirling_log_gamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  require_nonneg(n, "log_binomial n");
  require_nonneg(k, "log_binomial k");
  if (k > n)
    throw DomainError("log_binomial: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  const std::int64_t kk = std::min(k, n - k);
  if (kk == 0) return 0.0;

  // Exact integer path while the running value stays below 2^53.
  constexpr unsigned __int128 kLimit = static_cast<unsigned __int128>(1) << 53;
  unsigned __int128 c = 1;
  bool exact = true;
  for (std::int64_t i = 1; i <= kk; ++i) {
    c = c * static_cast<unsigned __int128>(n - kk + i) / static_cast<unsigned __int128>(i);
    if (c >= kLimit) {
      exact = false;
      break;
    }
  }
  if (exact) return std::log(static_cast<double>(static_cast<std::uint64_t>(c)));

  if (kk <= 256) return log_falling_factorial(n, kk) - log_factorial(kk);
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_falling_factorial(std::int64_t n, std::int64_t j) {
  require_nonneg(n, "log_falling_factorial n");
  require_nonneg(j, "log_falling_factorial j");
  if (j > n) throw DomainError("log_falling_factorial: j exceeds n");
  if (j <= 256) {
    double s = 0.0;
    for (std::int64_t i = 0; i < j; ++i) s += std::log(static_cast<double>(n - i));
    return s;
  }
  return log_factorial(n) - log_factorial(n - j);
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  if (x < 0.5) {
    // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) * std::exp(-t) *
         lanczos_sum(xm1);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  if (x >= 20.0) return stirling_log_gamma(x);
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(xm1));
}

// ---------------------------------------------------------------------------
// Irwin–Hall

namespace {

// (1/power!) * sum_{i=0}^{floor w} (-1)^i C(m,i) (w-i)^power, evaluated with
// exact integer coefficients and `digits` significant digits.
double irwin_hall_alternating(int m, int power, double w, int digits) {
  const auto bits = static_cast<mp_bitcnt_t>(std::ceil(digits * 3.3219280948873623)) + 64;
  const mpf_class x(w, bits);
  mpf_class acc(0, bits), base(0, bits), term(0, bits);
  mpz_class binom;
  const long top = std::min<long>(static_cast<long>(std::floor(w)), m);
  for (long i = 0; i <= top; ++i) {
    base = x - static_cast<unsigned long>(i);
    mpf_pow_ui(term.get_mpf_t(), base.get_mpf_t(), static_cast<unsigned long>(power));
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(i));
    term *= mpf_class(binom, bits);
    if (i % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(power));
  acc /= mpf_class(fact, bits);
  return acc.get_d();
}

// w^s / s! for 0 <= w <= 1 in the log domain.
double log_simplex(int s, double w) {
  if (s == 0) return 0.0;
  if (w == 0.0) return kNegInf;
  return s * std::log(w) - log_factorial(s);
}

}  // namespace

double irwin_hall_cdf(int m, double w, const PrecisionConfig& cfg) {
  require_order(m, "irwin_hall_cdf");
  if (w <= 0.0) return 0.0;
  if (w >= m) return 1.0;
  if (w <= 1.0) {
    if (m <= 20) return std::pow(w, m) / static_cast<double>(kFactorials[static_cast<std::size_t>(m)]);
    return std::exp(log_simplex(m, w));
  }
  cfg.validate();
  return std::clamp(irwin_hall_alternating(m, m, w, cfg.working_digits), 0.0, 1.0);
}

double irwin_hall_pdf(int m, double w, const PrecisionConfig& cfg) {
  require_order(m, "irwin_hall_pdf");
  if (w < 0.0 || w >= m) return 0.0;
  if (w <= 1.0) {
    if (m == 1) return 1.0;
    return std::exp(log_simplex(m - 1, w));
  }
  cfg.validate();
  return std::max(0.0, irwin_hall_alternating(m, m - 1, w, cfg.working_digits));
}

double irwin_hall_log_cdf(int m, double w, const PrecisionConfig& cfg) {
  require_order(m, "irwin_hall_log_cdf");
  if (w <= 0.0) return kNegInf;
  if (w >= m) return 0.0;
  if (w <= 1.0) return log_simplex(m, w);
  return std::log(irwin_hall_cdf(m, w, cfg));
}

double irwin_hall_log_pdf(int m, double w, const PrecisionConfig& cfg) {
  require_order(m, "irwin_hall_log_pdf");
  if (w < 0.0 || w >= m) return kNegInf;
  if (w <= 1.0) return m == 1 ? 0.0 : log_simplex(m - 1, w);
  const double v = irwin_hall_pdf(m, w, cfg);
  return v > 0.0 ? std::log(v) : kNegInf;
}

// ---------------------------------------------------------------------------
// Erlang

namespace {

void require_erlang_args(int m, double w, const char* fn) {
  require_order(m, fn);
  if (w < 0.0 || std::isnan(w)) throw DomainError(std::string(fn) + ": w must be >= 0");
}

// ln P(m, w) by the series e^{-w} w^m / m! * sum_j w^j / ((m+1)...(m+j)).
double log_lower_series(int m, double w) {
  double term = 1.0, acc = 1.0;
  for (int j = 1; j < 100000; ++j) {
    term *= w / (m + j);
    acc += term;
    if (term < acc * 1e-17) break;
  }
  return -w + m * std::log(w) - log_factorial(m) + std::log(acc);
}

// ln Q(m, w) = ln( e^{-w} sum_{i<m} w^i / i! ), all terms positive.
double log_upper_sum(int m, double w) {
  const double lw = std::log(w);
  double peak = kNegInf;
  for (int i = 0; i < m; ++i) peak = std::max(peak, i * lw - log_factorial(i));
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += std::exp(i * lw - log_factorial(i) - peak);
  return -w + peak + std::log(acc);
}

}  // namespace

double erlang_log_cdf(int m, double w) {
  require_erlang_args(m, w, "erlang_log_cdf");
  if (w == 0.0) return kNegInf;
  if (w < m) return std::min(0.0, log_lower_series(m, w));
  return std::log1p(-std::exp(log_upper_sum(m, w)));
}

double erlang_cdf(int m, double w) {
  require_erlang_args(m, w, "erlang_cdf");
  if (w == 0.0) return 0.0;
  if (w < m) return std::min(1.0, std::exp(log_lower_series(m, w)));
  return -std::expm1(log_upper_sum(m, w));
}

double erlang_log_pdf(int m, double w) {
  require_erlang_args(m, w, "erlang_log_pdf");
  if (w == 0.0) return m == 1 ? 0.0 : kNegInf;
  return (m - 1) * std::log(w) - w - log_factorial(m - 1);
}

double erlang_pdf(int m, double w) { return std::exp(erlang_log_pdf(m, w)); }

}  // namespace minclique::numerics
