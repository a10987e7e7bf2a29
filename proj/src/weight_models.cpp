#include "minclique/weight_models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "minclique/errors.hpp"
#include "minclique/quadrature.hpp"

namespace minclique {

using numerics::PrecisionConfig;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive(int v, const char* what) {
  if (v < 1) throw DomainError(std::string(what) + " must be >= 1");
}

}  // namespace

WeightModel WeightModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw DomainError("exponential rate must be positive and finite");
  WeightModel m;
  m.kind_ = Kind::Exponential;
  m.rate_ = rate;
  return m;
}

WeightModel WeightModel::parse(std::string_view text) {
  if (text == "uniform" || text == "uniform01") return uniform();
  if (text == "exp" || text == "exponential") return exponential(1.0);
  if (text.starts_with("exp:")) {
    const auto digits = text.substr(4);
    double rate = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rate);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      throw DomainError("cannot parse exponential rate '" + std::string(digits) + "'");
    return exponential(rate);
  }
  throw DomainError("unknown weight distribution '" + std::string(text) +
                    "' (expected uniform or exp:RATE)");
}

std::string WeightModel::describe() const {
  if (is_uniform()) return "uniform";
  std::ostringstream os;
  os.precision(17);
  os << "exp:" << rate_;
  return os.str();
}

double WeightModel::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf of NaN");
  if (x <= 0.0) return 0.0;
  if (is_uniform()) return std::min(x, 1.0);
  return -std::expm1(-rate_ * x);
}

double WeightModel::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (is_uniform()) return x <= 1.0 ? 1.0 : 0.0;
  return rate_ * std::exp(-rate_ * x);
}

double WeightModel::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile requires u in [0, 1]");
  if (is_uniform()) return u;
  return -std::log1p(-u) / rate_;
}

// ---------------------------------------------------------------------------

double conv_cdf(const ConvolutionSpec& spec, double r, const PrecisionConfig& cfg) {
  require_positive(spec.s, "convolution order s");
  if (spec.model.is_uniform()) return numerics::irwin_hall_cdf(spec.s, r, cfg);
  if (r <= 0.0) return 0.0;
  return numerics::erlang_cdf(spec.s, spec.model.rate() * r);
}

double conv_pdf(const ConvolutionSpec& spec, double r, const PrecisionConfig& cfg) {
  require_positive(spec.s, "convolution order s");
  if (spec.model.is_uniform()) return numerics::irwin_hall_pdf(spec.s, r, cfg);
  if (r < 0.0) return 0.0;
  return spec.model.rate() * numerics::erlang_pdf(spec.s, spec.model.rate() * r);
}

double conv_log_cdf(const ConvolutionSpec& spec, double r, const PrecisionConfig& cfg) {
  require_positive(spec.s, "convolution order s");
  if (spec.model.is_uniform()) return numerics::irwin_hall_log_cdf(spec.s, r, cfg);
  if (r <= 0.0) return kNegInf;
  return numerics::erlang_log_cdf(spec.s, spec.model.rate() * r);
}

double conv_log_pdf(const ConvolutionSpec& spec, double r, const PrecisionConfig& cfg) {
  require_positive(spec.s, "convolution order s");
  if (spec.model.is_uniform()) return numerics::irwin_hall_log_pdf(spec.s, r, cfg);
  if (r < 0.0) return kNegInf;
  return std::log(spec.model.rate()) + numerics::erlang_log_pdf(spec.s, spec.model.rate() * r);
}

// ---------------------------------------------------------------------------

double log_pair_prob_closed(int a, int b, double w) {
  require_positive(a, "shared edge count a");
  require_positive(b, "unique edge count b");
  if (!(w >= 0.0)) throw DomainError("pair probability requires w >= 0");
  if (w > 1.0)
    throw ValidityError("closed-form pair probability requires w <= 1; use quadrature beyond");
  if (w == 0.0) return kNegInf;
  const int s = a + 2 * b;
  return s * std::log(w) - numerics::log_factorial(s) + numerics::log_binomial(2 * b, b);
}

double pair_prob_closed(int a, int b, double w) { return std::exp(log_pair_prob_closed(a, b, w)); }

namespace {

// Points in (0, min(w, a)) where t or w - t is an integer; the uniform
// integrand is a polynomial between consecutive ones.
std::vector<double> uniform_breakpoints(int a, double w) {
  const double top = std::min(w, static_cast<double>(a));
  std::vector<double> bp{0.0, top};
  for (int j = 1; j < w + 1.0; ++j) {
    if (j < top) bp.push_back(j);
    if (w - j > 0.0 && w - j < top) bp.push_back(w - j);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

}  // namespace

double log_pair_prob_quadrature(const WeightModel& model, int a, int b, double w,
                                const PrecisionConfig& cfg) {
  require_positive(a, "shared edge count a");
  require_positive(b, "unique edge count b");
  if (!(w >= 0.0)) throw DomainError("pair probability requires w >= 0");
  cfg.validate();
  if (w == 0.0) return kNegInf;

  const bool uniform = model.is_uniform();
  const double x = uniform ? w : model.rate() * w;
  if (uniform && x >= a + b) return 0.0;

  // Upper bound on the integral in both laws, used to keep it near unit scale.
  const int s = a + 2 * b;
  const double log_scale = std::min(
      0.0, s * std::log(x) - numerics::log_factorial(s) + numerics::log_binomial(2 * b, b));

  auto integrand = [&](double t) {
    if (t <= 0.0 || t >= x) return 0.0;
    double lf, lF;
    if (uniform) {
      lf = numerics::irwin_hall_log_pdf(a, t, cfg);
      lF = numerics::irwin_hall_log_cdf(b, x - t, cfg);
    } else {
      lf = numerics::erlang_log_pdf(a, t);
      lF = numerics::erlang_log_cdf(b, x - t);
    }
    return std::exp(lf + 2.0 * lF - log_scale);
  };

  std::vector<double> bp;
  if (uniform) {
    bp = uniform_breakpoints(a, x);
  } else {
    // Split at the density mode so each panel is unimodal.
    bp = {0.0, x};
    if (a > 1 && a - 1.0 < x) bp.insert(bp.begin() + 1, a - 1.0);
  }

  numerics::QuadratureOptions opts;
  opts.rel_tol = cfg.quad_rel_tol;
  try {
    const auto r = numerics::integrate(integrand, bp, opts);
    if (!(r.value > 0.0)) return kNegInf;
    return std::min(0.0, std::log(r.value) + log_scale);
  } catch (const QuadratureError& e) {
    throw QuadratureError(std::string("pair probability (a=") + std::to_string(a) +
                              ", b=" + std::to_string(b) + "): " + e.what(),
                          std::exp(std::log(std::max(e.best_estimate(), 1e-300)) + log_scale),
                          e.achieved_tolerance());
  }
}

double pair_prob_quadrature(const WeightModel& model, int a, int b, double w,
                            const PrecisionConfig& cfg) {
  return std::exp(log_pair_prob_quadrature(model, a, b, w, cfg));
}

}  // namespace minclique
