#pragma once

#include <string>
#include <string_view>

#include "minclique/numerics.hpp"

namespace minclique {

/// Law of a single edge weight.
///
/// Both laws have a continuous CDF whose right derivative at 0 equals the
/// rate (1 for the uniform law), which is what makes the small-weight
/// asymptotics shared between them after rescaling.
class WeightModel {
 public:
  enum class Kind { Uniform01, Exponential };

  WeightModel() = default;
  static WeightModel uniform() { return {}; }
  /// rate must be positive and finite.
  static WeightModel exponential(double rate = 1.0);
  /// Accepts "uniform", "exp", "exp:RATE".
  static WeightModel parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  bool is_uniform() const noexcept { return kind_ == Kind::Uniform01; }
  /// Round-trips through parse().
  std::string describe() const;

  double cdf(double x) const;
  double pdf(double x) const;
  /// Inverse CDF; u outside [0, 1] is a DomainError.
  double quantile(double u) const;

  friend bool operator==(const WeightModel&, const WeightModel&) = default;

 private:
  Kind kind_ = Kind::Uniform01;
  double rate_ = 1.0;
};

/// Sum of s independent edge weights drawn from model.
struct ConvolutionSpec {
  WeightModel model;
  int s = 1;
};

/// CDF F_s(r) of the s-fold sum: Irwin–Hall for the uniform law, Erlang
/// (rescaled by the rate) for the exponential law.
double conv_cdf(const ConvolutionSpec& spec, double r, const numerics::PrecisionConfig& cfg = {});
double conv_pdf(const ConvolutionSpec& spec, double r, const numerics::PrecisionConfig& cfg = {});
/// ln F_s(r); stays finite where F_s(r) underflows a double.
double conv_log_cdf(const ConvolutionSpec& spec, double r, const numerics::PrecisionConfig& cfg = {});
double conv_log_pdf(const ConvolutionSpec& spec, double r, const numerics::PrecisionConfig& cfg = {});

/// Probability that two overlapping copies, sharing a edges and owning b
/// further edges each, both weigh at most w, for uniform weights and
/// 0 <= w <= 1: w^(a+2b)/(a+2b)! * C(2b, b). w > 1 is a ValidityError.
double pair_prob_closed(int a, int b, double w);
double log_pair_prob_closed(int a, int b, double w);

/// The same probability by adaptive quadrature of
///   ∫_0^w f_a(t) F_b(w - t)^2 dt
/// for any model and w >= 0. The uniform integrand is split wherever t or
/// w - t crosses an integer. Returns exactly 1 once w reaches a + b under the
/// uniform law. Throws QuadratureError on nonconvergence.
double pair_prob_quadrature(const WeightModel& model, int a, int b, double w,
                            const numerics::PrecisionConfig& cfg = {});
/// ln of pair_prob_quadrature, computed with the integrand rescaled so tiny
/// probabilities do not underflow.
double log_pair_prob_quadrature(const WeightModel& model, int a, int b, double w,
                                const numerics::PrecisionConfig& cfg = {});

}  // namespace minclique
