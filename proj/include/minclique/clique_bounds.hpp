#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minclique/numerics.hpp"
#include "minclique/weight_models.hpp"

namespace minclique {

using numerics::PrecisionConfig;
using numerics::SignedLogReal;

/// K_k inside the complete graph K_n with i.i.d. edge weights.
struct CliqueInstance {
  std::int64_t n = 0;
  int k = 3;
  WeightModel model;

  /// Number of edges of the clique, C(k, 2).
  int m() const noexcept { return k * (k - 1) / 2; }
  /// Throws DomainError unless k >= 3 and n >= k.
  void validate() const;
};

struct BoundFlags {
  bool closed_form_w_le_1 = false;  // uniform weights, w <= 1: exact polynomial formulas
  bool thm2_hypothesis = false;     // simplified-bound hypothesis holds at this w
  bool quadrature_used = false;     // pair probabilities came from quadrature
  bool valid = true;                // false when quadrature failed; bounds widened to [0, 1]
};

/// Everything computed for one weight threshold w.
///
/// Bounds are on the CDF scale F(w) = P(W < w): the Poisson surrogate gives
/// |P(W >= w) - exp(-lambda)| <= b1 + b2, hence
///   lower_raw = 1 - exp(-lambda) - (b1 + b2),  upper_raw = 1 - exp(-lambda) + (b1 + b2),
/// and lower/upper are those clamped to [0, 1].
struct BoundReport {
  double w = 0.0;
  double z = 0.0;      // w * n^(2/(k-1))
  double p = 0.0;      // P(one fixed copy weighs at most w); may underflow
  double log_p = 0.0;  // ln p, finite wherever p > 0 mathematically
  SignedLogReal lambda;
  SignedLogReal b1;
  SignedLogReal b2;
  double lower_raw = 0.0;
  double upper_raw = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> simplified_bound;
  BoundFlags flags;
  std::string note;
};

/// One row of the bound-quality table.
struct TableRow {
  int k = 0;
  std::int64_t n = 0;
  double col_005 = 0.0;  // monotone lower bound at the w where the upper bound is 0.05
  double mu_hat = 0.0;   // asymptotic mean estimate
  double lb_at_mu = 0.0;
  double ub_at_mu = 0.0;
  std::optional<double> col_095;  // upper bound where the monotone lower bound reaches 0.95
  double max_gap = 0.0;           // sup over w of upper - monotone lower

  // Diagnostics.
  double w_005 = 0.0;
  std::optional<double> w_095;
  double w_max_gap = 0.0;
  double w_lower_peak = 0.0;
  double lower_peak = 0.0;  // sup of the monotone lower bound on (0, 1]
  bool gap_is_one_minus_peak = false;
};

/// ln p and p for one copy: conv_cdf of m edges at w.
double single_prob(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});
double log_single_prob(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});

/// lambda = C(n, k) p.
SignedLogReal lambda(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});

/// Number of k-cliques sharing exactly ell vertices with a fixed one,
/// C(k, ell) C(n-k, k-ell), for 2 <= ell <= k.
SignedLogReal u_count(const CliqueInstance& inst, int ell);

/// Edges of one copy not shared with another copy meeting it in ell vertices.
int m_ell(int k, int ell);

SignedLogReal b1(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});
/// Throws QuadratureError when a pair probability fails to converge.
SignedLogReal b2(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});

/// Full bound evaluation. Uniform weights with w <= 1 use the closed forms;
/// otherwise (w > 1, or exponential weights) the Irwin–Hall / Erlang CDF and
/// quadrature pair probabilities are used and flagged.
BoundReport cdf_bounds(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});

/// z = w n^(2/(k-1)) and its inverse.
double scaled_weight(const CliqueInstance& inst, double w);
double weight_from_scaled(const CliqueInstance& inst, double z);

/// Largest w satisfying the simplified-bound hypothesis:
/// min(n^(-2/k), exp(-(k-1)/(k-2))).
double simplified_bound_cap(const CliqueInstance& inst);

/// (8/7) (k-2) / (m! (k-1)!^2) z^(m+k-1) / n, valid under the hypothesis
/// w <= simplified_bound_cap. A violated hypothesis is a ValidityError that
/// names the failing inequality. Only uniform weights are supported.
double simplified_bound(const CliqueInstance& inst, double z);
/// ln of simplified_bound, finite where the bound underflows a double (-inf at z = 0).
double log_simplified_bound(const CliqueInstance& inst, double z);

struct VTerm {
  int ell = 0;
  SignedLogReal v;        // zero for ell = k
  SignedLogReal v_prime;
};

/// v_ell = C(k,ell) n^(k-ell)/(k-ell)! p w^(m_ell)/(k-1)! for 2 <= ell <= k-1,
/// v'_ell = C(k,ell) n^(k-ell)/(k-ell)! p^2 for 2 <= ell <= k.
std::vector<VTerm> v_profile(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});
/// C(n,k) sum_{ell=2}^{k-1} v_ell.
SignedLogReal b2_prime(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});
/// C(n,k) sum_{ell=2}^{k} v'_ell.
SignedLogReal b1_prime(const CliqueInstance& inst, double w, const PrecisionConfig& cfg = {});

/// Replace each lower bound by the running maximum over the grid. Idempotent.
void monotonize_lower(std::vector<BoundReport>& curve);

/// Reports on a strictly increasing grid, evaluated concurrently and merged by
/// index, with the lower bound monotonized.
std::vector<BoundReport> cdf_curve(const CliqueInstance& inst, const std::vector<double>& w_grid,
                                   const PrecisionConfig& cfg = {});

/// Table statistics on the closed-form domain (0, 1]; uniform weights only.
/// An asymptotic mean above 1 is a ValidityError.
TableRow table_stats(const CliqueInstance& inst, const PrecisionConfig& cfg = {});

enum class Tail { Lower, Upper };
enum class Verdict { Significant, NotSignificant, Indeterminate };

std::string to_string(Tail t);
std::string to_string(Verdict v);
Tail parse_tail(const std::string& text);

struct SignificanceResult {
  Verdict verdict = Verdict::Indeterminate;
  Tail tail = Tail::Lower;
  double alpha = 0.05;
  double observed_w = 0.0;
  double cdf_lower = 0.0;  // bounds on F(observed_w)
  double cdf_upper = 0.0;
  double p_value_lower = 0.0;  // bounds on the tail probability
  double p_value_upper = 1.0;
  std::string explanation;
};

/// Lower tail: significant iff F+(w) <= alpha, not significant iff F-(w) > alpha.
/// Upper tail: significant iff 1 - F-(w) <= alpha, not significant iff 1 - F+(w) > alpha.
/// Anything in between, or a failed evaluation, is indeterminate.
SignificanceResult significance_test(const CliqueInstance& inst, double observed_w, Tail tail,
                                     double alpha, const PrecisionConfig& cfg = {});

}  // namespace minclique
