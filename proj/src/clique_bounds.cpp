#include "minclique/clique_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "minclique/detail/parallel.hpp"
#include "minclique/errors.hpp"
#include "minclique/subgraph_tools.hpp"

namespace minclique {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool closed_form(const CliqueInstance& inst, double w) { return inst.model.is_uniform() && w <= 1.0; }

void require_weight(double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weight w must be finite and >= 0");
}

SignedLogReal binom_n_k(const CliqueInstance& inst) {
  return SignedLogReal::from_log(numerics::log_binomial(inst.n, inst.k));
}

// ln P(both copies <= w) for two cliques meeting in ell vertices.
double log_pair(const CliqueInstance& inst, int ell, double w, const PrecisionConfig& cfg,
                bool* quadrature_used) {
  const int a = ell * (ell - 1) / 2;
  const int b = m_ell(inst.k, ell);
  if (closed_form(inst, w)) return log_pair_prob_closed(a, b, w);
  if (quadrature_used) *quadrature_used = true;
  return log_pair_prob_quadrature(inst.model, a, b, w, cfg);
}

SignedLogReal b2_impl(const CliqueInstance& inst, double w, const PrecisionConfig& cfg,
                      bool* quadrature_used) {
  inst.validate();
  require_weight(w);
  if (w == 0.0) return SignedLogReal::zero();
  std::vector<SignedLogReal> terms;
  for (int ell = 2; ell <= inst.k - 1; ++ell) {
    const auto u = u_count(inst, ell);
    if (u.is_zero()) continue;
    terms.push_back(u * SignedLogReal::from_log(log_pair(inst, ell, w, cfg, quadrature_used)));
  }
  return binom_n_k(inst) * numerics::sum(terms);
}

// Nondecreasing root of f(w) = target on [lo, hi]; returns the lower bracket.
std::optional<double> bisect(const std::function<double(double)>& f, double target, double lo,
                             double hi) {
  if (f(hi) < target) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return lo;
}

// Maximizer of f on [a, b] by golden-section search, given a bracketing grid point.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::vector<double> geometric_grid(double w_max, int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = w_max * std::pow(10.0, -6.0 * (1.0 - double(i) / (points - 1)));
  grid.back() = w_max;
  return grid;
}

// Running maximum of the clamped raw lower bound on (0, w_max].
struct LowerEnvelope {
  std::vector<double> grid;
  std::vector<double> prefix_max;  // max of clamped raw lower over grid[0..i]
  double w_peak = 0.0;
  double peak = 0.0;
  std::function<double(double)> raw;

  double eval(double w) const {
    if (w <= 0.0) return 0.0;
    if (w >= w_peak) return peak;
    const auto it = std::upper_bound(grid.begin(), grid.end(), w);
    const double grid_max = it == grid.begin() ? 0.0 : prefix_max[it - grid.begin() - 1];
    return std::max(raw(w), grid_max);
  }
};

LowerEnvelope build_envelope(const CliqueInstance& inst, double w_max, const PrecisionConfig& cfg) {
  LowerEnvelope env;
  env.raw = [inst, cfg](double w) {
    return std::clamp(cdf_bounds(inst, w, cfg).lower_raw, 0.0, 1.0);
  };
  env.grid = geometric_grid(w_max, 4096);
  std::vector<double> values(env.grid.size());
  detail::parallel_for(env.grid.size(), [&](std::size_t i) { values[i] = env.raw(env.grid[i]); });
  env.prefix_max.resize(values.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    env.prefix_max[i] = std::max(i ? env.prefix_max[i - 1] : 0.0, values[i]);
    if (values[i] > values[best]) best = i;
  }
  env.w_peak = env.grid[best];
  env.peak = values[best];
  if (env.peak > 0.0) {
    const double lo = best ? env.grid[best - 1] : 0.0;
    const double hi = best + 1 < env.grid.size() ? env.grid[best + 1] : env.grid[best];
    const auto [wp, fp] = golden_max(env.raw, lo, hi);
    if (fp > env.peak) env.w_peak = wp, env.peak = fp;
  } else {
    env.w_peak = w_max;
  }
  return env;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

void CliqueInstance::validate() const {
  if (k < 3) throw DomainError("clique size k must be >= 3, got " + std::to_string(k));
  if (n < k)
    throw DomainError("host order n = " + std::to_string(n) + " is smaller than k = " + std::to_string(k));
}

int m_ell(int k, int ell) { return k * (k - 1) / 2 - ell * (ell - 1) / 2; }

double log_single_prob(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  inst.validate();
  require_weight(w);
  if (w == 0.0) return kNegInf;
  const int m = inst.m();
  if (closed_form(inst, w)) return m * std::log(w) - numerics::log_factorial(m);
  return conv_log_cdf({inst.model, m}, w, cfg);
}

double single_prob(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  return std::exp(log_single_prob(inst, w, cfg));
}

SignedLogReal lambda(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  return binom_n_k(inst) * SignedLogReal::from_log(log_single_prob(inst, w, cfg));
}

SignedLogReal u_count(const CliqueInstance& inst, int ell) {
  inst.validate();
  if (ell < 2 || ell > inst.k)
    throw DomainError("overlap size ell must lie in [2, k], got " + std::to_string(ell));
  const std::int64_t rest = inst.n - inst.k;
  if (inst.k - ell > rest) return SignedLogReal::zero();
  return SignedLogReal::from_log(numerics::log_binomial(inst.k, ell) +
                                 numerics::log_binomial(rest, inst.k - ell));
}

SignedLogReal b1(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  const double lp = log_single_prob(inst, w, cfg);
  std::vector<SignedLogReal> u;
  for (int ell = 2; ell <= inst.k; ++ell) u.push_back(u_count(inst, ell));
  return binom_n_k(inst) * SignedLogReal::from_log(2.0 * lp) * numerics::sum(u);
}

SignedLogReal b2(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  return b2_impl(inst, w, cfg, nullptr);
}

double scaled_weight(const CliqueInstance& inst, double w) {
  return w * std::pow(static_cast<double>(inst.n), 2.0 / (inst.k - 1));
}

double weight_from_scaled(const CliqueInstance& inst, double z) {
  return z * std::pow(static_cast<double>(inst.n), -2.0 / (inst.k - 1));
}

double simplified_bound_cap(const CliqueInstance& inst) {
  inst.validate();
  return std::min(std::pow(static_cast<double>(inst.n), -2.0 / inst.k),
                  std::exp(-double(inst.k - 1) / (inst.k - 2)));
}

double log_simplified_bound(const CliqueInstance& inst, double z) {
  inst.validate();
  if (!inst.model.is_uniform())
    throw ValidityError("simplified bound is stated for uniform weights only");
  if (!(z >= 0.0)) throw DomainError("scaled weight z must be >= 0");
  const double w = weight_from_scaled(inst, z);
  const double slack = 1.0 + 1e-12;
  const double cap_n = std::pow(static_cast<double>(inst.n), -2.0 / inst.k);
  const double cap_e = std::exp(-double(inst.k - 1) / (inst.k - 2));
  if (w > cap_n * slack)
    throw ValidityError("simplified-bound hypothesis fails: w = " + fmt(w) + " > n^(-2/k) = " + fmt(cap_n));
  if (w > cap_e * slack)
    throw ValidityError("simplified-bound hypothesis fails: w = " + fmt(w) +
                        " > exp(-(k-1)/(k-2)) = " + fmt(cap_e));
  if (z == 0.0) return -std::numeric_limits<double>::infinity();
  const int m = inst.m(), k = inst.k;
  return std::log(8.0 / 7.0) + std::log(double(k - 2)) - numerics::log_factorial(m) -
         2.0 * numerics::log_factorial(k - 1) + (m + k - 1) * std::log(z) - std::log(static_cast<double>(inst.n));
}

double simplified_bound(const CliqueInstance& inst, double z) { return std::exp(log_simplified_bound(inst, z)); }

BoundReport cdf_bounds(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  inst.validate();
  require_weight(w);
  cfg.validate();
  BoundReport r;
  r.w = w;
  r.z = scaled_weight(inst, w);
  r.log_p = log_single_prob(inst, w, cfg);
  r.p = std::exp(r.log_p);
  r.lambda = binom_n_k(inst) * SignedLogReal::from_log(r.log_p);
  r.flags.closed_form_w_le_1 = closed_form(inst, w);
  r.b1 = b1(inst, w, cfg);
  try {
    r.b2 = b2_impl(inst, w, cfg, &r.flags.quadrature_used);
  } catch (const QuadratureError& e) {
    r.flags.quadrature_used = true;
    r.flags.valid = false;
    r.lower_raw = 0.0;
    r.upper_raw = 1.0;
    r.lower = 0.0;
    r.upper = 1.0;
    r.note = e.what();
    return r;
  }

  const double tail = -std::expm1(-r.lambda.to_real());
  const double err = (r.b1 + r.b2).to_real();
  r.lower_raw = tail - err;
  r.upper_raw = tail + err;
  r.lower = std::clamp(r.lower_raw, 0.0, 1.0);
  r.upper = std::clamp(r.upper_raw, 0.0, 1.0);

  if (inst.model.is_uniform() && w <= simplified_bound_cap(inst)) {
    r.flags.thm2_hypothesis = true;
    r.simplified_bound = simplified_bound(inst, r.z);
  }
  if (!r.flags.closed_form_w_le_1)
    r.note = inst.model.is_uniform() ? "w > 1: Irwin-Hall and quadrature engine"
                                     : "exponential weights: Erlang and quadrature engine";
  return r;
}

std::vector<VTerm> v_profile(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  const double lp = log_single_prob(inst, w, cfg);
  const int k = inst.k;
  const double ln_n = std::log(static_cast<double>(inst.n));
  const double ln_w = w > 0.0 ? std::log(w) : kNegInf;
  std::vector<VTerm> out;
  for (int ell = 2; ell <= k; ++ell) {
    const double common =
        numerics::log_binomial(k, ell) + (k - ell) * ln_n - numerics::log_factorial(k - ell);
    VTerm t;
    t.ell = ell;
    t.v_prime = SignedLogReal::from_log(common + 2.0 * lp);
    if (ell < k) {
      const double lv = w > 0.0 ? common + lp + m_ell(k, ell) * ln_w - numerics::log_factorial(k - 1)
                                : kNegInf;
      t.v = SignedLogReal::from_log(lv);
    }
    out.push_back(t);
  }
  return out;
}

SignedLogReal b2_prime(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  std::vector<SignedLogReal> terms;
  for (const auto& t : v_profile(inst, w, cfg))
    if (t.ell < inst.k) terms.push_back(t.v);
  return binom_n_k(inst) * numerics::sum(terms);
}

SignedLogReal b1_prime(const CliqueInstance& inst, double w, const PrecisionConfig& cfg) {
  std::vector<SignedLogReal> terms;
  for (const auto& t : v_profile(inst, w, cfg)) terms.push_back(t.v_prime);
  return binom_n_k(inst) * numerics::sum(terms);
}

void monotonize_lower(std::vector<BoundReport>& curve) {
  double running = 0.0;
  for (auto& r : curve) {
    running = std::max(running, r.lower);
    r.lower = running;
  }
}

std::vector<BoundReport> cdf_curve(const CliqueInstance& inst, const std::vector<double>& w_grid,
                                   const PrecisionConfig& cfg) {
  inst.validate();
  for (std::size_t i = 0; i < w_grid.size(); ++i) {
    require_weight(w_grid[i]);
    if (i && !(w_grid[i] > w_grid[i - 1])) throw DomainError("weight grid must be strictly increasing");
  }
  std::vector<BoundReport> out(w_grid.size());
  detail::parallel_for(w_grid.size(), [&](std::size_t i) { out[i] = cdf_bounds(inst, w_grid[i], cfg); });
  monotonize_lower(out);
  return out;
}

TableRow table_stats(const CliqueInstance& inst, const PrecisionConfig& cfg) {
  inst.validate();
  if (!inst.model.is_uniform()) throw ValidityError("table statistics require uniform weights");
  TableRow row;
  row.k = inst.k;
  row.n = inst.n;
  row.mu_hat = asymptotic_mean(GraphSpec::complete(inst.k), inst.n);
  if (row.mu_hat > 1.0)
    throw ValidityError("asymptotic mean " + fmt(row.mu_hat) +
                        " lies beyond w = 1, outside the closed-form domain; no table row");

  const double w_max = 1.0;
  const auto env = build_envelope(inst, w_max, cfg);
  auto upper = [&](double w) { return cdf_bounds(inst, w, cfg).upper; };
  row.lower_peak = env.peak;
  row.w_lower_peak = env.w_peak;

  const auto w005 = bisect(upper, 0.05, 0.0, w_max);
  if (!w005) throw ValidityError("upper bound stays below 0.05 on (0, 1]");
  row.w_005 = *w005;
  row.col_005 = env.eval(*w005);

  row.lb_at_mu = env.eval(row.mu_hat);
  row.ub_at_mu = upper(row.mu_hat);

  if (env.peak >= 0.95) {
    row.w_095 = bisect([&](double w) { return env.eval(w); }, 0.95, 0.0, env.w_peak);
    row.col_095 = upper(*row.w_095);
  }

  std::vector<double> gaps(env.grid.size());
  detail::parallel_for(env.grid.size(), [&](std::size_t i) {
    gaps[i] = upper(env.grid[i]) - env.eval(env.grid[i]);
  });
  const auto best = static_cast<std::size_t>(std::max_element(gaps.begin(), gaps.end()) - gaps.begin());
  row.max_gap = gaps[best];
  row.w_max_gap = env.grid[best];
  const double lo = best ? env.grid[best - 1] : 0.0;
  const double hi = best + 1 < env.grid.size() ? env.grid[best + 1] : env.grid[best];
  const auto [wg, g] = golden_max([&](double w) { return upper(w) - env.eval(w); }, lo, hi);
  if (g > row.max_gap) row.max_gap = g, row.w_max_gap = wg;
  row.gap_is_one_minus_peak = std::fabs(row.max_gap - (1.0 - env.peak)) <= 1e-9;
  return row;
}

std::string to_string(Tail t) { return t == Tail::Lower ? "lower" : "upper"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Significant: return "significant";
    case Verdict::NotSignificant: return "not significant";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Tail parse_tail(const std::string& text) {
  if (text == "lower") return Tail::Lower;
  if (text == "upper") return Tail::Upper;
  throw DomainError("tail must be 'lower' or 'upper', got '" + text + "'");
}

SignificanceResult significance_test(const CliqueInstance& inst, double observed_w, Tail tail,
                                     double alpha, const PrecisionConfig& cfg) {
  inst.validate();
  require_weight(observed_w);
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("alpha must lie in (0, 0.5]");
  SignificanceResult res;
  res.tail = tail;
  res.alpha = alpha;
  res.observed_w = observed_w;

  const auto rep = cdf_bounds(inst, observed_w, cfg);
  if (!rep.flags.valid) {
    res.verdict = Verdict::Indeterminate;
    res.cdf_lower = 0.0;
    res.cdf_upper = 1.0;
    res.p_value_lower = 0.0;
    res.p_value_upper = 1.0;
    res.explanation = "bounds unavailable at observed w: " + rep.note;
    return res;
  }
  res.cdf_upper = rep.upper;
  res.cdf_lower = rep.lower;
  if (closed_form(inst, observed_w) && observed_w > 0.0)
    res.cdf_lower = build_envelope(inst, observed_w, cfg).eval(observed_w);

  if (tail == Tail::Lower) {
    res.p_value_lower = res.cdf_lower;
    res.p_value_upper = res.cdf_upper;
  } else {
    res.p_value_lower = 1.0 - res.cdf_upper;
    res.p_value_upper = 1.0 - res.cdf_lower;
  }
  if (res.p_value_upper <= alpha) {
    res.verdict = Verdict::Significant;
    res.explanation = "every tail probability consistent with the bounds is <= alpha";
  } else if (res.p_value_lower > alpha) {
    res.verdict = Verdict::NotSignificant;
    res.explanation = "every tail probability consistent with the bounds exceeds alpha";
  } else {
    res.verdict = Verdict::Indeterminate;
    res.explanation = "alpha lies inside the tail-probability interval; the bounds cannot decide";
  }
  if (!rep.flags.closed_form_w_le_1) res.explanation += " (" + rep.note + ")";
  return res;
}

}  // namespace minclique
