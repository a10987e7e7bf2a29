#include "minclique/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "minclique/detail/parallel.hpp"

namespace minclique {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept {
  return splitmix64(master ^ splitmix64(trial + 0x9E3779B97F4A7C15ull));
}

std::vector<double> trial_uniforms(int n, std::uint64_t master, std::uint64_t trial) {
  if (n < 2) throw DomainError("host order n must be >= 2");
  std::mt19937_64 rng(trial_seed(master, trial));
  std::vector<double> u(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (auto& x : u) x = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return u;
}

WeightMatrix sample_matrix(int n, const WeightModel& model, std::uint64_t master, std::uint64_t trial) {
  WeightMatrix wm(n, trial_seed(master, trial));
  auto u = trial_uniforms(n, master, trial);
  auto& w = wm.packed();
  if (model.is_uniform()) {
    w = std::move(u);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = model.quantile(u[i]);
  }
  return wm;
}

int Target::edges() const {
  if (k) return *k * (*k - 1) / 2;
  if (graph) return graph->m();
  throw DomainError("target has neither k nor a graph");
}

std::string Target::describe() const {
  if (k) return "K" + std::to_string(*k);
  if (graph) {
    if (!graph->name().empty()) return graph->name();
    return "H(v=" + std::to_string(graph->v()) + ",m=" + std::to_string(graph->m()) + ")";
  }
  return "none";
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples, std::uint64_t master_seed, std::string description)
    : samples_(std::move(samples)), seed_(master_seed), description_(std::move(description)) {
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::cdf(double w) const {
  if (samples_.empty()) return 0.0;
  const auto below = std::lower_bound(samples_.begin(), samples_.end(), w) - samples_.begin();
  return static_cast<double>(below) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::survival(double w) const {
  if (samples_.empty()) return 0.0;
  const auto at_or_above = samples_.end() - std::lower_bound(samples_.begin(), samples_.end(), w);
  return static_cast<double>(at_or_above) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::mean() const {
  if (samples_.empty()) throw DomainError("empty sample");
  long double s = 0.0L;
  for (double x : samples_) s += x;
  return static_cast<double>(s / samples_.size());
}

double EmpiricalCdf::standard_error() const {
  if (samples_.size() < 2) throw DomainError("standard error needs at least two samples");
  const long double mu = mean();
  long double ss = 0.0L;
  for (double x : samples_) ss += (x - mu) * (x - mu);
  const long double var = ss / (samples_.size() - 1);
  return static_cast<double>(std::sqrt(var / samples_.size()));
}

EmpiricalCdf run_trials(int n, const Target& target, const WeightModel& model, std::size_t trials,
                        std::uint64_t master_seed, unsigned threads, bool force) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (target.k) {
    if (*target.k < 3 || *target.k > n) throw DomainError("clique size must satisfy 3 <= k <= n");
  } else if (target.graph) {
    if (target.graph->v() > n) throw DomainError("H has more vertices than the host graph");
    if (n > kMaxHostOrderSubgraph && !force)
      throw GuardError("host order " + std::to_string(n) + " exceeds the subgraph solver guard of " +
                       std::to_string(kMaxHostOrderSubgraph));
  } else {
    throw DomainError("target has neither k nor a graph");
  }

  std::vector<double> results(trials);
  detail::parallel_for(
      trials,
      [&](std::size_t i) {
        const auto wm = sample_matrix(n, model, master_seed, i);
        results[i] = target.k ? min_weight_clique(wm, *target.k).weight
                              : min_weight_subgraph(wm, *target.graph, force).weight;
      },
      threads);
  return EmpiricalCdf(std::move(results), master_seed,
                      "n=" + std::to_string(n) + " target=" + target.describe() + " dist=" + model.describe());
}

EnvelopeReport envelope_check(const EmpiricalCdf& emp, const std::vector<BoundReport>& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (emp.trials() == 0) throw DomainError("empty sample");
  EnvelopeReport r;
  r.delta = delta;
  r.epsilon = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(emp.trials())));
  r.points = curve.size();
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& b : curve) {
    const double f = emp.cdf(b.w);
    const double margin = std::min(f - (b.lower - r.epsilon), (b.upper + r.epsilon) - f);
    if (margin < 0.0) ++r.violations;
    if (margin < r.worst_margin) r.worst_margin = margin, r.worst_w = b.w;
  }
  r.passed = r.violations == 0;
  return r;
}

MeanReport mean_check(const EmpiricalCdf& emp, double mu_hat) {
  if (emp.trials() < 100) throw DomainError("mean check needs at least 100 trials");
  if (!(mu_hat > 0.0)) throw DomainError("mu_hat must be positive");
  MeanReport r;
  r.mean = emp.mean();
  r.standard_error = emp.standard_error();
  r.mu_hat = mu_hat;
  r.ratio = r.mean / mu_hat;
  const double diff = r.mean - mu_hat;
  if (r.standard_error > 0.0) r.z_score = diff / r.standard_error;
  else r.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  r.within_3se = std::fabs(r.mean - mu_hat) <= 3.0 * r.standard_error;
  r.within_5pct = std::fabs(r.ratio - 1.0) <= 0.05;
  return r;
}

}  // namespace minclique
