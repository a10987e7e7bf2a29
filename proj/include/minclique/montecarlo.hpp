#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minclique/clique_bounds.hpp"
#include "minclique/solver.hpp"
#include "minclique/subgraph_tools.hpp"

namespace minclique {

/// Seeding scheme, fixed so samples reproduce across machines and thread
/// counts. splitmix64 is the usual SplitMix64 step (add the golden gamma,
/// then the two xor-shift-multiply rounds):
///   stream seed of trial i = splitmix64(master ^ splitmix64(i + 0x9E3779B97F4A7C15))
/// feeds std::mt19937_64. Each 64-bit draw x becomes the uniform
/// ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1). Edge (i, j), i < j, is
/// drawn in row-major order and mapped through the model's quantile.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) noexcept;

/// The uniforms of one trial, packed like WeightMatrix.
std::vector<double> trial_uniforms(int n, std::uint64_t master, std::uint64_t trial);
/// The weight matrix of one trial: quantile of each uniform.
WeightMatrix sample_matrix(int n, const WeightModel& model, std::uint64_t master, std::uint64_t trial);

/// What is minimized in each trial: a k-clique or a copy of a general H.
struct Target {
  std::optional<int> k;
  std::optional<GraphSpec> graph;

  static Target clique(int k) { return {k, std::nullopt}; }
  static Target subgraph(GraphSpec g) { return {std::nullopt, std::move(g)}; }
  int edges() const;
  std::string describe() const;
};

class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  EmpiricalCdf(std::vector<double> samples, std::uint64_t master_seed, std::string description);

  const std::vector<double>& samples() const noexcept { return samples_; }  // ascending
  std::size_t trials() const noexcept { return samples_.size(); }
  std::uint64_t master_seed() const noexcept { return seed_; }
  const std::string& description() const noexcept { return description_; }

  /// Fraction of samples strictly below w, matching F(w) = P(W < w).
  double cdf(double w) const;
  /// Fraction of samples at or above w; equals 1 - cdf(w).
  double survival(double w) const;
  double mean() const;
  /// Standard error of the mean (sample standard deviation / sqrt(T)).
  double standard_error() const;

 private:
  std::vector<double> samples_;
  std::uint64_t seed_ = 0;
  std::string description_;
};

/// Runs `trials` independent solves. Trial i is generated from
/// trial_seed(master, i) only, so the sorted sample list does not depend on
/// scheduling or on `threads` (0 = worker_count()).
EmpiricalCdf run_trials(int n, const Target& target, const WeightModel& model, std::size_t trials,
                        std::uint64_t master_seed, unsigned threads = 0, bool force = false);

struct EnvelopeReport {
  double epsilon = 0.0;  // DKW half-width sqrt(ln(2/delta) / (2T))
  double delta = 0.0;
  bool passed = true;
  double worst_margin = 0.0;  // min over points of the distance inside the widened band; < 0 is a violation
  double worst_w = 0.0;
  std::size_t points = 0;
  std::size_t violations = 0;
};

/// Checks lower - eps <= F_emp(w) <= upper + eps at every curve point.
EnvelopeReport envelope_check(const EmpiricalCdf& emp, const std::vector<BoundReport>& curve, double delta);

struct MeanReport {
  double mean = 0.0;
  double standard_error = 0.0;
  double mu_hat = 0.0;
  double ratio = 0.0;    // mean / mu_hat
  double z_score = 0.0;  // (mean - mu_hat) / standard_error
  bool within_3se = false;
  bool within_5pct = false;
};

/// Requires at least 100 trials.
MeanReport mean_check(const EmpiricalCdf& emp, double mu_hat);

}  // namespace minclique
