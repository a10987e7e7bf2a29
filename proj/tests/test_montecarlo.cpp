#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "minclique/errors.hpp"
#include "minclique/montecarlo.hpp"

using namespace minclique;

TEST_CASE("seeding scheme is pinned") {
  // Published SplitMix64 outputs for state 0: the first draw is 0xE220A8397B1DCDAF.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(trial_seed(42, 0) == splitmix64(42 ^ splitmix64(0x9E3779B97F4A7C15ull)));
  CHECK(trial_seed(42, 1) != trial_seed(42, 0));
  CHECK(trial_seed(43, 0) != trial_seed(42, 0));

  const auto u = trial_uniforms(6, 7, 3);
  REQUIRE(u.size() == 15);
  std::mt19937_64 rng(trial_seed(7, 3));
  for (double x : u) {
    CHECK(x == (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53);
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("quantile coupling within one trial") {
  const auto u = trial_uniforms(30, 99, 5);
  const auto e = WeightModel::exponential(1.0);
  const auto we = sample_matrix(30, e, 99, 5);
  const auto wu = sample_matrix(30, WeightModel::uniform(), 99, 5);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(wu.packed()[i] == u[i]);
    CHECK(we.packed()[i] == -std::log1p(-u[i]));
  }
  // W under exponential weights recomputed from the coupled uniforms.
  WeightMatrix direct(30);
  direct.packed() = u;
  for (auto& x : direct.packed()) x = e.quantile(x);
  CHECK(min_weight_clique(direct, 3).weight == min_weight_clique(we, 3).weight);
  // The quantile map is increasing, so every edge keeps its rank.
  for (std::size_t i = 1; i < u.size(); ++i) CHECK((u[i] < u[i - 1]) == (we.packed()[i] < we.packed()[i - 1]));
}

TEST_CASE("determinism across runs and thread counts") {
  const auto a = run_trials(20, Target::clique(3), WeightModel::uniform(), 5000, 42, 1);
  const auto b = run_trials(20, Target::clique(3), WeightModel::uniform(), 5000, 42, 4);
  const auto c = run_trials(20, Target::clique(3), WeightModel::uniform(), 5000, 42, 3);
  CHECK(a.samples() == b.samples());
  CHECK(a.samples() == c.samples());
  CHECK(std::is_sorted(a.samples().begin(), a.samples().end()));
  CHECK(a.trials() == 5000);
  CHECK(a.master_seed() == 42);
  const auto d = run_trials(20, Target::clique(3), WeightModel::uniform(), 5000, 43, 2);
  CHECK(a.samples() != d.samples());

  const auto g1 = run_trials(9, Target::subgraph(GraphSpec::cycle(4)), WeightModel::exponential(2.0), 200, 5, 1);
  const auto g2 = run_trials(9, Target::subgraph(GraphSpec::cycle(4)), WeightModel::exponential(2.0), 200, 5, 3);
  CHECK(g1.samples() == g2.samples());
}

TEST_CASE("single trial with n = k sums the sampled clique") {
  const auto emp = run_trials(4, Target::clique(4), WeightModel::uniform(), 1, 17);
  const auto u = trial_uniforms(4, 17, 0);
  double s = 0.0;
  for (double x : u) s += x;
  REQUIRE(emp.trials() == 1);
  CHECK(emp.samples()[0] == doctest::Approx(s).epsilon(1e-15));
}

TEST_CASE("empirical cdf queries") {
  const EmpiricalCdf emp({0.3, 0.1, 0.2, 0.2, 0.5}, 1, "hand");
  CHECK(emp.samples() == std::vector<double>{0.1, 0.2, 0.2, 0.3, 0.5});
  CHECK(emp.cdf(0.1) == 0.0);
  CHECK(emp.cdf(0.2) == 0.2);
  CHECK(emp.cdf(0.25) == 0.6);
  CHECK(emp.cdf(1.0) == 1.0);
  for (double w : {0.0, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6})
    CHECK(emp.survival(w) == doctest::Approx(1.0 - emp.cdf(w)).epsilon(1e-15));
  CHECK(emp.mean() == doctest::Approx(0.26));
  // Sample sd of {0.1,0.2,0.2,0.3,0.5} is sqrt(0.023), divided by sqrt(5).
  CHECK(emp.standard_error() == doctest::Approx(std::sqrt(0.023 / 5.0)));
}

TEST_CASE("envelope check") {
  const auto inst = CliqueInstance{30, 3, WeightModel::uniform()};
  const auto emp = run_trials(30, Target::clique(3), inst.model, 2000, 8);
  std::vector<double> grid;
  for (int i = 1; i <= 60; ++i) grid.push_back(emp.samples().back() * 1.2 * i / 60.0);
  const auto curve = cdf_curve(inst, grid);
  const auto rep = envelope_check(emp, curve, 1e-3);
  CHECK(rep.epsilon == doctest::Approx(std::sqrt(std::log(2000.0) / 4000.0)));
  CHECK(rep.points == 60);
  CHECK(rep.passed);

  // Trivial bounds always pass.
  auto loose = curve;
  for (auto& b : loose) b.lower = 0.0, b.upper = 1.0;
  CHECK(envelope_check(emp, loose, 1e-3).passed);

  // Negative control: bounds swapped so the band excludes the truth.
  auto swapped = curve;
  bool widened = false;
  for (auto& b : swapped) {
    if (b.upper - b.lower > 0.2) widened = true;
    std::swap(b.lower, b.upper);
  }
  REQUIRE(widened);
  const auto bad = envelope_check(emp, swapped, 1e-3);
  CHECK_FALSE(bad.passed);
  CHECK(bad.violations > 0);
  CHECK(bad.worst_margin < 0.0);
  CHECK_THROWS_AS(envelope_check(emp, curve, 0.0), DomainError);
}

TEST_CASE("mean check") {
  // Constant weights: every trial's W is exactly c m.
  std::vector<double> same(150, 0.4 * 3);
  const EmpiricalCdf emp(same, 0, "constant");
  const auto r = mean_check(emp, 0.4 * 3);
  CHECK(r.mean == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(r.standard_error == 0.0);
  CHECK(r.ratio == doctest::Approx(1.0));
  CHECK(r.within_3se);
  CHECK(r.within_5pct);
  CHECK_THROWS_AS(mean_check(EmpiricalCdf(std::vector<double>(99, 1.0), 0, ""), 1.0), DomainError);

  const EmpiricalCdf off(std::vector<double>(200, 2.0), 0, "");
  CHECK_FALSE(mean_check(off, 1.0).within_5pct);
  CHECK_FALSE(mean_check(off, 1.0).within_3se);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(run_trials(10, Target::clique(3), WeightModel::uniform(), 0, 1), DomainError);
  CHECK_THROWS_AS(run_trials(10, Target::clique(11), WeightModel::uniform(), 5, 1), DomainError);
  CHECK_THROWS_AS(run_trials(61, Target::subgraph(GraphSpec::path(3)), WeightModel::uniform(), 1, 1), GuardError);
  CHECK_THROWS_AS(run_trials(10, Target{}, WeightModel::uniform(), 1, 1), DomainError);
}
