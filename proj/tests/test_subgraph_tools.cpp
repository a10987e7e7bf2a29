#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "minclique/clique_bounds.hpp"
#include "minclique/errors.hpp"
#include "minclique/subgraph_tools.hpp"
#include "oracle_util.hpp"

using namespace minclique;
using oracle::rel_err;

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

EdgeSet image_of(const GraphSpec& g, const std::vector<int>& map) {
  EdgeSet s;
  for (const auto& [a, b] : g.edges()) s.insert(std::minmax(map[a], map[b]));
  return s;
}

// Automorphisms by checking all v! permutations.
std::uint64_t brute_automorphisms(const GraphSpec& g) {
  std::vector<int> perm(g.v());
  std::iota(perm.begin(), perm.end(), 0);
  const EdgeSet base = image_of(g, perm);
  std::uint64_t c = 0;
  do c += image_of(g, perm) == base;
  while (std::next_permutation(perm.begin(), perm.end()));
  return c;
}

// Strict balance by scanning every proper edge subset (as a subgraph on its endpoints).
bool brute_balanced(const GraphSpec& g) {
  const int m = g.m();
  const auto& e = g.edges();
  for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
    std::set<int> verts;
    int ec = 0;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) verts.insert({e[i].first, e[i].second}), ++ec;
    // ec / |V'| >= m / v  means not strictly balanced.
    if (static_cast<long>(ec) * g.v() >= static_cast<long>(m) * static_cast<long>(verts.size())) return false;
  }
  return true;
}

// All distinct copies of H in K_n, as edge sets.
std::vector<EdgeSet> all_copies(const GraphSpec& g, int n) {
  std::set<EdgeSet> seen;
  std::vector<int> map(g.v());
  auto rec = [&](auto&& self, int i, std::uint32_t used) -> void {
    if (i == g.v()) {
      seen.insert(image_of(g, map));
      return;
    }
    for (int x = 0; x < n; ++x)
      if (!(used >> x & 1u)) {
        map[i] = x;
        self(self, i + 1, used | 1u << x);
      }
  };
  rec(rec, 0, 0);
  return {seen.begin(), seen.end()};
}

int shared_edges(const EdgeSet& a, const EdgeSet& b) {
  int c = 0;
  for (const auto& e : a) c += static_cast<int>(b.count(e));
  return c;
}

int shared_vertices(const EdgeSet& a, const EdgeSet& b) {
  std::set<int> va, vb;
  for (const auto& [x, y] : a) va.insert({x, y});
  for (const auto& [x, y] : b) vb.insert({x, y});
  int c = 0;
  for (int x : va) c += static_cast<int>(vb.count(x));
  return c;
}

// Ordered dependent pairs of distinct copies, keyed by (shared vertices, shared edges).
std::map<std::pair<int, int>, std::int64_t> brute_census(const GraphSpec& g, int n) {
  const auto copies = all_copies(g, n);
  std::map<std::pair<int, int>, std::int64_t> out;
  for (const auto& a : copies)
    for (const auto& b : copies) {
      if (a == b) continue;
      const int se = shared_edges(a, b);
      if (se) ++out[{shared_vertices(a, b), se}];
    }
  return out;
}

// Minimum union density over a fixed copy on 0..v-1 and a second copy placed
// by any injection into 0..2v-1.
Rational brute_overlap_density(const GraphSpec& g) {
  const int v = g.v();
  std::vector<int> id(v);
  std::iota(id.begin(), id.end(), 0);
  const EdgeSet first = image_of(g, id);
  std::optional<Rational> best;
  std::vector<int> map(v);
  auto rec = [&](auto&& self, int i, std::uint32_t used) -> void {
    if (i == v) {
      const EdgeSet second = image_of(g, map);
      if (second == first || shared_edges(first, second) == 0) return;
      EdgeSet uni = first;
      uni.insert(second.begin(), second.end());
      std::set<int> verts;
      for (const auto& [x, y] : uni) verts.insert({x, y});
      const Rational d(static_cast<std::int64_t>(uni.size()), static_cast<std::int64_t>(verts.size()));
      if (!best || d < *best) best = d;
      return;
    }
    for (int x = 0; x < 2 * v; ++x)
      if (!(used >> x & 1u)) {
        map[i] = x;
        self(self, i + 1, used | 1u << x);
      }
  };
  rec(rec, 0, 0);
  return *best;
}

long double fact(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

long double pair_oracle(int a, int b, long double w) {
  return oracle::simpson(
      [&](long double t) {
        const long double own = std::pow(w - t, b) / fact(b);
        return std::pow(t, a - 1) / fact(a - 1) * own * own;
      },
      0.0L, w, 20000);
}

GraphSpec paw() { return GraphSpec::from_edges({{0, 1}, {1, 2}, {0, 2}, {2, 3}}); }

}  // namespace

TEST_CASE("parsing presets and edge lists") {
  const auto k3 = parse_graph("K3");
  CHECK(k3.v() == 3);
  CHECK(k3.m() == 3);
  CHECK(k3.density() == Rational(1));
  CHECK(k3.automorphisms() == 6);
  CHECK(k3.is_clique());
  const auto p3 = parse_graph("0 1\n1 2");
  CHECK(p3.v() == 3);
  CHECK(p3.automorphisms() == 2);
  CHECK(parse_graph("C5").automorphisms() == 10);
  CHECK(parse_graph("  P4 ").m() == 3);
  CHECK(parse_graph("1 0  2 1").edges() == p3.edges());
  CHECK(parse_graph("C4").density() == Rational(1));
  CHECK(parse_graph("K4").density() == Rational(3, 2));
}

TEST_CASE("parse errors are distinguishable") {
  using R = GraphParseError::Reason;
  auto reason = [](const char* text) {
    try {
      parse_graph(text);
    } catch (const GraphParseError& e) {
      return e.reason();
    }
    FAIL("no parse error for " << text);
    return R::Syntax;
  };
  CHECK(reason("") == R::Empty);
  CHECK(reason("   \n") == R::Empty);
  CHECK(reason("0 1 1") == R::Syntax);
  CHECK(reason("0 x") == R::Syntax);
  CHECK(reason("Q4") == R::Syntax);
  CHECK(reason("0 1 -1 2") == R::Syntax);
  CHECK(reason("0 1 1 1") == R::Loop);
  CHECK(reason("0 1 1 0") == R::DuplicateEdge);
  CHECK(reason("0 2") == R::IsolatedVertex);
  CHECK_THROWS_AS(parse_graph("K11"), GuardError);
  CHECK(parse_graph("K11", true).v() == 11);
  CHECK_THROWS_AS(parse_graph("0 10"), GuardError);
  CHECK_THROWS_AS(parse_graph("0 1 1 2 2 3 3 4 4 5 5 6 6 7 7 8 8 9 9 10"), GuardError);
  CHECK_THROWS_AS(parse_graph("K21", true), GuardError);
}

TEST_CASE("automorphism counts against brute force") {
  CHECK(automorphism_count(parse_graph("K4")) == 24);
  CHECK(automorphism_count(parse_graph("P3")) == 2);
  CHECK(automorphism_count(parse_graph("C4")) == 8);
  for (const char* t : {"K3", "K4", "K5", "C4", "C5", "C6", "P3", "P4", "P5", "0 1 1 2 0 2 2 3",
                        "0 1 0 2 0 3", "0 1 1 2 2 0 0 3 3 4 4 0", "0 1 1 2 2 3 3 0 0 2"}) {
    const auto g = parse_graph(t);
    CAPTURE(t);
    CHECK(g.automorphisms() == brute_automorphisms(g));
  }
  // Relabeling invariance on random vertex permutations.
  std::mt19937 rng(7);
  for (const char* t : {"0 1 1 2 2 3 3 4 4 0 0 2", "0 1 1 2 2 3 3 4 4 5 5 0 0 3", "0 1 0 2 0 3 1 2 3 4"}) {
    const auto g = parse_graph(t);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<int> perm(g.v());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<Edge> relabeled;
      for (const auto& [a, b] : g.edges()) relabeled.emplace_back(perm[a], perm[b]);
      CHECK(GraphSpec::from_edges(relabeled).automorphisms() == g.automorphisms());
    }
  }
  CHECK_THROWS_AS(automorphism_count(parse_graph("K11", true)), GuardError);
}

TEST_CASE("strict balance") {
  CHECK(is_strictly_balanced(GraphSpec::complete(5)));
  CHECK_FALSE(is_strictly_balanced(paw()));
  CHECK(is_strictly_balanced(GraphSpec::cycle(6)));
  // Induced-subset scan agrees with the all-edge-subsets definition.
  for (const char* t : {"K3", "K4", "C4", "C5", "C6", "P3", "P4", "P5", "P6", "0 1 1 2 0 2 2 3",
                        "0 1 0 2 0 3", "0 1 1 2 2 0 0 3 3 4 4 0", "0 1 1 2 2 3 3 0 0 2",
                        "0 1 1 2 2 0 3 4 4 5 5 3 0 3", "0 1 1 2 2 0 2 3 3 4 4 2"}) {
    const auto g = parse_graph(t);
    CAPTURE(t);
    CHECK(g.strictly_balanced() == brute_balanced(g));
  }
}

TEST_CASE("overlap density") {
  for (int k : {3, 4, 5}) {
    const Rational want((k - 1) * (k + 2), 2 * (k + 1));
    CHECK(overlap_density(GraphSpec::complete(k)) == want);
  }
  CHECK(overlap_density(GraphSpec::complete(3)) == Rational(5, 4));
  CHECK(overlap_density(GraphSpec::complete(4)) == Rational(9, 5));
  for (const char* t : {"C4", "C5", "P3", "P4", "0 1 1 2 2 3 3 0 0 2"}) {
    const auto g = parse_graph(t);
    CAPTURE(t);
    REQUIRE(g.strictly_balanced());
    const auto d = overlap_density(g);
    CHECK(d == brute_overlap_density(g));
    CHECK(d > g.density());
    REQUIRE(g.d_prime().has_value());
    CHECK(*g.d_prime() == d);
  }
  CHECK_THROWS_AS(overlap_density(paw()), ValidityError);
  CHECK_THROWS_AS(overlap_density(GraphSpec::cycle(9)), GuardError);
}

TEST_CASE("census completeness by exhaustive enumeration") {
  for (const char* t : {"K3", "K4", "P3", "P4", "C4", "0 1 1 2 2 3 3 0 0 2"}) {
    const auto g = parse_graph(t);
    for (int extra : {1, 2}) {
      const int n = g.v() + extra;
      CAPTURE(t);
      CAPTURE(n);
      const auto brute = brute_census(g, n);
      const auto census = overlap_census(g);
      std::int64_t total = 0, brute_total = 0;
      for (const auto& [key, c] : brute) brute_total += c;
      for (const auto& c : census) {
        CHECK(c.a >= 1);
        CHECK(c.b1_unique == g.m() - c.a);
        CHECK(c.b2_unique == g.m() - c.a);
        const auto cnt = c.count_poly.eval_exact(n);
        total += cnt;
        const auto it = brute.find({c.ell, c.a});
        CHECK((it == brute.end() ? 0 : it->second) == cnt);
        if (cnt > 0) CHECK(rel_err(c.count_poly.eval(n).to_real(), double(cnt)) < 1e-13);
      }
      CHECK(total == brute_total);
    }
  }
  // Triangles: one class, C(n,3) * 3(n-3) ordered pairs.
  const auto tri = overlap_census(GraphSpec::complete(3));
  REQUIRE(tri.size() == 1);
  CHECK(tri[0].ell == 2);
  CHECK(tri[0].a == 1);
  CHECK(tri[0].b1_unique == 2);
  for (std::int64_t n : {6, 10, 57, 1000})
    CHECK(tri[0].count_poly.eval_exact(n) == n * (n - 1) * (n - 2) / 6 * 3 * (n - 3));
  // Cliques: per-ell totals equal C(n,k) u_ell.
  for (int k : {4, 5}) {
    const auto g = GraphSpec::complete(k);
    const auto census = overlap_census(g);
    for (std::int64_t n : {12, 40}) {
      const CliqueInstance inst{n, k, WeightModel::uniform()};
      for (int ell = 2; ell < k; ++ell) {
        std::int64_t got = 0;
        for (const auto& c : census)
          if (c.ell == ell) got += c.count_poly.eval_exact(n);
        const double want = oracle::binom(static_cast<int>(n), k) * u_count(inst, ell).to_real();
        CHECK(rel_err(double(got), want) < 1e-12);
      }
    }
  }
  // Same vertex set, different copy: present for C4 (ell = v).
  bool full_overlap = false;
  for (const auto& c : overlap_census(GraphSpec::cycle(4))) full_overlap |= c.ell == 4;
  CHECK(full_overlap);
  CHECK_THROWS_AS(overlap_census(GraphSpec::cycle(8)), GuardError);
}

TEST_CASE("2-path example: embeddings and dependence") {
  const auto p3 = parse_graph("0 1 1 2");
  const std::vector<int> s{9, 11, 15};
  using E = std::vector<Edge>;
  CHECK(embed_copy(p3, s, "123") == E{{9, 11}, {11, 15}});
  CHECK(embed_copy(p3, s, "231") == E{{9, 15}, {11, 15}});
  CHECK(embed_copy(p3, s, "312") == E{{9, 11}, {9, 15}});
  // The eliminated permutations repeat the listed paths.
  CHECK(embed_copy(p3, s, "321") == embed_copy(p3, s, "123"));
  CHECK(embed_copy(p3, s, "132") == embed_copy(p3, s, "231"));
  CHECK(embed_copy(p3, s, "213") == embed_copy(p3, s, "312"));

  const auto alpha = embed_copy(p3, s, "123");
  const std::vector<int> t{11, 15, 18};
  auto r = classify_pair(alpha, embed_copy(p3, t, "123"));
  CHECK(r.dependent);
  CHECK(r.shared_edges == 1);
  CHECK(r.shared_vertices == 2);
  r = classify_pair(alpha, embed_copy(p3, t, "312"));
  CHECK(r.dependent);
  r = classify_pair(alpha, embed_copy(p3, t, "231"));
  CHECK_FALSE(r.dependent);
  CHECK(r.shared_edges == 0);
  CHECK_FALSE(classify_pair(alpha, alpha).dependent);
  CHECK_THROWS_AS(embed_copy(p3, s, "122"), DomainError);
}

TEST_CASE("lambda for general H") {
  const auto p3 = parse_graph("P3");
  const auto u = WeightModel::uniform();
  CHECK(rel_err(lambda_general(p3, 100, 0.1, u).to_real(), 2425.5) < 1e-13);
  // n = 6: number of 2-paths by enumeration times p.
  const auto copies = all_copies(p3, 6);
  CHECK(copies.size() == 60);
  CHECK(rel_err(lambda_general(p3, 6, 0.1, u).to_real(), copies.size() * 0.005) < 1e-13);
  CHECK(lambda_general(p3, 100, 0.0, u).is_zero());
  for (std::int64_t n : {10, 1000, 10000000})
    for (double w : {1e-3, 0.2, 1.0}) {
      const CliqueInstance inst{n, 3, u};
      CHECK(rel_err(lambda_general(GraphSpec::complete(3), n, w, u).to_real(), lambda(inst, w).to_real()) <
            1e-12);
    }
}

TEST_CASE("general bounds reduce to the clique bounds") {
  for (int k : {3, 4, 5})
    for (std::int64_t n : {12, 100, 5000})
      for (double w : {0.0, 0.01, 0.1, 0.5, 1.0}) {
        const auto g = GraphSpec::complete(k);
        const CliqueInstance inst{n, k, WeightModel::uniform()};
        const auto a = general_bounds(g, n, w, inst.model);
        const auto b = cdf_bounds(inst, w);
        CAPTURE(k);
        CAPTURE(n);
        CAPTURE(w);
        CHECK(rel_err(a.lambda.to_real(), b.lambda.to_real()) < 1e-12);
        CHECK(rel_err(a.b1.to_real(), b.b1.to_real()) < 1e-12);
        CHECK(rel_err(a.b2.to_real(), b.b2.to_real()) < 1e-12);
        CHECK(std::fabs(a.lower - b.lower) < 1e-12);
        CHECK(std::fabs(a.upper - b.upper) < 1e-12);
        CHECK(a.simplified_bound.has_value() == b.simplified_bound.has_value());
      }
  const auto zero = general_bounds(GraphSpec::cycle(4), 30, 0.0, WeightModel::uniform());
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);
}

TEST_CASE("4-cycle bounds against exhaustive pair sums at n = 8") {
  const auto c4 = GraphSpec::cycle(4);
  const double w = 0.2;
  const long double p = std::pow(0.2L, 4) / 24.0L;
  const auto copies = all_copies(c4, 8);
  long double b1 = 0, b2 = 0;
  std::map<int, long double> cache;
  for (const auto& a : copies)
    for (const auto& b : copies) {
      const int se = shared_edges(a, b);
      if (!se) continue;
      b1 += p * p;
      if (a == b) continue;
      if (!cache.count(se)) cache[se] = pair_oracle(se, 4 - se, w);
      b2 += cache[se];
    }
  const auto r = general_bounds(c4, 8, w, WeightModel::uniform());
  CHECK(rel_err(r.b1.to_real(), static_cast<double>(b1)) < 1e-12);
  CHECK(rel_err(r.b2.to_real(), static_cast<double>(b2)) < 1e-12);
  CHECK(rel_err(r.lambda.to_real(), static_cast<double>(copies.size() * p)) < 1e-12);

  // Exponential weights go through quadrature and stay well defined.
  const auto e = general_bounds(c4, 30, 0.5, WeightModel::exponential(1.0));
  CHECK(e.flags.quadrature_used);
  CHECK(e.flags.valid);
  CHECK(e.lower <= e.upper);
}

TEST_CASE("asymptotic law") {
  const auto k3 = GraphSpec::complete(3);
  const auto at_unit = asymptotic_cdf(k3, 1000, std::cbrt(36.0));
  CHECK(rel_err(at_unit.survival, std::exp(-1.0)) < 1e-14);
  CHECK(rel_err(at_unit.cdf, 1.0 - std::exp(-1.0)) < 1e-14);
  CHECK(rel_err(at_unit.w, std::cbrt(36.0) / 1000.0) < 1e-14);
  const auto zero = asymptotic_cdf(k3, 1000, 0.0);
  CHECK(zero.survival == 1.0);
  CHECK(zero.cdf == 0.0);

  // Finite-n Poisson parameter against the limit at n = 1e4.
  for (int i = 0; i <= 90; ++i) {
    const double z = 0.5 + 0.05 * i;
    const auto pt = asymptotic_cdf(k3, 10000, z);
    const double lam = lambda_general(k3, 10000, pt.w, WeightModel::uniform()).to_real();
    CHECK(std::fabs(std::exp(-lam) - pt.survival) <= 1e-3);
  }
  CHECK_THROWS_AS(asymptotic_cdf(paw(), 100, 1.0), ValidityError);
  CHECK_THROWS_AS(asymptotic_mean(paw(), 100), ValidityError);
}

TEST_CASE("asymptotic mean") {
  CHECK(std::fabs(asymptotic_mean(GraphSpec::complete(3), 100) - 0.02949) <= 5e-6);
  CHECK(std::fabs(asymptotic_mean(GraphSpec::complete(10), 10000000) - 0.67763) <= 5e-6);
  CHECK(std::fabs(asymptotic_mean(GraphSpec::complete(10), 100000) - 1.8856) <= 5e-5);
  CHECK(std::fabs(asymptotic_mean(GraphSpec::complete(10), 1000000) - 1.13036) <= 5e-6);
  // Mean of the limit law by integrating its survival function.
  for (const char* t : {"K3", "K4", "C4", "P3", "C5"}) {
    const auto g = parse_graph(t);
    const int m = g.m();
    const long double c = fact(m) * g.automorphisms();
    const long double integral = oracle::simpson(
        [&](long double z) { return std::exp(-std::pow(z, m) / c); }, 0.0L, 40.0L * std::pow(c, 1.0L / m), 400000);
    for (std::int64_t n : {100, 12345, 10000000}) {
      const double scale = std::pow(double(n), -double(g.v()) / m);
      CAPTURE(t);
      CHECK(rel_err(asymptotic_mean(g, n), static_cast<double>(integral) * scale) < 1e-10);
    }
    // mu_hat n^(1/d) does not depend on n.
    const double ref = asymptotic_mean(g, 100) * std::pow(100.0, double(g.v()) / m);
    for (std::int64_t n : {1000, 77777, 10000000})
      CHECK(rel_err(asymptotic_mean(g, n) * std::pow(double(n), double(g.v()) / m), ref) < 1e-14);
  }
}
