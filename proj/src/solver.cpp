#include "minclique/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace minclique {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool better(double w, const std::vector<int>& s, double best_w, const std::vector<int>& best_s) {
  if (w != best_w) return w < best_w;
  return s < best_s;
}

std::vector<Edge> clique_edges(const std::vector<int>& vs) {
  std::vector<Edge> e;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) e.emplace_back(vs[a], vs[b]);
  return e;
}

SolveResult triangle_scan(const WeightMatrix& wm) {
  const int n = wm.n();
  const auto& packed = wm.packed();
  const std::size_t total = packed.size();

  // Only the lightest edges usually matter. A threshold taken from a strided
  // subsample selects roughly the 16n lightest edges; they form an exact
  // prefix of the full ascending order, which is completed only if the scan
  // runs off its end.
  auto by_weight = [&](std::uint32_t a, std::uint32_t b) {
    return packed[a] != packed[b] ? packed[a] < packed[b] : a < b;
  };
  const std::size_t want = 16 * static_cast<std::size_t>(n);
  double threshold = std::numeric_limits<double>::infinity();
  if (total > 4 * want) {
    const std::size_t stride = std::max<std::size_t>(1, total / 65536);
    std::vector<double> sample;
    for (std::size_t i = 0; i < total; i += stride) sample.push_back(packed[i]);
    const auto rank = static_cast<std::size_t>(static_cast<double>(want) / total * sample.size());
    std::nth_element(sample.begin(), sample.begin() + rank, sample.end());
    threshold = sample[rank];
  }
  std::vector<std::uint32_t> order;
  order.reserve(threshold < std::numeric_limits<double>::infinity() ? 2 * want : total);
  for (std::size_t i = 0; i < total; ++i)
    if (packed[i] <= threshold) order.push_back(static_cast<std::uint32_t>(i));
  std::size_t sorted_prefix = order.size();

  // Packed index back to (i, j).
  std::vector<std::size_t> row_start(n + 1, 0);
  for (int i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - i - 1);
  auto endpoints = [&](std::uint32_t idx) {
    const int i = static_cast<int>(std::upper_bound(row_start.begin(), row_start.end(), idx) - row_start.begin()) - 1;
    return Edge{i, i + 1 + static_cast<int>(idx - row_start[i])};
  };

  SolveResult best;
  best.weight = kInf;
  auto offer = [&](int a, int b, int c) {
    ++best.nodes_explored;
    // a < b < c; same summation order as clique_weight.
    const double w = wm(a, b) + wm(a, c) + wm(b, c);
    if (w > best.weight) return;
    std::vector<int> s{a, b, c};
    if (better(w, s, best.weight, best.vertices)) best.weight = w, best.vertices = std::move(s);
  };

  // Triangles whose three edges all lie below the threshold. If the lightest
  // of them weighs at most the threshold it is optimal: any other triangle
  // has an edge above the threshold.
  if (threshold < kInf) {
    std::vector<std::vector<int>> adj(n);
    for (auto idx : order) {
      const auto [i, j] = endpoints(idx);
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    for (int i = 0; i < n; ++i)
      for (int j : adj[i]) {
        if (j <= i) continue;
        auto p = std::upper_bound(adj[i].begin(), adj[i].end(), j);
        auto q = std::upper_bound(adj[j].begin(), adj[j].end(), j);
        while (p != adj[i].end() && q != adj[j].end()) {
          if (*p < *q) ++p;
          else if (*q < *p) ++q;
          else offer(i, j, *p), ++p, ++q;
        }
      }
    if (best.weight <= threshold) return best;
  }

  // General path: edges in ascending order.
  std::sort(order.begin(), order.end(), by_weight);
  for (std::size_t pos = 0; pos < total; ++pos) {
    if (pos == sorted_prefix) {
      for (std::size_t i = 0; i < total; ++i)
        if (!(packed[i] <= threshold)) order.push_back(static_cast<std::uint32_t>(i));
      std::sort(order.begin() + sorted_prefix, order.end(), by_weight);
      sorted_prefix = total;
    }
    const double we = packed[order[pos]];
    // Every triangle not yet seen has all three edges at least this heavy.
    if (3.0 * we > best.weight) break;
    const auto [i, j] = endpoints(order[pos]);
    for (int x = 0; x < n; ++x) {
      if (x == i || x == j) continue;
      int t[3] = {i, j, x};
      std::sort(t, t + 3);
      offer(t[0], t[1], t[2]);
    }
  }
  return best;
}

SolveResult clique_branch_and_bound(const WeightMatrix& wm, int k) {
  const int n = wm.n();
  std::vector<double> min_inc(n, kInf);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) min_inc[i] = std::min(min_inc[i], wm(i, j));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return min_inc[a] < min_inc[b]; });

  SolveResult best;
  best.weight = kInf;
  std::vector<int> chosen;
  const int m = k * (k - 1) / 2;
  const double slack = 1.0 + 1e-12;

  // Every edge still to be added touches a vertex chosen from positions >= pos,
  // whose lightest incident edge is at least min_inc[order[pos]].
  auto dfs = [&](auto&& self, int pos, double partial) -> void {
    ++best.nodes_explored;
    const int c = static_cast<int>(chosen.size());
    if (c == k) {
      std::vector<int> s = chosen;
      std::sort(s.begin(), s.end());
      const double w = wm.clique_weight(s);
      if (better(w, s, best.weight, best.vertices)) best.weight = w, best.vertices = std::move(s);
      return;
    }
    const int remaining = m - c * (c - 1) / 2;
    for (int p = pos; p + (k - c) <= n; ++p) {
      if (partial + remaining * min_inc[order[p]] > best.weight * slack) break;
      const int v = order[p];
      double add = 0.0;
      for (int u : chosen) add += wm(u, v);
      chosen.push_back(v);
      self(self, p + 1, partial + add);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, 0.0);
  return best;
}

// Distinct edge patterns of H over positions 0..v-1, one per automorphism class.
std::vector<std::vector<Edge>> edge_patterns(const GraphSpec& g) {
  std::vector<int> perm(g.v());
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::vector<Edge>> seen;
  std::vector<std::vector<Edge>> out;
  do {
    std::vector<Edge> e;
    for (const auto& [a, b] : g.edges()) e.emplace_back(std::minmax(perm[a], perm[b]));
    std::sort(e.begin(), e.end());
    if (seen.insert(e).second) out.push_back(std::move(e));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

WeightMatrix::WeightMatrix(int n, std::uint64_t seed) : n_(n), seed_(seed) {
  if (n < 2) throw DomainError("weight matrix needs n >= 2");
  w_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
}

void WeightMatrix::set(int i, int j, double w) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) throw DomainError("invalid edge index");
  if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("edge weights must be finite and >= 0");
  w_[index(i, j)] = w;
}

double WeightMatrix::clique_weight(const std::vector<int>& vertices) const {
  double s = 0.0;
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b) s += (*this)(vertices[a], vertices[b]);
  return s;
}

double WeightMatrix::edge_set_weight(const std::vector<Edge>& edges) const {
  double s = 0.0;
  for (const auto& [a, b] : edges) s += (*this)(a, b);
  return s;
}

SolveResult min_weight_clique(const WeightMatrix& wm, int k) {
  if (k < 3) throw DomainError("clique size k must be >= 3");
  if (k > wm.n()) throw DomainError("clique size k exceeds the host order n");
  auto r = k == 3 ? triangle_scan(wm) : clique_branch_and_bound(wm, k);
  r.edges = clique_edges(r.vertices);
  return r;
}

SolveResult min_weight_subgraph(const WeightMatrix& wm, const GraphSpec& g, bool force) {
  const int n = wm.n(), v = g.v();
  if (v > n) throw DomainError("H has more vertices than the host graph");
  if (n > kMaxHostOrderSubgraph && !force)
    throw GuardError("min_weight_subgraph: host order " + std::to_string(n) + " exceeds the guard of " +
                     std::to_string(kMaxHostOrderSubgraph) + " (use force to override)");
  const auto patterns = edge_patterns(g);

  SolveResult best;
  best.weight = kInf;
  std::vector<int> s(v);
  std::iota(s.begin(), s.end(), 0);
  std::vector<Edge> mapped(g.m());
  while (true) {
    for (const auto& pat : patterns) {
      ++best.nodes_explored;
      for (std::size_t e = 0; e < pat.size(); ++e) mapped[e] = {s[pat[e].first], s[pat[e].second]};
      const double w = wm.edge_set_weight(mapped);
      // Sets arrive in lexicographic order, so strict improvement keeps ties stable.
      if (w < best.weight) {
        best.weight = w;
        best.vertices = s;
        best.edges = mapped;
      }
    }
    int i = v - 1;
    while (i >= 0 && s[i] == n - v + i) --i;
    if (i < 0) break;
    ++s[i];
    for (int j = i + 1; j < v; ++j) s[j] = s[j - 1] + 1;
  }
  std::sort(best.edges.begin(), best.edges.end());
  return best;
}

}  // namespace minclique
