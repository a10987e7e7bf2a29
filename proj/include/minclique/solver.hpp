#pragma once

#include <cstdint>
#include <vector>

#include "minclique/subgraph_tools.hpp"

namespace minclique {

/// Symmetric nonnegative edge weights of K_n, stored as the packed upper
/// triangle in row-major order (0,1), (0,2), ..., (n-2,n-1).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  /// All weights start at 0.
  explicit WeightMatrix(int n, std::uint64_t seed = 0);

  int n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double operator()(int i, int j) const noexcept { return w_[index(i, j)]; }
  /// Throws DomainError for i == j, out-of-range indices, or a negative or
  /// non-finite weight.
  void set(int i, int j, double w);

  /// Packed entries in row-major upper-triangle order.
  const std::vector<double>& packed() const noexcept { return w_; }
  std::vector<double>& packed() noexcept { return w_; }

  /// Sum of the edges among `vertices` taken in lexicographic pair order.
  double clique_weight(const std::vector<int>& vertices) const;
  double edge_set_weight(const std::vector<Edge>& edges) const;

 private:
  std::size_t index(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (2 * static_cast<std::size_t>(n_) - i - 1) / 2 + (j - i - 1);
  }

  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> w_;
};

struct SolveResult {
  double weight = 0.0;
  std::vector<int> vertices;  // sorted
  std::vector<Edge> edges;    // edges of the optimal copy, sorted
  std::uint64_t nodes_explored = 0;
};

/// Exact minimum-weight k-clique. Ties go to the lexicographically smallest
/// vertex set. k = 3 uses a scan over edges in ascending weight order.
SolveResult min_weight_clique(const WeightMatrix& wm, int k);

/// Largest host order min_weight_subgraph accepts without forcing.
inline constexpr int kMaxHostOrderSubgraph = 60;

/// Exact minimum-weight copy of H: every sorted vertex set combined with one
/// vertex ordering per automorphism class. Ties go to the lexicographically
/// smallest vertex set, then to the first distinct edge pattern.
SolveResult min_weight_subgraph(const WeightMatrix& wm, const GraphSpec& g, bool force = false);

}  // namespace minclique
