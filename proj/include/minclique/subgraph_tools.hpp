#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "minclique/clique_bounds.hpp"
#include "minclique/errors.hpp"

namespace minclique {

/// Exact fraction with a positive denominator in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;  // "p/q", or "p" when q = 1

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
};

/// Malformed graph input. reason() tells the failures apart.
class GraphParseError : public DomainError {
 public:
  enum class Reason { Syntax, Empty, Loop, DuplicateEdge, IsolatedVertex };
  GraphParseError(Reason r, const std::string& what) : DomainError(what), reason_(r) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// Default size guards; `force` on each operation lifts them.
inline constexpr int kMaxVerticesParse = 10;
inline constexpr int kMaxVerticesOverlap = 8;
inline constexpr int kMaxVerticesCensus = 7;

using Edge = std::pair<int, int>;  // first < second

/// A small simple graph H without isolated vertices, with its derived
/// invariants computed on construction.
class GraphSpec {
 public:
  /// Validates and canonicalizes; v is one more than the largest vertex index.
  static GraphSpec from_edges(std::vector<Edge> edges, bool force = false, std::string name = {});
  static GraphSpec complete(int k);
  static GraphSpec cycle(int v);
  static GraphSpec path(int v);

  int v() const noexcept { return v_; }
  int m() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool adjacent(int a, int b) const noexcept { return adj_[a] >> b & 1u; }
  /// Bitmask of the neighbours of a.
  std::uint32_t neighbors(int a) const noexcept { return adj_[a]; }
  int degree(int a) const noexcept;
  Rational density() const { return Rational(m(), v()); }
  std::uint64_t automorphisms() const noexcept { return a_h_; }
  bool strictly_balanced() const noexcept { return strictly_balanced_; }
  /// Present when the graph is strictly balanced and small enough to enumerate.
  const std::optional<Rational>& d_prime() const noexcept { return d_prime_; }
  const std::string& name() const noexcept { return name_; }
  bool is_clique() const noexcept { return m() == v() * (v() - 1) / 2; }

 private:
  int v_ = 0;
  std::vector<Edge> edges_;
  std::array<std::uint32_t, 32> adj_{};
  std::uint64_t a_h_ = 1;
  bool strictly_balanced_ = false;
  std::optional<Rational> d_prime_;
  std::string name_;
};

/// Edge list "u v" pairs (0-based, whitespace separated) or a preset:
/// K<k>, C<v>, P<v> (path on v vertices).
GraphSpec parse_graph(std::string_view text, bool force = false);

/// Number of edge-preserving vertex bijections, by backtracking over
/// degree-compatible assignments.
std::uint64_t automorphism_count(const GraphSpec& g, bool force = false);

/// True iff every induced subgraph on a proper vertex subset of size >= 2 is
/// strictly less dense than g. Induced subgraphs suffice: for a fixed vertex
/// set the induced one has the most edges, and dropping edges while keeping
/// all v vertices only lowers the density.
bool is_strictly_balanced(const GraphSpec& g);

/// Minimum of e(F)/v(F) over unions F of two distinct copies sharing an edge.
Rational overlap_density(const GraphSpec& g, bool force = false);

/// Polynomial in n written on the falling-factorial basis (n)_j.
struct FallingFactorialPoly {
  std::vector<std::pair<int, Rational>> terms;  // (j, coefficient), j ascending

  SignedLogReal eval(std::int64_t n) const;
  /// Exact value for small n; throws DomainError if it is not an integer.
  std::int64_t eval_exact(std::int64_t n) const;
  std::string to_string() const;
};

/// Ordered pairs (alpha, beta) of distinct copies sharing ell vertices and
/// a >= 1 edges; each copy owns b further edges.
struct OverlapClass {
  int ell = 0;
  int a = 0;
  int b1_unique = 0;
  int b2_unique = 0;
  FallingFactorialPoly count_poly;
};

/// All overlap classes, sorted by (ell, a).
std::vector<OverlapClass> overlap_census(const GraphSpec& g, bool force = false);

/// A copy of H placed on the sorted vertex set S: H vertex i goes to
/// S[perm[i] - 1], with perm a 1-based permutation string such as "231".
std::vector<Edge> embed_copy(const GraphSpec& g, const std::vector<int>& vertex_set,
                             std::string_view perm);

struct PairOverlap {
  int shared_vertices = 0;
  int shared_edges = 0;
  bool dependent = false;  // shares at least one edge and is a different copy
};
PairOverlap classify_pair(const std::vector<Edge>& copy_a, const std::vector<Edge>& copy_b);

/// Expected number of copies of weight <= w: (n)_v / a_H * p with p the
/// m-fold convolution CDF of the model.
SignedLogReal lambda_general(const GraphSpec& g, std::int64_t n, double w, const WeightModel& model,
                             const PrecisionConfig& cfg = {});

/// Stein–Chen bounds for any H assembled from the overlap census.
BoundReport general_bounds(const GraphSpec& g, std::int64_t n, double w, const WeightModel& model,
                           const PrecisionConfig& cfg = {}, bool force = false);

struct AsymptoticPoint {
  double z = 0.0;
  double w = 0.0;         // z n^(-1/d)
  double survival = 1.0;  // exp(-z^m / (m! a_H)), the limit of P(W >= w)
  double cdf = 0.0;       // 1 - survival
};

/// Limit law at scaled weight z. Requires strict balance (ValidityError).
AsymptoticPoint asymptotic_cdf(const GraphSpec& g, std::int64_t n, double z);

/// n^(-1/d) (m! a_H)^(1/m) / m * Gamma(1/m). Requires strict balance.
double asymptotic_mean(const GraphSpec& g, std::int64_t n);

}  // namespace minclique
