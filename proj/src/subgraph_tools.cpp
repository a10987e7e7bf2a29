#include "minclique/subgraph_tools.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace minclique {

namespace {

constexpr int kHardVertexLimit = 20;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::int64_t checked(__int128 x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw DomainError("rational arithmetic overflow");
  return static_cast<std::int64_t>(x);
}

Rational reduce(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) num = -num, den = -den;
  __int128 a = num < 0 ? -num : num, b = den;
  while (b) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) num /= a, den /= a;
  return Rational(checked(num), checked(den));
}

void check_guard(int v, int limit, bool force, const char* op) {
  if (v > limit && !force)
    throw GuardError(std::string(op) + ": graph has " + std::to_string(v) +
                     " vertices, above the guard of " + std::to_string(limit) +
                     " (use force to override)");
}

void require_balanced(const GraphSpec& g, const char* op) {
  if (!g.strictly_balanced())
    throw ValidityError(std::string(op) + " requires a strictly balanced graph; " +
                        (g.name().empty() ? std::string("the input graph") : g.name()) + " is not");
}

// Visits every placement of a second copy relative to the first, which sits
// on slots 0..v-1 with the identity labeling. Each vertex of the second copy
// goes to an unused old slot or to the next fresh slot, so every ordered pair
// of embeddings whose images span a labeled (2v - ell)-set corresponds to
// exactly one placement and one injective labeling of the slots.
// visit(ell, shared_edges) is called for placements sharing at least one
// edge with a different edge set.
template <class Visit>
void for_each_overlap(const GraphSpec& g, Visit&& visit) {
  const int v = g.v(), m = g.m();
  std::vector<int> image(v, -1);
  std::uint32_t used = 0;

  auto leaf = [&](int ell) {
    int shared = 0;
    for (const auto& [x, y] : g.edges()) {
      const int a = image[x], b = image[y];
      if (a < v && b < v && g.adjacent(a, b)) ++shared;
    }
    if (shared >= 1 && shared < m) visit(ell, shared);
  };

  auto dfs = [&](auto&& self, int i, int ell, int fresh) -> void {
    if (i == v) {
      if (ell >= 2) leaf(ell);
      return;
    }
    for (int s = 0; s < v; ++s) {
      if (used >> s & 1u) continue;
      used |= 1u << s;
      image[i] = s;
      self(self, i + 1, ell + 1, fresh);
      used &= ~(1u << s);
    }
    image[i] = v + fresh;
    self(self, i + 1, ell, fresh + 1);
  };
  dfs(dfs, 0, 0, 0);
}

std::uint64_t count_automorphisms(const GraphSpec& g) {
  const int v = g.v();
  if (g.is_clique()) {
    std::uint64_t f = 1;
    for (int i = 2; i <= v; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  }
  std::vector<int> image(v, -1);
  std::uint32_t used = 0;
  std::uint64_t count = 0;
  auto dfs = [&](auto&& self, int i) -> void {
    if (i == v) {
      ++count;
      return;
    }
    for (int c = 0; c < v; ++c) {
      if (used >> c & 1u || g.degree(c) != g.degree(i)) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = g.adjacent(i, j) == g.adjacent(c, image[j]);
      if (!ok) continue;
      used |= 1u << c;
      image[i] = c;
      self(self, i + 1);
      used &= ~(1u << c);
    }
  };
  dfs(dfs, 0);
  return count;
}

bool balanced_scan(const GraphSpec& g) {
  const int v = g.v();
  const std::int64_t m = g.m();
  const std::uint32_t full = (1u << v) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    const int size = std::popcount(s);
    if (size < 2) continue;
    std::int64_t twice_e = 0;
    for (int a = 0; a < v; ++a)
      if (s >> a & 1u) twice_e += std::popcount(s & g.neighbors(a));
    if (twice_e / 2 * v >= m * size) return false;
  }
  return true;
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<Edge> complete_edges(int k) {
  std::vector<Edge> e;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) e.emplace_back(i, j);
  return e;
}

std::vector<Edge> path_edges(int v) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < v; ++i) e.emplace_back(i, i + 1);
  return e;
}

std::vector<Edge> cycle_edges(int v) {
  auto e = path_edges(v);
  e.emplace_back(0, v - 1);
  return e;
}

// (n)_j as an exact integer.
__int128 falling_exact(std::int64_t n, int j) {
  __int128 r = 1;
  for (int i = 0; i < j; ++i) {
    r *= (n - i);
    if (r > (static_cast<__int128>(1) << 100)) throw DomainError("falling factorial too large for exact evaluation");
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (den < 0) num = -num, den = -den;
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) num /= g, den /= g;
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return reduce(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                static_cast<__int128>(a.den) * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
  return reduce(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den <=> static_cast<__int128>(b.num) * a.den;
}

// ---------------------------------------------------------------------------
// GraphSpec

GraphSpec GraphSpec::from_edges(std::vector<Edge> edges, bool force, std::string name) {
  using R = GraphParseError::Reason;
  if (edges.empty()) throw GraphParseError(R::Empty, "graph has no edges");
  int max_vertex = 0;
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0) throw GraphParseError(R::Syntax, "vertex indices must be nonnegative");
    if (a == b) throw GraphParseError(R::Loop, "loop at vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    max_vertex = std::max(max_vertex, b);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] == edges[i - 1])
      throw GraphParseError(R::DuplicateEdge, "duplicate edge " + std::to_string(edges[i].first) + " " +
                                                  std::to_string(edges[i].second));

  GraphSpec g;
  g.v_ = max_vertex + 1;
  check_guard(g.v_, kMaxVerticesParse, force, "parse_graph");
  if (g.v_ > kHardVertexLimit)
    throw GuardError("graphs are limited to " + std::to_string(kHardVertexLimit) + " vertices");
  g.edges_ = std::move(edges);
  for (const auto& [a, b] : g.edges_) {
    g.adj_[a] |= 1u << b;
    g.adj_[b] |= 1u << a;
  }
  for (int a = 0; a < g.v_; ++a)
    if (!g.adj_[a]) throw GraphParseError(R::IsolatedVertex, "vertex " + std::to_string(a) + " is isolated");
  g.name_ = std::move(name);
  g.a_h_ = count_automorphisms(g);
  g.strictly_balanced_ = balanced_scan(g);
  if (g.strictly_balanced_ && g.v_ <= kMaxVerticesOverlap) {
    try {
      g.d_prime_ = overlap_density(g);
    } catch (const ValidityError&) {
      // A single edge has no overlapping distinct copy.
    }
  }
  return g;
}

int GraphSpec::degree(int a) const noexcept { return std::popcount(adj_[a]); }

GraphSpec GraphSpec::complete(int k) {
  if (k < 2) throw DomainError("complete graph needs k >= 2");
  return from_edges(complete_edges(k), true, "K" + std::to_string(k));
}

GraphSpec GraphSpec::cycle(int v) {
  if (v < 3) throw DomainError("cycle needs v >= 3");
  return from_edges(cycle_edges(v), true, "C" + std::to_string(v));
}

GraphSpec GraphSpec::path(int v) {
  if (v < 2) throw DomainError("path needs v >= 2");
  return from_edges(path_edges(v), true, "P" + std::to_string(v));
}

GraphSpec parse_graph(std::string_view text, bool force) {
  using R = GraphParseError::Reason;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw GraphParseError(R::Empty, "empty graph description");

  if (std::isalpha(static_cast<unsigned char>(text.front()))) {
    const char kind = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
    const auto size = parse_int(text.substr(1));
    if (!size || (kind != 'K' && kind != 'C' && kind != 'P'))
      throw GraphParseError(R::Syntax, "unknown graph preset '" + std::string(text) + "'");
    check_guard(*size, kMaxVerticesParse, force, "parse_graph");
    if (kind == 'K') return GraphSpec::complete(*size);
    if (kind == 'C') return GraphSpec::cycle(*size);
    return GraphSpec::path(*size);
  }

  std::istringstream in{std::string(text)};
  std::vector<Edge> edges;
  std::string a, b;
  while (in >> a) {
    if (!(in >> b)) throw GraphParseError(R::Syntax, "odd number of vertex indices in edge list");
    const auto x = parse_int(a), y = parse_int(b);
    if (!x || !y) throw GraphParseError(R::Syntax, "non-integer vertex '" + (x ? b : a) + "'");
    edges.emplace_back(*x, *y);
  }
  return GraphSpec::from_edges(std::move(edges), force);
}

std::uint64_t automorphism_count(const GraphSpec& g, bool force) {
  check_guard(g.v(), kMaxVerticesParse, force, "automorphism_count");
  return count_automorphisms(g);
}

bool is_strictly_balanced(const GraphSpec& g) { return balanced_scan(g); }

Rational overlap_density(const GraphSpec& g, bool force) {
  require_balanced(g, "overlap_density");
  check_guard(g.v(), kMaxVerticesOverlap, force, "overlap_density");
  const int v = g.v(), m = g.m();
  std::optional<Rational> best;
  for_each_overlap(g, [&](int ell, int shared) {
    const Rational d(2 * m - shared, 2 * v - ell);
    if (!best || d < *best) best = d;
  });
  if (!best) throw ValidityError("graph admits no overlapping pair of distinct copies");
  return *best;
}

// ---------------------------------------------------------------------------
// Census

SignedLogReal FallingFactorialPoly::eval(std::int64_t n) const {
  std::vector<SignedLogReal> parts;
  for (const auto& [j, c] : terms) {
    if (j > n || c.num == 0) continue;
    parts.push_back(SignedLogReal::from_log(numerics::log_falling_factorial(n, j) +
                                                std::log(std::fabs(static_cast<double>(c.num))) -
                                                std::log(static_cast<double>(c.den)),
                                            c.num > 0 ? 1 : -1));
  }
  return numerics::sum(parts);
}

std::int64_t FallingFactorialPoly::eval_exact(std::int64_t n) const {
  __int128 num = 0;
  __int128 den = 1;
  for (const auto& [j, c] : terms) {
    if (j > n) continue;
    const __int128 f = falling_exact(n, j);
    num = num * c.den + f * c.num * den;
    den *= c.den;
  }
  if (num % den != 0) throw DomainError("count polynomial is not integral at n = " + std::to_string(n));
  return checked(num / den);
}

std::string FallingFactorialPoly::to_string() const {
  std::string out;
  for (const auto& [j, c] : terms) {
    if (!out.empty()) out += " + ";
    out += c.to_string() + "*(n)_" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

std::vector<OverlapClass> overlap_census(const GraphSpec& g, bool force) {
  check_guard(g.v(), kMaxVerticesCensus, force, "overlap_census");
  const int v = g.v(), m = g.m();
  std::map<std::pair<int, int>, std::int64_t> placements;
  for_each_overlap(g, [&](int ell, int shared) { ++placements[{ell, shared}]; });

  const auto a_h = static_cast<std::int64_t>(g.automorphisms());
  std::vector<OverlapClass> out;
  for (const auto& [key, count] : placements) {
    OverlapClass c;
    c.ell = key.first;
    c.a = key.second;
    c.b1_unique = c.b2_unique = m - c.a;
    c.count_poly.terms.emplace_back(2 * v - c.ell, Rational(count) * Rational(1, a_h) * Rational(1, a_h));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Edge> embed_copy(const GraphSpec& g, const std::vector<int>& vertex_set, std::string_view perm) {
  const int v = g.v();
  if (static_cast<int>(vertex_set.size()) != v || static_cast<int>(perm.size()) != v)
    throw DomainError("vertex set and permutation must both have v entries");
  auto sorted = vertex_set;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> image(v);
  std::uint32_t seen = 0;
  for (int i = 0; i < v; ++i) {
    const int p = perm[i] - '1';
    if (p < 0 || p >= v || (seen >> p & 1u)) throw DomainError("invalid permutation '" + std::string(perm) + "'");
    seen |= 1u << p;
    image[i] = sorted[p];
  }
  std::vector<Edge> out;
  for (const auto& [x, y] : g.edges()) out.emplace_back(std::minmax(image[x], image[y]));
  std::sort(out.begin(), out.end());
  return out;
}

PairOverlap classify_pair(const std::vector<Edge>& copy_a, const std::vector<Edge>& copy_b) {
  std::set<int> va, vb;
  for (const auto& [x, y] : copy_a) va.insert({x, y});
  for (const auto& [x, y] : copy_b) vb.insert({x, y});
  std::set<Edge> ea, eb;
  for (const auto& [x, y] : copy_a) ea.insert(std::minmax(x, y));
  for (const auto& [x, y] : copy_b) eb.insert(std::minmax(x, y));
  PairOverlap r;
  for (int x : va) r.shared_vertices += vb.count(x);
  for (const auto& e : ea) r.shared_edges += eb.count(e);
  r.dependent = r.shared_edges >= 1 && ea != eb;
  return r;
}

// ---------------------------------------------------------------------------
// Expectations and bounds

SignedLogReal lambda_general(const GraphSpec& g, std::int64_t n, double w, const WeightModel& model,
                             const PrecisionConfig& cfg) {
  if (n < g.v()) throw DomainError("host order n must be at least v(H)");
  if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weight w must be finite and >= 0");
  if (w == 0.0) return SignedLogReal::zero();
  const double lp = conv_log_cdf({model, g.m()}, w, cfg);
  return SignedLogReal::from_log(numerics::log_falling_factorial(n, g.v()) -
                                 std::log(static_cast<double>(g.automorphisms())) + lp);
}

BoundReport general_bounds(const GraphSpec& g, std::int64_t n, double w, const WeightModel& model,
                           const PrecisionConfig& cfg, bool force) {
  if (n < g.v()) throw DomainError("host order n must be at least v(H)");
  if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weight w must be finite and >= 0");
  cfg.validate();
  const auto census = overlap_census(g, force);
  const int m = g.m(), v = g.v();
  const bool closed = model.is_uniform() && w <= 1.0;

  BoundReport r;
  r.w = w;
  r.z = w * std::pow(static_cast<double>(n), double(v) / m);
  r.log_p = w > 0.0 ? conv_log_cdf({model, m}, w, cfg) : kNegInf;
  r.p = std::exp(r.log_p);
  r.lambda = lambda_general(g, n, w, model, cfg);
  r.flags.closed_form_w_le_1 = closed;

  const auto copies = SignedLogReal::from_log(numerics::log_falling_factorial(n, v) -
                                              std::log(static_cast<double>(g.automorphisms())));
  std::vector<SignedLogReal> dependent{copies};
  std::vector<SignedLogReal> pair_terms;
  try {
    for (const auto& c : census) {
      const auto count = c.count_poly.eval(n);
      if (count.is_zero()) continue;
      dependent.push_back(count);
      if (w == 0.0) continue;
      double lpair;
      if (closed) {
        lpair = log_pair_prob_closed(c.a, c.b1_unique, w);
      } else {
        r.flags.quadrature_used = true;
        lpair = log_pair_prob_quadrature(model, c.a, c.b1_unique, w, cfg);
      }
      pair_terms.push_back(count * SignedLogReal::from_log(lpair));
    }
  } catch (const QuadratureError& e) {
    r.flags.valid = false;
    r.lower_raw = r.lower = 0.0;
    r.upper_raw = r.upper = 1.0;
    r.note = e.what();
    return r;
  }
  r.b1 = numerics::sum(dependent) * SignedLogReal::from_log(2.0 * r.log_p);
  r.b2 = numerics::sum(pair_terms);

  const double tail = -std::expm1(-r.lambda.to_real());
  const double err = (r.b1 + r.b2).to_real();
  r.lower_raw = tail - err;
  r.upper_raw = tail + err;
  r.lower = std::clamp(r.lower_raw, 0.0, 1.0);
  r.upper = std::clamp(r.upper_raw, 0.0, 1.0);

  if (g.is_clique() && v >= 3 && model.is_uniform()) {
    const CliqueInstance inst{n, v, model};
    if (w <= simplified_bound_cap(inst)) {
      r.flags.thm2_hypothesis = true;
      r.simplified_bound = simplified_bound(inst, r.z);
    }
  }
  if (!closed)
    r.note = model.is_uniform() ? "w > 1: Irwin-Hall and quadrature engine"
                                : "exponential weights: Erlang and quadrature engine";
  return r;
}

AsymptoticPoint asymptotic_cdf(const GraphSpec& g, std::int64_t n, double z) {
  require_balanced(g, "asymptotic_cdf");
  if (!(z >= 0.0)) throw DomainError("scaled weight z must be >= 0");
  if (n < g.v()) throw DomainError("host order n must be at least v(H)");
  const int m = g.m();
  AsymptoticPoint p;
  p.z = z;
  p.w = z * std::pow(static_cast<double>(n), -double(g.v()) / m);
  if (z > 0.0) {
    const double log_rate = m * std::log(z) - numerics::log_factorial(m) -
                            std::log(static_cast<double>(g.automorphisms()));
    p.survival = std::exp(-std::exp(log_rate));
    p.cdf = -std::expm1(-std::exp(log_rate));
  }
  return p;
}

double asymptotic_mean(const GraphSpec& g, std::int64_t n) {
  require_balanced(g, "asymptotic_mean");
  if (n < g.v()) throw DomainError("host order n must be at least v(H)");
  const int m = g.m();
  const double scale = std::exp((numerics::log_factorial(m) + std::log(static_cast<double>(g.automorphisms()))) / m) /
                       m * numerics::gamma_fn(1.0 / m);
  return scale * std::pow(static_cast<double>(n), -double(g.v()) / m);
}

}  // namespace minclique
