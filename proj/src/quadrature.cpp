#include "minclique/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "minclique/errors.hpp"

namespace minclique::numerics {

namespace {

template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    // Newton iteration on P_N from the Chebyshev-like initial guess.
    for (int i = 0; i < N; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= N; ++j) {
          const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  double apply(const std::function<double(double)>& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
  }
};

const GaussLegendre<10>& rule10() {
  static const GaussLegendre<10> r;
  return r;
}

const GaussLegendre<20>& rule20() {
  static const GaussLegendre<20> r;
  return r;
}

struct Interval {
  double a, b;
  double value, error;
  int depth;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval evaluate(const std::function<double(double)>& f, double a, double b, int depth) {
  const double fine = rule20().apply(f, a, b);
  const double coarse = rule10().apply(f, a, b);
  return {a, b, fine, std::fabs(fine - coarse), depth};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints, const QuadratureOptions& opts) {
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  if (!(opts.rel_tol > 0.0) || opts.abs_tol < 0.0) throw DomainError("integrate: bad tolerance");

  std::priority_queue<Interval> heap;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    if (!(b >= a)) throw DomainError("integrate: breakpoints must be nondecreasing");
    if (b == a) continue;
    Interval iv = evaluate(f, a, b, 0);
    total += iv.value;
    total_err += iv.error;
    heap.push(iv);
  }

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };

  while (!heap.empty() && total_err > target()) {
    Interval worst = heap.top();
    if (worst.depth >= opts.max_depth || static_cast<int>(heap.size()) >= opts.max_intervals) {
      throw QuadratureError("adaptive quadrature did not converge: estimated error " +
                                std::to_string(total_err) + " exceeds target " +
                                std::to_string(target()),
                            total, total_err / std::max(std::fabs(total), 1e-300));
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Interval left = evaluate(f, worst.a, mid, worst.depth + 1);
    Interval right = evaluate(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed drift accumulated by the incremental updates.
  QuadratureResult out;
  out.intervals = static_cast<int>(heap.size());
  std::vector<Interval> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& l, const Interval& r) { return l.a < r.a; });
  for (const auto& p : parts) {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  const std::array<double, 2> bp{a, b};
  return integrate(f, bp, opts);
}

}  // namespace minclique::numerics
