#pragma once

#include <stdexcept>
#include <string>

namespace minclique {

/// An argument lies outside the domain of the operation (k > n, w < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A theorem hypothesis or validity-range condition does not hold.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size guard (vertex count, host order) was exceeded without forcing.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate,
                  double achieved_tolerance)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        achieved_tolerance_(achieved_tolerance) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double best_estimate_;
  double achieved_tolerance_;
};

}  // namespace minclique
