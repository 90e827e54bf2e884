#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "chaosent/interval_set.hpp"

namespace chaosent {

enum class Direction { increasing, decreasing };

// Maximal interval on which the map is strictly monotone.
struct Branch {
  Interval domain;
  Direction direction = Direction::increasing;
  // Raw (unclamped) map values at the domain endpoints, ordered so that
  // image.lo < image.hi.
  Interval image;
  // Unique preimage inside `domain` of a value in `image`; values outside the
  // image are mapped to the nearest domain endpoint.
  std::function<double(double)> inverse;
};

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;
};

// A 1-D map of the open unit interval into itself, decomposed into monotone
// branches. Immutable after construction and safe to share across threads.
class MapModel {
 public:
  // Values are clamped to [kEdge, 1 - kEdge] so the orbit never leaves (0, 1).
  static constexpr double kEdge = 1e-15;

  // x -> (3 sqrt(3) / 2) x (1 - x^2), maximum 1 at x = 1/sqrt(3).
  static MapModel cubic_sample();
  // x -> 1 - |1 - 2x|
  static MapModel tent();
  // x -> 2x mod 1
  static MapModel bernoulli_shift();
  // x -> 4x(1 - x)
  static MapModel logistic();

  // Polynomial with ascending-power coefficients. The critical points split
  // [0, 1] into the monotone branches; throws ConfigError if they do not.
  static MapModel polynomial(std::vector<double> coefficients,
                             std::vector<double> critical_points, std::string name);

  // Piecewise-linear interpolation of breakpoints sorted by x. Two consecutive
  // breakpoints with the same x encode a jump; each linear segment is a branch.
  static MapModel piecewise_linear(std::vector<Breakpoint> breakpoints, std::string name);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }

  // M(x) for 0 < x < 1, clamped into the open interval. Throws DomainError
  // otherwise.
  double operator()(double x) const;
  // Clamped evaluation without the domain check; x may be 0 or 1.
  double eval_unchecked(double x) const;
  // Unclamped map value, for slope estimates and branch bookkeeping.
  double raw(double x) const { return eval_(x); }

  // Every x with M(x) = y, one per branch whose image contains y, ascending.
  std::vector<double> preimages(double y) const;

  // {x : M(x) in s}, assembled branch by branch from inverse images of the
  // component endpoints.
  IntervalSet preimage_of_set(const IntervalSet& s) const;

  // Index of the branch whose half-open domain (lo, hi] holds x.
  std::size_t branch_of(double x) const;

 private:
  MapModel(std::string name, std::function<double(double)> eval, std::vector<Branch> branches);

  std::string name_;
  std::function<double(double)> eval_;
  std::vector<Branch> branches_;
};

// Inverts a strictly monotone f on [lo, hi] by bisection down to adjacent
// doubles. y outside [f(lo), f(hi)] returns the nearer endpoint.
double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       Direction direction, double y);

}  // namespace chaosent
