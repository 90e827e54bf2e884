#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace chaosent {

// A subinterval (lo, hi] of [0, 1]. Points on a shared boundary belong to the
// interval on the left, so adjacent cells never both claim a point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo < x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, pairwise-disjoint union of intervals inside [0, 1].
//
// Every constructor normalizes its input: endpoints are clipped to [0, 1],
// pieces shorter than kMinWidth are dropped, and overlapping or touching
// pieces (gap below kMinWidth) are merged. Slivers that narrow only arise from
// rounding in root finding, so dropping them changes the measure by less than
// the root-finding tolerance.
class IntervalSet {
 public:
  static constexpr double kMinWidth = 1e-14;

  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> pieces);
  IntervalSet(double lo, double hi);

  static IntervalSet unit() { return IntervalSet(0.0, 1.0); }

  std::span<const Interval> intervals() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  bool empty() const noexcept { return pieces_.empty(); }

  double measure() const noexcept;
  // Width of the narrowest component; 0 for the empty set.
  double min_width() const noexcept;
  bool contains(double x) const noexcept;
  // Distance from x to the nearest endpoint of any component (infinity if empty).
  double distance_to_boundary(double x) const noexcept;

  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;
  // Complement relative to (0, 1].
  IntervalSet complement() const;

  // True when both sets have the same components with endpoints within tol.
  bool approx_equal(const IntervalSet& other, double tol) const noexcept;
  // Measure of (this \ other) U (other \ this).
  double symmetric_difference(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> pieces_;
};

std::ostream& operator<<(std::ostream& os, const IntervalSet& s);

}  // namespace chaosent
