#include "chaosent/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace chaosent {

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  for (auto& p : pieces) {
    p.lo = std::clamp(p.lo, 0.0, 1.0);
    p.hi = std::clamp(p.hi, 0.0, 1.0);
  }
  std::erase_if(pieces, [](const Interval& p) { return !(p.hi - p.lo >= kMinWidth); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  pieces_.reserve(pieces.size());
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo - pieces_.back().hi < kMinWidth) {
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    } else {
      pieces_.push_back(p);
    }
  }
}

IntervalSet::IntervalSet(double lo, double hi) : IntervalSet(std::vector<Interval>{{lo, hi}}) {}

double IntervalSet::measure() const noexcept {
  double total = 0.0;
  for (const auto& p : pieces_) total += p.length();
  return total;
}

double IntervalSet::min_width() const noexcept {
  if (pieces_.empty()) return 0.0;
  double w = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) w = std::min(w, p.length());
  return w;
}

bool IntervalSet::contains(double x) const noexcept {
  // First component whose upper end is >= x.
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Interval& p, double v) { return p.hi < v; });
  return it != pieces_.end() && it->contains(x);
}

double IntervalSet::distance_to_boundary(double x) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) {
    d = std::min({d, std::abs(x - p.lo), std::abs(x - p.hi)});
  }
  return d;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  auto a = pieces_.begin();
  auto b = other.pieces_.begin();
  while (a != pieces_.end() && b != other.pieces_.end()) {
    const double lo = std::max(a->lo, b->lo);
    const double hi = std::min(a->hi, b->hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a->hi < b->hi) {
      ++a;
    } else {
      ++b;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all(pieces_);
  all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  for (const auto& p : pieces_) {
    if (p.lo > cursor) out.push_back({cursor, p.lo});
    cursor = p.hi;
  }
  if (cursor < 1.0) out.push_back({cursor, 1.0});
  return IntervalSet(std::move(out));
}

bool IntervalSet::approx_equal(const IntervalSet& other, double tol) const noexcept {
  if (pieces_.size() != other.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (std::abs(pieces_[i].lo - other.pieces_[i].lo) > tol) return false;
    if (std::abs(pieces_[i].hi - other.pieces_[i].hi) > tol) return false;
  }
  return true;
}

double IntervalSet::symmetric_difference(const IntervalSet& other) const {
  return unite(other).measure() - intersect(other).measure();
}

std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
  if (s.empty()) return os << "{}";
  bool first = true;
  for (const auto& p : s.intervals()) {
    if (!first) os << " U ";
    os << '(' << p.lo << ", " << p.hi << ']';
    first = false;
  }
  return os;
}

}  // namespace chaosent
