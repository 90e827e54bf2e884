#include "chaosent/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "chaosent/error.hpp"

namespace chaosent {
namespace {

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Branch make_branch(double lo, double hi, double y_lo, double y_hi,
                   std::function<double(double)> inverse) {
  Branch b;
  b.domain = {lo, hi};
  b.direction = y_hi > y_lo ? Direction::increasing : Direction::decreasing;
  // Rounding can push an extremum a few ulps past the unit square; pin it so
  // preimages of sets touching 0 or 1 land exactly on the branch endpoints.
  b.image = {std::clamp(std::min(y_lo, y_hi), 0.0, 1.0), std::clamp(std::max(y_lo, y_hi), 0.0, 1.0)};
  b.inverse = std::move(inverse);
  return b;
}

}  // namespace

double invert_monotone(const std::function<double(double)>& f, double lo, double hi,
                       Direction direction, double y) {
  const bool up = direction == Direction::increasing;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (up ? y <= f_lo : y >= f_lo) return lo;
  if (up ? y >= f_hi : y <= f_hi) return hi;

  double a = lo;
  double b = hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) break;
    const double v = f(mid);
    if (v == y) return mid;
    if ((v < y) == up) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return std::abs(f(a) - y) <= std::abs(f(b) - y) ? a : b;
}

MapModel::MapModel(std::string name, std::function<double(double)> eval,
                   std::vector<Branch> branches)
    : name_(std::move(name)), eval_(std::move(eval)), branches_(std::move(branches)) {}

MapModel MapModel::polynomial(std::vector<double> coefficients,
                              std::vector<double> critical_points, std::string name) {
  if (coefficients.empty()) throw ConfigError("polynomial map: coefficients must be nonempty");
  std::sort(critical_points.begin(), critical_points.end());
  for (double c : critical_points) {
    if (!(c > 0.0 && c < 1.0)) {
      throw ConfigError("polynomial map: critical point outside (0, 1)");
    }
  }
  if (std::adjacent_find(critical_points.begin(), critical_points.end()) !=
      critical_points.end()) {
    throw ConfigError("polynomial map: duplicate critical point");
  }

  auto eval = [coefficients](double x) { return horner(coefficients, x); };

  std::vector<double> cuts{0.0};
  cuts.insert(cuts.end(), critical_points.begin(), critical_points.end());
  cuts.push_back(1.0);

  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double y_lo = eval(lo);
    const double y_hi = eval(hi);
    if (y_lo == y_hi) {
      throw ConfigError("polynomial map: branch on [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "] is not strictly monotone");
    }
    const Direction dir = y_hi > y_lo ? Direction::increasing : Direction::decreasing;

    // Critical points are declared, not derived; reject declarations that miss
    // a turning point or leave the unit square.
    constexpr int kProbe = 512;
    double prev = y_lo;
    for (int k = 1; k <= kProbe; ++k) {
      const double x = lo + (hi - lo) * k / kProbe;
      const double v = eval(x);
      const bool ok = dir == Direction::increasing ? v > prev : v < prev;
      if (!ok) {
        throw ConfigError("polynomial map: not monotone between declared critical points near x=" +
                          std::to_string(x));
      }
      if (v < -1e-12 || v > 1.0 + 1e-12) {
        throw ConfigError("polynomial map: value leaves [0, 1] near x=" + std::to_string(x));
      }
      prev = v;
    }
    if (y_lo < -1e-12 || y_lo > 1.0 + 1e-12) {
      throw ConfigError("polynomial map: value leaves [0, 1] at x=" + std::to_string(lo));
    }

    auto inverse = [eval, lo, hi, dir](double y) { return invert_monotone(eval, lo, hi, dir, y); };
    branches.push_back(make_branch(lo, hi, y_lo, y_hi, std::move(inverse)));
  }
  return MapModel(std::move(name), std::move(eval), std::move(branches));
}

MapModel MapModel::piecewise_linear(std::vector<Breakpoint> points, std::string name) {
  if (points.size() < 2) throw ConfigError("piecewise_linear map: need at least two breakpoints");
  if (points.front().x != 0.0 || points.back().x != 1.0) {
    throw ConfigError("piecewise_linear map: breakpoints must start at x=0 and end at x=1");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.y < 0.0 || p.y > 1.0) {
      throw ConfigError("piecewise_linear map: breakpoint value outside [0, 1]");
    }
    if (i > 0 && p.x < points[i - 1].x) {
      throw ConfigError("piecewise_linear map: breakpoints must be sorted by x");
    }
    if (i > 1 && p.x == points[i - 1].x && p.x == points[i - 2].x) {
      throw ConfigError("piecewise_linear map: at most two breakpoints may share an x");
    }
  }

  struct Segment {
    double x0, y0, x1, y1;
  };
  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    if (a.x == b.x) continue;  // jump
    if (a.y == b.y) {
      throw ConfigError("piecewise_linear map: flat segment on [" + std::to_string(a.x) + ", " +
                        std::to_string(b.x) + "]");
    }
    segments.push_back({a.x, a.y, b.x, b.y});
  }

  std::vector<Branch> branches;
  for (const auto& s : segments) {
    const double slope = (s.y1 - s.y0) / (s.x1 - s.x0);
    auto inverse = [s, slope](double y) {
      const double x = s.x0 + (y - s.y0) / slope;
      return std::clamp(x, s.x0, s.x1);
    };
    branches.push_back(make_branch(s.x0, s.x1, s.y0, s.y1, std::move(inverse)));
  }

  auto eval = [segments](double x) {
    // Segment whose half-open domain (x0, x1] holds x; x = 0 uses the first.
    auto it = std::lower_bound(segments.begin(), segments.end(), x,
                               [](const Segment& s, double v) { return s.x1 < v; });
    if (it == segments.end()) it = std::prev(segments.end());
    const double t = (x - it->x0) / (it->x1 - it->x0);
    return it->y0 + t * (it->y1 - it->y0);
  };
  return MapModel(std::move(name), std::move(eval), std::move(branches));
}

MapModel MapModel::cubic_sample() {
  const double k = 3.0 * std::numbers::sqrt3 / 2.0;
  return polynomial({0.0, k, 0.0, -k}, {1.0 / std::numbers::sqrt3}, "cubic_sample");
}

MapModel MapModel::tent() {
  return piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}, "tent");
}

MapModel MapModel::bernoulli_shift() {
  return piecewise_linear({{0.0, 0.0}, {0.5, 1.0}, {0.5, 0.0}, {1.0, 1.0}}, "bernoulli_shift");
}

MapModel MapModel::logistic() { return polynomial({0.0, 4.0, -4.0}, {0.5}, "logistic"); }

double MapModel::operator()(double x) const {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream msg;
    msg << "map '" << name_ << "' evaluated outside (0, 1): x=" << x;
    throw DomainError(msg.str());
  }
  return eval_unchecked(x);
}

double MapModel::eval_unchecked(double x) const {
  return std::clamp(eval_(x), kEdge, 1.0 - kEdge);
}

std::size_t MapModel::branch_of(double x) const {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (x <= branches_[i].domain.hi) return i;
  }
  return branches_.size() - 1;
}

std::vector<double> MapModel::preimages(double y) const {
  std::vector<double> out;
  for (const auto& b : branches_) {
    if (y >= b.image.lo && y <= b.image.hi) out.push_back(b.inverse(y));
  }
  std::sort(out.begin(), out.end());
  // A value shared by two branches at a common endpoint is one preimage.
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

IntervalSet MapModel::preimage_of_set(const IntervalSet& s) const {
  std::vector<Interval> pieces;
  for (const auto& b : branches_) {
    for (const auto& iv : s.intervals()) {
      const double lo = std::max(iv.lo, b.image.lo);
      const double hi = std::min(iv.hi, b.image.hi);
      if (!(lo < hi)) continue;
      // Image endpoints map exactly onto the domain endpoints.
      const bool up = b.direction == Direction::increasing;
      const double x_at_lo = lo == b.image.lo ? (up ? b.domain.lo : b.domain.hi) : b.inverse(lo);
      const double x_at_hi = hi == b.image.hi ? (up ? b.domain.hi : b.domain.lo) : b.inverse(hi);
      pieces.push_back({std::min(x_at_lo, x_at_hi), std::max(x_at_lo, x_at_hi)});
    }
  }
  return IntervalSet(std::move(pieces));
}

}  // namespace chaosent
