#include <doctest.h>

#include <random>
#include <vector>

#include "chaosent/interval_set.hpp"

using namespace chaosent;

namespace {

IntervalSet random_set(std::mt19937_64& rng, int max_pieces) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> n(0, max_pieces);
  std::vector<Interval> pieces;
  const int count = n(rng);
  for (int i = 0; i < count; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    pieces.push_back({a, b});
  }
  return IntervalSet(std::move(pieces));
}

}  // namespace

TEST_SUITE("interval_set") {
  TEST_CASE("normalization sorts, merges and clips") {
    const IntervalSet s({{0.6, 0.8}, {0.1, 0.3}, {0.25, 0.4}, {0.8, 0.9}, {-0.5, 0.05}, {0.95, 1.5}});
    REQUIRE(s.size() == 4);
    CHECK(s.intervals()[0] == Interval{0.0, 0.05});
    CHECK(s.intervals()[1] == Interval{0.1, 0.4});
    CHECK(s.intervals()[2] == Interval{0.6, 0.9});
    CHECK(s.intervals()[3] == Interval{0.95, 1.0});
    CHECK(s.measure() == doctest::Approx(0.05 + 0.3 + 0.3 + 0.05));
  }

  TEST_CASE("slivers below the minimum width are dropped") {
    const IntervalSet s({{0.2, 0.2 + 1e-16}, {0.5, 0.6}});
    REQUIRE(s.size() == 1);
    CHECK(s.intervals()[0] == Interval{0.5, 0.6});
    CHECK(IntervalSet(0.3, 0.3).empty());
  }

  TEST_CASE("membership is half-open on the left") {
    const IntervalSet s(0.25, 0.5);
    CHECK_FALSE(s.contains(0.25));
    CHECK(s.contains(0.5));
    CHECK(s.contains(0.3));
    CHECK_FALSE(s.contains(0.50001));
    const IntervalSet u = IntervalSet::unit();
    CHECK_FALSE(u.contains(0.0));
    CHECK(u.contains(1.0));
  }

  TEST_CASE("set algebra on a worked example") {
    const IntervalSet a({{0.0, 0.3}, {0.5, 0.7}});
    const IntervalSet b({{0.2, 0.6}});
    const auto i = a.intersect(b);
    REQUIRE(i.size() == 2);
    CHECK(i.intervals()[0].lo == doctest::Approx(0.2));
    CHECK(i.intervals()[0].hi == doctest::Approx(0.3));
    CHECK(i.intervals()[1].lo == doctest::Approx(0.5));
    CHECK(i.intervals()[1].hi == doctest::Approx(0.6));
    const auto u = a.unite(b);
    REQUIRE(u.size() == 1);
    CHECK(u.measure() == doctest::Approx(0.7));
    const auto c = a.complement();
    CHECK(c.measure() == doctest::Approx(0.5));
    CHECK(c.intersect(a).empty());
    CHECK(a.symmetric_difference(b) == doctest::Approx(0.7 - 0.2));
    CHECK(a.distance_to_boundary(0.45) == doctest::Approx(0.05));
    CHECK(a.min_width() == doctest::Approx(0.2));
  }

  TEST_CASE("approx_equal tolerates endpoint jitter only") {
    const IntervalSet a(0.2, 0.4);
    CHECK(a.approx_equal(IntervalSet(0.2 + 1e-12, 0.4), 1e-9));
    CHECK_FALSE(a.approx_equal(IntervalSet(0.2, 0.41), 1e-9));
    CHECK_FALSE(a.approx_equal(IntervalSet({{0.2, 0.3}, {0.31, 0.4}}), 1e-9));
  }

  TEST_CASE("property: inclusion-exclusion, complement and idempotence") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
      const auto a = random_set(rng, 6);
      const auto b = random_set(rng, 6);
      const double ma = a.measure(), mb = b.measure();
      CHECK(a.unite(b).measure() + a.intersect(b).measure() == doctest::Approx(ma + mb).epsilon(1e-12));
      CHECK(a.complement().measure() == doctest::Approx(1.0 - ma).epsilon(1e-12));
      CHECK(a.complement().intersect(a).measure() < 1e-12);
      CHECK(a.complement().complement().approx_equal(a, 1e-12));
      CHECK(a.unite(a) == a);
      CHECK(a.intersect(a) == a);
      CHECK(a.intersect(b) == b.intersect(a));
      CHECK(a.symmetric_difference(b) >= -1e-15);
      // Components sorted, disjoint and not touching.
      const auto u = a.unite(b);
      const auto iv = u.intervals();
      for (std::size_t k = 0; k < iv.size(); ++k) {
        CHECK(iv[k].lo < iv[k].hi);
        CHECK(iv[k].lo >= 0.0);
        CHECK(iv[k].hi <= 1.0);
        if (k > 0) CHECK(iv[k - 1].hi < iv[k].lo);
      }
    }
  }

  TEST_CASE("property: contains agrees with the component list") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const auto s = random_set(rng, 5);
      for (int k = 0; k < 20; ++k) {
        const double x = u(rng);
        bool inside = false;
        for (const auto& iv : s.intervals()) inside = inside || iv.contains(x);
        CHECK(s.contains(x) == inside);
      }
    }
  }
}
