#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "chaosent/error.hpp"
#include "chaosent/map_model.hpp"

using namespace chaosent;

namespace {

const double kXb = 1.0 / std::numbers::sqrt3;

// Real roots of x^3 - x + c = 0 in (0, 1) by the trigonometric formula.
std::vector<double> cubic_roots(double c) {
  std::vector<double> out;
  const double r = 2.0 / std::numbers::sqrt3;
  const double phi = std::acos(-1.5 * std::numbers::sqrt3 * c);
  for (int j = 0; j < 3; ++j) {
    const double x = r * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * j / 3.0);
    if (x > 0.0 && x < 1.0) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("map_model") {
  TEST_CASE("cubic sample map values") {
    const auto m = MapModel::cubic_sample();
    CHECK(m(0.5) == doctest::Approx(0.974278579257493).epsilon(1e-14));
    CHECK(m(kXb) == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(m.branches().size() == 2);
    CHECK(m.branches()[0].direction == Direction::increasing);
    CHECK(m.branches()[1].direction == Direction::decreasing);
    CHECK(m.branches()[0].domain.hi == doctest::Approx(kXb).epsilon(1e-15));
    CHECK(m.branch_of(0.3) == 0);
    CHECK(m.branch_of(0.9) == 1);
  }

  TEST_CASE("domain is the open unit interval") {
    const auto m = MapModel::cubic_sample();
    CHECK_THROWS_AS(m(0.0), DomainError);
    CHECK_THROWS_AS(m(1.0), DomainError);
    CHECK_THROWS_AS(m(-0.1), DomainError);
    CHECK_THROWS_AS(m(std::nan("")), DomainError);
    CHECK(m.eval_unchecked(1e-300) >= MapModel::kEdge);
  }

  TEST_CASE("preimages of 1/sqrt(3) match the trigonometric closed form") {
    const auto m = MapModel::cubic_sample();
    const double k = 1.5 * std::numbers::sqrt3;
    const auto want = cubic_roots(kXb / k);
    const auto got = m.preimages(kXb);
    REQUIRE(got.size() == 2);
    REQUIRE(want.size() == 2);
    CHECK(got[0] == doctest::Approx(0.235239879906986).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(0.861408481072174).epsilon(1e-12));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
      CHECK(std::abs(m(got[i]) - kXb) < 1e-12);
    }
  }

  TEST_CASE("property: every preimage maps back, for every built-in map") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (const auto& m : {MapModel::cubic_sample(), MapModel::tent(), MapModel::bernoulli_shift(),
                          MapModel::logistic()}) {
      for (int t = 0; t < 200; ++t) {
        const double y = u(rng);
        const auto xs = m.preimages(y);
        CHECK(xs.size() == 2);
        for (double x : xs) CHECK(std::abs(m.raw(x) - y) < 1e-12);
      }
    }
  }

  TEST_CASE("property: tent pulls back sets to sets of equal measure") {
    // Tent preserves Lebesgue measure: m(M^-1 A) = m(A).
    const auto m = MapModel::tent();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      const IntervalSet s(a, b);
      CHECK(m.preimage_of_set(s).measure() == doctest::Approx(s.measure()).epsilon(1e-12));
    }
  }

  TEST_CASE("preimage of a set covers exactly the points that map into it") {
    const auto m = MapModel::cubic_sample();
    const IntervalSet target({{0.1, 0.3}, {0.7, 0.95}});
    const auto pre = m.preimage_of_set(target);
    for (int i = 1; i < 2000; ++i) {
      const double x = i / 2000.0 + 1.3e-5;
      if (x >= 1.0) continue;
      if (pre.distance_to_boundary(x) < 1e-9) continue;
      CHECK(pre.contains(x) == target.contains(m(x)));
    }
    // Whole range pulls back to the whole domain.
    CHECK(m.preimage_of_set(IntervalSet::unit()).measure() == doctest::Approx(1.0));
  }

  TEST_CASE("piecewise-linear Bernoulli shift with a jump") {
    const auto m = MapModel::bernoulli_shift();
    CHECK(m(0.25) == doctest::Approx(0.5));
    CHECK(m(0.75) == doctest::Approx(0.5));
    const auto xs = m.preimages(0.5);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == doctest::Approx(0.25));
    CHECK(xs[1] == doctest::Approx(0.75));
  }

  TEST_CASE("user polynomial is validated") {
    CHECK_NOTHROW(MapModel::polynomial({0, 4, -4}, {0.5}, "logistic_again"));
    // Leaves the unit interval.
    CHECK_THROWS_AS(MapModel::polynomial({0, 5, -5}, {0.5}, "too_tall"), ConfigError);
    // Critical point missing: not monotone on the declared branch.
    CHECK_THROWS_AS(MapModel::polynomial({0, 4, -4}, {}, "no_critical"), ConfigError);
  }

  TEST_CASE("user piecewise-linear maps are validated") {
    CHECK_NOTHROW(MapModel::piecewise_linear({{0, 0}, {0.4, 1}, {1, 0}}, "skew_tent"));
    CHECK_THROWS_AS(MapModel::piecewise_linear({{0, 0}, {0.5, 1.2}, {1, 0}}, "bad"), ConfigError);
    CHECK_THROWS_AS(MapModel::piecewise_linear({{0, 0}}, "short"), ConfigError);
  }
}
