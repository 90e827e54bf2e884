#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "chaosent/density.hpp"
#include "chaosent/entropy.hpp"
#include "chaosent/error.hpp"
#include "chaosent/io.hpp"

using namespace chaosent;

namespace {

const double kXb = 1.0 / std::numbers::sqrt3;

ProbabilityTable table(std::vector<double> p) {
  int depth = 0;
  while ((std::size_t{1} << depth) < p.size()) ++depth;
  return ProbabilityTable(depth, std::move(p));
}

AnalysisOptions depth(int n) {
  AnalysisOptions o;
  o.depth = n;
  return o;
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("block entropy oracles") {
    CHECK(block_entropy(table({0.57, 0.43})) == doctest::Approx(0.985815037178920).epsilon(1e-12));
    CHECK(block_entropy(table({0.35, 0.22, 0.23, 0.20})) ==
          doctest::Approx(1.962727308873196).epsilon(1e-12));
    CHECK(block_entropy(table(std::vector<double>(8, 0.125))) == doctest::Approx(3.0));
    CHECK(block_entropy(table({1.0, 0.0})) == 0.0);
  }

  TEST_CASE("per-bit entropies are successive differences") {
    const std::vector<double> H{0.985815037178920, 1.962727308873196};
    const auto h = per_bit_entropies(H);
    CHECK(h[0] == doctest::Approx(0.985815037178920));
    CHECK(h[1] == doctest::Approx(0.976912271694276).epsilon(1e-12));
    const std::vector<double> coin{1, 2, 3};
    for (double v : per_bit_entropies(coin)) CHECK(v == doctest::Approx(1.0));
  }

  TEST_CASE("bias") {
    CHECK(bias(table({0.57, 0.43})) == doctest::Approx(0.07));
    CHECK(bias(table({0.5, 0.5})) == 0.0);
    CHECK(bias(table({1.0, 0.0})) == 0.5);
  }

  TEST_CASE("probability table validation and marginals") {
    CHECK_THROWS_AS(ProbabilityTable(2, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(ProbabilityTable(1, {1.2, -0.2}), DomainError);
    const auto t = table({0.35, 0.22, 0.23, 0.20});
    const auto m = t.marginal();
    CHECK(m.depth() == 1);
    CHECK(m[0] == doctest::Approx(0.57));
    CHECK(m[1] == doctest::Approx(0.43));
    CHECK(total_variation(t, t) == 0.0);
    CHECK(total_variation(table({1, 0}), table({0, 1})) == doctest::Approx(1.0));
  }

  TEST_CASE("rate estimate and budget") {
    const std::vector<double> h{0.99, 0.985, 0.9812, 0.9811, 0.98105};
    const auto r = entropy_rate_estimate(h, 3);
    CHECK(r.value == doctest::Approx(0.98105));
    CHECK(r.spread == doctest::Approx(0.9812 - 0.98105));
    CHECK(r.converged());
    CHECK_THROWS_AS(entropy_rate_estimate(h, 1), DomainError);
    CHECK_THROWS_AS(entropy_rate_estimate(h, 6), DomainError);

    CHECK(rate_budget(1e6, 1.0).output_rate == doctest::Approx(1e6));
    CHECK(rate_budget(1e6, 0.98).output_rate == doctest::Approx(0.98e6));
    CHECK(rate_budget(1e6, 0.5).output_rate == doctest::Approx(0.5e6));
    CHECK(rate_budget(1e6, 0.5).overhead == doctest::Approx(2.0));
    const auto none = rate_budget(1e6, 0.0);
    CHECK(none.no_entropy);
    CHECK(none.output_rate == 0.0);
    CHECK(std::isinf(none.overhead));
    CHECK_THROWS_AS(rate_budget(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(rate_budget(1e6, 1.5), DomainError);
  }

  TEST_CASE("Bernoulli shift with uniform density: dyadic words are exactly uniform") {
    const auto m = MapModel::bernoulli_shift();
    const auto p = refine(m, SymbolPartition::threshold(0.5), 3);
    const auto t = block_probabilities(p, DensityHistogram::uniform(1024), true);
    for (double v : t.probs()) CHECK(v == doctest::Approx(0.125).epsilon(1e-12));
  }

  TEST_CASE("Bernoulli shift with S(0) = (0, 0.7]: bias 0.2") {
    const auto m = MapModel::bernoulli_shift();
    const auto f = fp_fixed_point(m, 1024);
    const auto r = analyze(m, SymbolPartition::threshold(0.7), f, depth(6));
    CHECK(r.bias == doctest::Approx(0.2).epsilon(1e-6));
  }

  TEST_CASE("strict resolution refuses cells narrower than a bin") {
    const auto m = MapModel::cubic_sample();
    const auto p = refine(m, SymbolPartition::threshold(kXb), 12);
    const auto f = DensityHistogram::uniform(4096);
    CHECK_THROWS_AS(block_probabilities(p, f, true), ResolutionError);
    const auto t = block_probabilities(p, f, false);
    CHECK(t.sub_bin_cells() > 0);
  }

  TEST_CASE("renormalization outside 1e-6 is an invariant violation") {
    // A partition whose cells miss part of (0, 1] loses mass.
    const RefinedPartition holey(1, {IntervalSet(0.0, 0.4), IntervalSet(0.5, 1.0)});
    CHECK_THROWS_AS(block_probabilities(holey, DensityHistogram::uniform(64), false),
                    InvariantViolation);
  }

  TEST_CASE("analysis report invariants for every built-in map") {
    for (const auto& name : builtin_map_names()) {
      const auto m = builtin_map(name);
      const auto f = fp_fixed_point(m, 4096);
      const auto r = analyze(m, SymbolPartition::threshold(builtin_split(name)), f, depth(10));
      CHECK_NOTHROW(check_report(r));
      double chain = 0.0;
      for (double h : r.per_bit) chain += h;
      CHECK(std::abs(chain - r.block_entropy.back()) < 1e-12);
      for (std::size_t k = 1; k < r.tables.size(); ++k) {
        const auto mg = r.tables[k].marginal();
        for (std::size_t w = 0; w < mg.size(); ++w) {
          CHECK(std::abs(mg[static_cast<Word>(w)] - r.tables[k - 1][static_cast<Word>(w)]) < 1e-6);
        }
      }
      for (std::size_t k = 0; k < r.block_entropy.size(); ++k) {
        CHECK(r.block_entropy[k] >= 0.0);
        CHECK(r.block_entropy[k] <= static_cast<double>(k + 1) + 1e-12);
      }
      CHECK(r.provenance.map_name == name);
      CHECK(r.provenance.bins == 4096);
    }
  }

  TEST_CASE("check_report rejects a tampered report") {
    const auto m = MapModel::tent();
    auto r = analyze(m, SymbolPartition::threshold(0.5), DensityHistogram::uniform(256), depth(4));
    auto broken = r;
    broken.per_bit[2] += 1e-9;
    CHECK_THROWS_AS(check_report(broken), InvariantViolation);
    broken = r;
    broken.block_entropy[1] = 2.5;
    CHECK_THROWS_AS(check_report(broken), InvariantViolation);
  }

  TEST_CASE("tent and Bernoulli shift: h_N = 1 and no bias") {
    for (const auto* name : {"tent", "bernoulli_shift"}) {
      const auto m = builtin_map(name);
      const auto f = fp_fixed_point(m, 4096);
      const auto r = analyze(m, SymbolPartition::threshold(0.5), f, depth(12));
      CHECK(r.bias < 0.005);
      for (double h : r.per_bit) CHECK(h == doctest::Approx(1.0).epsilon(0.01));
      CHECK_FALSE(first_increase(r.per_bit, 1e-9).has_value());
    }
  }

  TEST_CASE("sample map: h_N non-increasing at fine density resolution") {
    const auto m = MapModel::cubic_sample();
    const auto f = fp_fixed_point(m, std::size_t{1} << 18);
    const auto r = analyze(m, SymbolPartition::threshold(kXb), f, depth(12));
    CHECK_FALSE(first_increase(r.per_bit, 1e-6).has_value());
    CHECK(r.rate.value > 0.98);
    CHECK(r.rate.value <= r.per_bit.front());
    CHECK(r.per_bit.front() == doctest::Approx(0.98588).epsilon(0.002));
  }

  TEST_CASE("logistic: h_N stays within 0.01 of the conjugate tent value 1") {
    const auto m = MapModel::logistic();
    const auto f = fp_fixed_point(m, 4096);
    const auto r = analyze(m, SymbolPartition::threshold(0.5), f, depth(12));
    for (double h : r.per_bit) CHECK(h == doctest::Approx(1.0).epsilon(0.01));
  }

  TEST_CASE("first_increase") {
    const std::vector<double> h{1.0, 0.9, 0.9000001, 0.8};
    CHECK(first_increase(h, 1e-6) == std::nullopt);
    CHECK(first_increase(h, 1e-8) == std::optional<std::size_t>(2));
  }

  TEST_CASE("csv export") {
    const auto r = analyze(MapModel::tent(), SymbolPartition::threshold(0.5),
                           DensityHistogram::uniform(256), depth(3));
    const auto csv = entropy_to_csv(r);
    CHECK(csv.rfind("N,H_N,h_N\n1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}
