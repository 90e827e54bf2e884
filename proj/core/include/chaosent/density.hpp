#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaosent/interval_set.hpp"
#include "chaosent/map_model.hpp"
#include "chaosent/random.hpp"

namespace chaosent {

enum class DensityMethod { montecarlo, fp_operator };

const char* to_string(DensityMethod m) noexcept;

// Parameters of the dithered digitized iteration.
struct DitherConfig {
  std::uint64_t seed = 1;
  std::uint64_t burn_in = 10'000;
  std::uint64_t samples = 4'000'000;  // K, counted iterations
  // Grid points per histogram bin. The recurrence runs on L * oversample
  // points; 1 iterates directly on the histogram grid, which leaves comb
  // artifacts wherever |M'| > 2.
  std::size_t oversample = 64;

  static constexpr std::uint64_t kMinBurnIn = 1'000;
  static constexpr std::uint64_t kSamplesPerBin = 100;

  // Throws ResolutionError when K < 100 L and ConfigError for a short burn-in.
  void validate(std::size_t bins) const;
};

struct DensityMeta {
  DensityMethod method = DensityMethod::fp_operator;
  // montecarlo
  std::uint64_t samples = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 0;
  std::size_t oversample = 1;
  std::string rng;
  unsigned shards = 1;  // > 1: counts merged from independently seeded shards
  // fp_operator
  std::size_t iterations = 0;
  double last_distance = 0.0;
};

// Piecewise-constant density on the L half-open bins [i/L, (i+1)/L).
// weights[i] is the density value on bin i; (1/L) * sum(weights) == 1.
class DensityHistogram {
 public:
  DensityHistogram() = default;
  // Rescales to unit mass; throws DomainError on negative or all-zero input.
  DensityHistogram(std::vector<double> weights, DensityMeta meta);

  static DensityHistogram uniform(std::size_t bins);

  std::size_t bins() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  const DensityMeta& meta() const noexcept { return meta_; }
  DensityMethod method() const noexcept { return meta_.method; }

  double total_mass() const noexcept;
  // Probability mass on [0, x].
  double cdf(double x) const noexcept;
  // Integral of the density over s.
  double mass(const IntervalSet& s) const noexcept;

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // cumulative_[i] = mass of bins [0, i)
  DensityMeta meta_;
};

// L1 distance of the two densities, (1/L) * sum |a_i - b_i|. Bin counts must
// match.
double l1_distance(const DensityHistogram& a, const DensityHistogram& b);

// Bin-averaged density 1/(pi sqrt(x(1-x))), the invariant density of the
// full logistic map.
DensityHistogram logistic_reference_density(std::size_t bins);

// Digitized iteration on the grid of G points 1/G ... 1:
//     k_{n+1} = floor(G * M((k_n + u_n) / G) + a_n),
//     u_n ~ U[0, 1), a_n ~ U(-1, 1),
// with the index clamped to [1, G]. The state k stands for the cell
// [k/G, (k+1)/G); u_n places the map argument uniformly inside that cell.
// Without u_n (M evaluated at the grid point itself) the chain is a nearly
// deterministic walk on G states whose stationary law stays visibly off the
// invariant density even for large G.
// The map must outlive the iterator.
class DitheredIterator {
 public:
  DitheredIterator(const MapModel& map, std::size_t bins, std::uint64_t seed);

  std::size_t bins() const noexcept { return bins_; }
  std::uint64_t index() const noexcept { return index_; }
  double state() const noexcept { return static_cast<double>(index_) / bins_; }

  // Moves to the cell holding x, clamped to [1, G].
  void reset(double x);
  // Uniform point of the current cell, (k + u) / G capped at 1.
  double draw_point();
  // Next index from a point of the current cell.
  std::uint64_t step_from(double x);
  // draw_point then step_from; returns the new index in [1, G].
  std::uint64_t step() { return step_from(draw_point()); }

 private:
  const MapModel* map_;
  std::size_t bins_;
  Rng rng_;
  std::uint64_t index_;
};

// Invariant density from the visit counts of the dithered iteration on the
// grid of G = L * oversample points. Visits to grid point j/G land in the bin
// holding j/G; the endpoint 1 shares the last bin. With shards > 1 the K
// counted samples are split across independently seeded chains and the
// counts summed.
DensityHistogram mc_density(const MapModel& map, std::size_t bins, const DitherConfig& cfg,
                            unsigned shards = 1);

// Frobenius-Perron operator averaged over bins: the new mass of bin j is the
// old mass of M^{-1}(B_j). Integrating the preimage-sum form over a bin gives
// the same quantity by a change of variables, and stays finite next to
// critical points where 1 / |M'| is unbounded.
//
// Inside each source bin the density is reconstructed as a line through the
// bin average with a monotonized-central slope, so mass per bin is conserved
// and the reconstruction never goes negative. The preimage overlaps are
// computed once.
class TransferOperator {
 public:
  TransferOperator(const MapModel& map, std::size_t bins);

  std::size_t bins() const noexcept { return bins_; }
  DensityHistogram apply(const DensityHistogram& f) const;

 private:
  struct Term {
    std::size_t source;
    double overlap;  // measure of B_source intersected with M^{-1}(B_target)
    double moment;   // integral of (x - centre of B_source) over that overlap
  };
  std::size_t bins_;
  std::vector<std::size_t> offsets_;  // terms of bin j: [offsets_[j], offsets_[j+1])
  std::vector<Term> terms_;
};

DensityHistogram fp_step(const MapModel& map, const DensityHistogram& f);

struct FixedPointOptions {
  double tol = 1e-6;
  std::size_t max_iter = 10'000;
};

// Iterates the transfer operator from the uniform density until successive
// iterates differ by less than tol in L1. Throws ConvergenceError carrying
// the last distance when max_iter is exhausted.
DensityHistogram fp_fixed_point(const MapModel& map, std::size_t bins,
                                const FixedPointOptions& opts = {});

// Density export: CSV "t,f" with one row per bin (t = i/L).
std::string density_to_csv(const DensityHistogram& f);

}  // namespace chaosent
