#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosent/density.hpp"
#include "chaosent/map_model.hpp"
#include "chaosent/partition.hpp"

namespace chaosent {

// Probability of every N-bit word, indexed like RefinedPartition cells.
class ProbabilityTable {
 public:
  // Throws DomainError on negative entries or a size other than 2^depth.
  ProbabilityTable(int depth, std::vector<double> probs);

  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](Word w) const { return probs_[w]; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double total() const noexcept;

  // Factor applied to the raw integrals to reach unit total (1 if none).
  double renormalization() const noexcept { return renormalization_; }
  // Nonempty cells narrower than one density bin at construction time.
  std::size_t sub_bin_cells() const noexcept { return sub_bin_cells_; }

  // Depth N-1 table obtained by summing over the last bit.
  ProbabilityTable marginal() const;

 private:
  friend ProbabilityTable block_probabilities(const RefinedPartition&, const DensityHistogram&,
                                              bool);
  int depth_;
  std::vector<double> probs_;
  double renormalization_ = 1.0;
  std::size_t sub_bin_cells_ = 0;
};

// P_N(w) = integral of the density over cell(w), renormalized. Throws
// InvariantViolation when the renormalization factor is more than 1e-6 from
// 1. With `strict`, a nonempty cell narrower than one bin raises
// ResolutionError; otherwise such cells are only counted.
ProbabilityTable block_probabilities(const RefinedPartition& p, const DensityHistogram& f,
                                     bool strict = true);

// |P(0) - 1/2| of a depth-1 table.
double bias(const ProbabilityTable& t);

// -sum p log2 p with 0 log 0 = 0, summed pairwise in a fixed order.
double block_entropy(const ProbabilityTable& t);

// h_1 = H_1, h_k = H_k - H_{k-1}.
std::vector<double> per_bit_entropies(std::span<const double> block_entropies);

struct RateEstimate {
  double value = 0.0;   // last h_N; an upper bound on the limit
  double spread = 0.0;  // max - min over the trailing window
  std::size_t window = 0;
  bool converged() const noexcept { return spread <= kSpreadLimit; }

  static constexpr double kSpreadLimit = 1e-3;
};

RateEstimate entropy_rate_estimate(std::span<const double> h, std::size_t window);

// Output budget of an extractor fed at rate R by a source with entropy rate h.
struct RateBudget {
  double input_rate = 0.0;
  double output_rate = 0.0;  // h * R
  double overhead = 0.0;     // 1 / h; infinite when h == 0
  bool no_entropy = false;
};

RateBudget rate_budget(double input_rate, double h);

// sum |a - b| / 2 over words.
double total_variation(const ProbabilityTable& a, const ProbabilityTable& b);

struct Provenance {
  std::string map_name;
  DensityMeta density;
  std::size_t bins = 0;
  int depth = 0;
  std::string config_hash;
};

struct EntropyReport {
  std::vector<ProbabilityTable> tables;  // depths 1..N
  std::vector<double> block_entropy;     // H_1..H_N
  std::vector<double> per_bit;           // h_1..h_N
  RateEstimate rate;
  double bias = 0.0;
  std::optional<RateBudget> budget;
  Provenance provenance;
  std::vector<std::string> warnings;
};

struct AnalysisOptions {
  int depth = 14;
  std::size_t window = 4;
  std::optional<double> input_rate;
  RefineOptions refine;
  bool strict_resolution = false;
  double monotone_slack = 1e-6;  // h_N increases beyond this are reported as warnings
};

// Refinement, block probabilities, entropies, rate estimate and optional
// budget in one pass. Every run goes through check_report.
EntropyReport analyze(const MapModel& map, const SymbolPartition& s, const DensityHistogram& f,
                      const AnalysisOptions& opts = {});

// Structural assertions on a finished report; throws InvariantViolation.
//  - tables sum to 1 (1e-8) and marginalize onto the previous depth (1e-6)
//  - 0 <= H_N <= N
//  - sum h_k == H_N (1e-12)
//  - 0 <= bias <= 1/2
void check_report(const EntropyReport& r);

// Index k of the first h[k] > h[k-1] + slack, if any.
std::optional<std::size_t> first_increase(std::span<const double> h, double slack);

// Plot-ready CSV with columns N,H_N,h_N.
std::string entropy_to_csv(const EntropyReport& r);

}  // namespace chaosent
