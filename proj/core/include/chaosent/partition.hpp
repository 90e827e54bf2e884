#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaosent/interval_set.hpp"
#include "chaosent/map_model.hpp"

namespace chaosent {

// An N-bit output word packed with the first emitted bit as the most
// significant bit: (i_1, ..., i_N) -> sum i_k 2^(N-k).
using Word = std::uint32_t;

// "0110..." with i_1 first.
std::string word_string(Word w, int depth);
Word parse_word(const std::string& s);

// Split of the state space into the sets emitting bit 0 and bit 1.
class SymbolPartition {
 public:
  // S(1) defaults to the complement of S(0).
  explicit SymbolPartition(IntervalSet s0);
  // Throws ConfigError unless the sets are disjoint and cover (0, 1].
  SymbolPartition(IntervalSet s0, IntervalSet s1);

  // S(0) = (0, split], S(1) = (split, 1].
  static SymbolPartition threshold(double split);

  const IntervalSet& s0() const noexcept { return s0_; }
  const IntervalSet& s1() const noexcept { return s1_; }
  const IntervalSet& cell(int bit) const noexcept { return bit == 0 ? s0_ : s1_; }

  // Emitted bit for state x. States in neither set (only x <= 0) emit 0.
  int symbol(double x) const noexcept { return s1_.contains(x) ? 1 : 0; }

  // S(0) and S(1) swapped.
  SymbolPartition relabeled() const { return SymbolPartition(s1_, s0_); }

 private:
  IntervalSet s0_;
  IntervalSet s1_;
};

// Depth-N refinement: cells[w] is the set of initial states whose first N
// emitted bits spell w. Every word has an entry, possibly empty.
class RefinedPartition {
 public:
  RefinedPartition(int depth, std::vector<IntervalSet> cells);

  static RefinedPartition from_symbols(const SymbolPartition& s);

  int depth() const noexcept { return depth_; }
  std::size_t word_count() const noexcept { return cells_.size(); }
  const IntervalSet& cell(Word w) const { return cells_.at(w); }
  const std::vector<IntervalSet>& cells() const noexcept { return cells_; }

  std::size_t nonempty_cells() const noexcept;
  double total_measure() const noexcept;
  // Narrowest component over all nonempty cells.
  double min_width() const noexcept;
  // Word whose cell holds x, if any.
  std::optional<Word> locate(double x) const noexcept;
  // Sorted endpoints of every component of every cell.
  std::vector<double> boundaries() const;

 private:
  int depth_;
  std::vector<IntervalSet> cells_;
};

// Depth N -> N+1: cell(i_1 ... i_{N+1}) = S(i_1) intersected with the
// preimage of the depth-N cell (i_2 ... i_{N+1}). `workers` > 1 splits the
// preimage computations across threads; the result does not depend on it.
RefinedPartition refine_once(const MapModel& map, const SymbolPartition& s,
                             const RefinedPartition& p, unsigned workers = 1);

struct RefineOptions {
  int max_depth = 20;
  // When positive, refuse depths whose narrowest nonempty component is
  // narrower than this (e.g. 10 / L for a density grid of L bins).
  double min_cell_width = 0.0;
  unsigned workers = 1;
};

// Depth-N refinement, built from {S(0), S(1)} by N - 1 refinement steps.
RefinedPartition refine(const MapModel& map, const SymbolPartition& s, int depth,
                        const RefineOptions& opts = {});

// All depths 1..N in order; element k holds depth k + 1.
std::vector<RefinedPartition> refine_all(const MapModel& map, const SymbolPartition& s,
                                         int depth, const RefineOptions& opts = {});

// Disjointness, unit total measure (1e-8) and the marginalization identity
// against `parent` (1e-9) when given. Throws InvariantViolation.
void check_partition(const RefinedPartition& p, const RefinedPartition* parent = nullptr);

}  // namespace chaosent
