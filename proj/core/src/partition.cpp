#include "chaosent/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chaosent/error.hpp"
#include "parallel.hpp"

namespace chaosent {

std::string word_string(Word w, int depth) {
  std::string s(static_cast<std::size_t>(depth), '0');
  for (int k = 0; k < depth; ++k) {
    if ((w >> (depth - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '1';
  }
  return s;
}

Word parse_word(const std::string& s) {
  if (s.empty() || s.size() > 31) throw ConfigError("word must have 1..31 bits: '" + s + "'");
  Word w = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError("word may only contain 0 and 1: '" + s + "'");
    w = (w << 1) | static_cast<Word>(c - '0');
  }
  return w;
}

SymbolPartition::SymbolPartition(IntervalSet s0) : s0_(std::move(s0)), s1_(s0_.complement()) {
  if (s0_.empty() || s1_.empty()) {
    throw ConfigError("bit partition: S(0) and S(1) must both be nonempty");
  }
}

SymbolPartition::SymbolPartition(IntervalSet s0, IntervalSet s1)
    : s0_(std::move(s0)), s1_(std::move(s1)) {
  if (s0_.empty() || s1_.empty()) {
    throw ConfigError("bit partition: S(0) and S(1) must both be nonempty");
  }
  if (s0_.intersect(s1_).measure() > 1e-9) {
    throw ConfigError("bit partition: S(0) and S(1) overlap");
  }
  if (std::abs(s0_.measure() + s1_.measure() - 1.0) > 1e-9) {
    throw ConfigError("bit partition: S(0) and S(1) must cover (0, 1)");
  }
}

SymbolPartition SymbolPartition::threshold(double split) {
  if (!(split > 0.0 && split < 1.0)) throw ConfigError("bit partition: split outside (0, 1)");
  return SymbolPartition(IntervalSet(0.0, split));
}

RefinedPartition::RefinedPartition(int depth, std::vector<IntervalSet> cells)
    : depth_(depth), cells_(std::move(cells)) {
  if (depth < 1 || depth > 30 || cells_.size() != (std::size_t{1} << depth)) {
    throw DomainError("refined partition: need 2^depth cells");
  }
}

RefinedPartition RefinedPartition::from_symbols(const SymbolPartition& s) {
  return RefinedPartition(1, {s.s0(), s.s1()});
}

std::size_t RefinedPartition::nonempty_cells() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return !c.empty(); }));
}

double RefinedPartition::total_measure() const noexcept {
  double total = 0.0;
  for (const auto& c : cells_) total += c.measure();
  return total;
}

double RefinedPartition::min_width() const noexcept {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : cells_) {
    if (!c.empty()) w = std::min(w, c.min_width());
  }
  return w;
}

std::optional<Word> RefinedPartition::locate(double x) const noexcept {
  for (std::size_t w = 0; w < cells_.size(); ++w) {
    if (cells_[w].contains(x)) return static_cast<Word>(w);
  }
  return std::nullopt;
}

std::vector<double> RefinedPartition::boundaries() const {
  std::vector<double> out;
  for (const auto& c : cells_) {
    for (const auto& iv : c.intervals()) {
      out.push_back(iv.lo);
      out.push_back(iv.hi);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RefinedPartition refine_once(const MapModel& map, const SymbolPartition& s,
                             const RefinedPartition& p, unsigned workers) {
  const std::size_t n = p.word_count();
  std::vector<IntervalSet> pre(n);
  detail::parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) pre[w] = map.preimage_of_set(p.cell(static_cast<Word>(w)));
  });

  // Leading bit i_1 selects S(i_1); the remaining N bits index the parent.
  std::vector<IntervalSet> cells(2 * n);
  detail::parallel_for(2 * n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      const int lead = w >= n ? 1 : 0;
      cells[w] = s.cell(lead).intersect(pre[w - (lead ? n : 0)]);
    }
  });
  return RefinedPartition(p.depth() + 1, std::move(cells));
}

namespace {

void check_depth(int depth, const RefineOptions& opts) {
  if (depth < 1) throw ConfigError("refinement depth must be at least 1");
  if (depth > opts.max_depth) {
    std::ostringstream msg;
    msg << "refinement depth " << depth << " exceeds N_max=" << opts.max_depth
        << "; cells would fall below the density grid resolution";
    throw ResolutionError(msg.str());
  }
}

void check_width(const RefinedPartition& p, const RefineOptions& opts) {
  if (opts.min_cell_width > 0.0 && p.min_width() < opts.min_cell_width) {
    std::ostringstream msg;
    msg << "refinement depth " << p.depth() << ": narrowest cell " << p.min_width()
        << " is below the resolution floor " << opts.min_cell_width;
    throw ResolutionError(msg.str());
  }
}

}  // namespace

std::vector<RefinedPartition> refine_all(const MapModel& map, const SymbolPartition& s,
                                         int depth, const RefineOptions& opts) {
  check_depth(depth, opts);
  std::vector<RefinedPartition> levels;
  levels.reserve(static_cast<std::size_t>(depth));
  levels.push_back(RefinedPartition::from_symbols(s));
  check_width(levels.back(), opts);
  while (levels.back().depth() < depth) {
    levels.push_back(refine_once(map, s, levels.back(), opts.workers));
    check_width(levels.back(), opts);
  }
  return levels;
}

RefinedPartition refine(const MapModel& map, const SymbolPartition& s, int depth,
                        const RefineOptions& opts) {
  check_depth(depth, opts);
  RefinedPartition p = RefinedPartition::from_symbols(s);
  check_width(p, opts);
  while (p.depth() < depth) {
    p = refine_once(map, s, p, opts.workers);
    check_width(p, opts);
  }
  return p;
}

void check_partition(const RefinedPartition& p, const RefinedPartition* parent) {
  std::ostringstream msg;
  const double total = p.total_measure();
  if (std::abs(total - 1.0) > 1e-8) {
    msg << "depth " << p.depth() << ": cells cover measure " << total << ", expected 1";
    throw InvariantViolation(msg.str());
  }

  // Disjoint cells laid end to end never overlap.
  std::vector<Interval> all;
  for (const auto& c : p.cells()) all.insert(all.end(), c.intervals().begin(), c.intervals().end());
  std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].lo < all[i - 1].hi - 1e-12) {
      msg << "depth " << p.depth() << ": cells overlap near x=" << all[i].lo;
      throw InvariantViolation(msg.str());
    }
  }

  if (parent != nullptr) {
    if (parent->depth() + 1 != p.depth()) throw DomainError("check_partition: parent depth mismatch");
    for (std::size_t w = 0; w < parent->word_count(); ++w) {
      const auto merged = p.cell(static_cast<Word>(2 * w)).unite(p.cell(static_cast<Word>(2 * w + 1)));
      if (merged.symmetric_difference(parent->cell(static_cast<Word>(w))) > 1e-9) {
        msg << "depth " << p.depth() << ": children of " << word_string(static_cast<Word>(w), parent->depth())
            << " do not reassemble the parent cell";
        throw InvariantViolation(msg.str());
      }
    }
  }
}

}  // namespace chaosent
