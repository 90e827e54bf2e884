#include "chaosent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "chaosent/error.hpp"

namespace chaosent {
namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

ProbabilityTable::ProbabilityTable(int depth, std::vector<double> probs)
    : depth_(depth), probs_(std::move(probs)) {
  if (depth < 1 || depth > 30 || probs_.size() != (std::size_t{1} << depth)) {
    throw DomainError("probability table: need 2^depth entries");
  }
  for (double p : probs_) {
    if (!(p >= 0.0)) throw DomainError("probability table: negative or NaN entry");
  }
}

double ProbabilityTable::total() const noexcept { return pairwise_sum(probs_); }

ProbabilityTable ProbabilityTable::marginal() const {
  if (depth_ < 2) throw DomainError("marginal of a depth-1 table");
  std::vector<double> out(probs_.size() / 2);
  for (std::size_t w = 0; w < out.size(); ++w) out[w] = probs_[2 * w] + probs_[2 * w + 1];
  return ProbabilityTable(depth_ - 1, std::move(out));
}

ProbabilityTable block_probabilities(const RefinedPartition& p, const DensityHistogram& f,
                                     bool strict) {
  const double bin_width = 1.0 / static_cast<double>(f.bins());
  std::vector<double> probs(p.word_count());
  std::size_t narrow = 0;
  for (std::size_t w = 0; w < probs.size(); ++w) {
    const auto& cell = p.cell(static_cast<Word>(w));
    if (!cell.empty() && cell.min_width() < bin_width) ++narrow;
    probs[w] = f.mass(cell);
  }
  if (strict && narrow > 0) {
    std::ostringstream msg;
    msg << "depth " << p.depth() << ": " << narrow << " cells are narrower than one bin (1/"
        << f.bins() << "); raise L or lower the depth";
    throw ResolutionError(msg.str());
  }

  const double total = pairwise_sum(probs);
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    std::ostringstream msg;
    msg << "depth " << p.depth() << ": cell probabilities sum to " << total;
    throw InvariantViolation(msg.str());
  }
  for (double& x : probs) x /= total;

  ProbabilityTable t(p.depth(), std::move(probs));
  t.renormalization_ = 1.0 / total;
  t.sub_bin_cells_ = narrow;
  return t;
}

double bias(const ProbabilityTable& t) {
  if (t.depth() != 1) throw DomainError("bias needs a depth-1 table");
  return std::abs(t[0] - 0.5);
}

double block_entropy(const ProbabilityTable& t) {
  std::vector<double> terms(t.size());
  for (std::size_t w = 0; w < t.size(); ++w) {
    const double p = t[static_cast<Word>(w)];
    terms[w] = p > 0.0 ? -p * std::log2(p) : 0.0;
  }
  return pairwise_sum(terms);
}

std::vector<double> per_bit_entropies(std::span<const double> H) {
  std::vector<double> h(H.size());
  for (std::size_t k = 0; k < H.size(); ++k) h[k] = k == 0 ? H[0] : H[k] - H[k - 1];
  return h;
}

RateEstimate entropy_rate_estimate(std::span<const double> h, std::size_t window) {
  if (window < 2 || h.size() < window) {
    throw DomainError("entropy_rate_estimate: need 2 <= window <= len(h)");
  }
  const auto tail = h.last(window);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return RateEstimate{h.back(), *hi - *lo, window};
}

RateBudget rate_budget(double input_rate, double h) {
  if (!(input_rate > 0.0)) throw DomainError("rate_budget: input rate must be positive");
  if (!(h >= 0.0 && h <= 1.0 + 1e-9)) throw DomainError("rate_budget: h must lie in [0, 1]");
  h = std::min(h, 1.0);
  RateBudget b;
  b.input_rate = input_rate;
  if (h == 0.0) {
    b.no_entropy = true;
    b.overhead = std::numeric_limits<double>::infinity();
    return b;
  }
  b.output_rate = h * input_rate;
  b.overhead = 1.0 / h;
  return b;
}

double total_variation(const ProbabilityTable& a, const ProbabilityTable& b) {
  if (a.depth() != b.depth()) throw DomainError("total_variation: depth mismatch");
  double s = 0.0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    s += std::abs(a[static_cast<Word>(w)] - b[static_cast<Word>(w)]);
  }
  return 0.5 * s;
}

EntropyReport analyze(const MapModel& map, const SymbolPartition& s, const DensityHistogram& f,
                      const AnalysisOptions& opts) {
  const auto levels = refine_all(map, s, opts.depth, opts.refine);

  EntropyReport r;
  r.provenance.map_name = map.name();
  r.provenance.density = f.meta();
  r.provenance.bins = f.bins();
  r.provenance.depth = opts.depth;

  std::size_t narrow = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    check_partition(levels[k], k == 0 ? nullptr : &levels[k - 1]);
    r.tables.push_back(block_probabilities(levels[k], f, opts.strict_resolution));
    narrow = std::max(narrow, r.tables.back().sub_bin_cells());
    r.block_entropy.push_back(block_entropy(r.tables.back()));
  }
  r.per_bit = per_bit_entropies(r.block_entropy);
  r.bias = bias(r.tables.front());

  const std::size_t window = std::min(opts.window, r.per_bit.size());
  if (window >= 2) {
    r.rate = entropy_rate_estimate(r.per_bit, window);
  } else {
    r.rate = RateEstimate{r.per_bit.back(), 0.0, 1};
  }
  if (!r.rate.converged()) {
    std::ostringstream msg;
    msg << "h_N spread " << r.rate.spread << " over the last " << r.rate.window
        << " depths exceeds " << RateEstimate::kSpreadLimit << "; increase the depth";
    r.warnings.push_back(msg.str());
  }
  if (narrow > 0) {
    std::ostringstream msg;
    msg << narrow << " cells at depth " << opts.depth << " are narrower than one density bin";
    r.warnings.push_back(msg.str());
  }
  if (const auto k = first_increase(r.per_bit, opts.monotone_slack)) {
    std::ostringstream msg;
    msg << "h_" << *k + 1 << " = " << r.per_bit[*k] << " exceeds h_" << *k << " = "
        << r.per_bit[*k - 1] << "; density resolution too coarse for this depth";
    r.warnings.push_back(msg.str());
  }
  if (opts.input_rate) r.budget = rate_budget(*opts.input_rate, std::max(0.0, r.rate.value));

  check_report(r);
  return r;
}

void check_report(const EntropyReport& r) {
  auto fail = [](const std::string& what) { throw InvariantViolation(what); };
  const std::size_t n = r.tables.size();
  if (r.block_entropy.size() != n || r.per_bit.size() != n) fail("report arrays differ in length");

  for (std::size_t k = 0; k < n; ++k) {
    const auto& t = r.tables[k];
    const int depth = static_cast<int>(k) + 1;
    if (t.depth() != depth) fail("table depths out of order");
    if (std::abs(t.total() - 1.0) > 1e-8) {
      fail("depth " + std::to_string(depth) + ": probabilities do not sum to 1");
    }
    if (k > 0) {
      const auto m = t.marginal();
      for (std::size_t w = 0; w < m.size(); ++w) {
        if (std::abs(m[static_cast<Word>(w)] - r.tables[k - 1][static_cast<Word>(w)]) > 1e-6) {
          fail("depth " + std::to_string(depth) + ": marginal of word " +
               word_string(static_cast<Word>(w), depth - 1) + " disagrees with depth " +
               std::to_string(depth - 1));
        }
      }
    }
    const double H = r.block_entropy[k];
    if (H < -1e-12 || H > depth + 1e-12) {
      fail("H_" + std::to_string(depth) + " = " + std::to_string(H) + " outside [0, N]");
    }
  }

  if (n > 0) {
    double chain = 0.0;
    for (double h : r.per_bit) chain += h;
    if (std::abs(chain - r.block_entropy.back()) > 1e-12) fail("sum of h_k differs from H_N");
  }
  if (r.bias < 0.0 || r.bias > 0.5) fail("bias outside [0, 1/2]");

}

std::optional<std::size_t> first_increase(std::span<const double> h, double slack) {
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k] > h[k - 1] + slack) return k;
  }
  return std::nullopt;
}

std::string entropy_to_csv(const EntropyReport& r) {
  std::string out = "N,H_N,h_N\n";
  char line[96];
  for (std::size_t k = 0; k < r.block_entropy.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", k + 1, r.block_entropy[k], r.per_bit[k]);
    out += line;
  }
  return out;
}

}  // namespace chaosent
