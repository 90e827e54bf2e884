#include "chaosent/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "chaosent/error.hpp"

namespace chaosent {

const char* to_string(DensityMethod m) noexcept {
  return m == DensityMethod::montecarlo ? "montecarlo" : "fp_operator";
}

void DitherConfig::validate(std::size_t bins) const {
  if (samples < kSamplesPerBin * bins) {
    std::ostringstream msg;
    msg << "density resolution: K=" << samples << " counted iterations for L=" << bins
        << " bins; need K >= " << kSamplesPerBin << " * L = " << kSamplesPerBin * bins;
    throw ResolutionError(msg.str());
  }
  if (burn_in < kMinBurnIn) {
    throw ConfigError("burn_in must be at least " + std::to_string(kMinBurnIn));
  }
}

DensityHistogram::DensityHistogram(std::vector<double> weights, DensityMeta meta)
    : weights_(std::move(weights)), meta_(std::move(meta)) {
  if (weights_.empty()) throw DomainError("density histogram needs at least one bin");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("density weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("density has zero total mass");
  const double scale = static_cast<double>(weights_.size()) / sum;
  for (double& w : weights_) w *= scale;

  cumulative_.resize(weights_.size() + 1);
  cumulative_[0] = 0.0;
  const double inv = 1.0 / static_cast<double>(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + weights_[i] * inv;
  }
}

DensityHistogram DensityHistogram::uniform(std::size_t bins) {
  return DensityHistogram(std::vector<double>(bins, 1.0), DensityMeta{});
}

double DensityHistogram::total_mass() const noexcept { return cumulative_.back(); }

double DensityHistogram::cdf(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return cumulative_.back();
  const double scaled = x * static_cast<double>(weights_.size());
  const auto k = std::min(static_cast<std::size_t>(scaled), weights_.size() - 1);
  return cumulative_[k] + weights_[k] * (scaled - static_cast<double>(k)) /
                              static_cast<double>(weights_.size());
}

double DensityHistogram::mass(const IntervalSet& s) const noexcept {
  double total = 0.0;
  for (const auto& iv : s.intervals()) total += cdf(iv.hi) - cdf(iv.lo);
  return total;
}

double l1_distance(const DensityHistogram& a, const DensityHistogram& b) {
  if (a.bins() != b.bins()) throw DomainError("l1_distance: bin counts differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.bins());
}

DensityHistogram logistic_reference_density(std::size_t bins) {
  std::vector<double> w(bins);
  const double l = static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double a = static_cast<double>(i) / l;
    const double b = static_cast<double>(i + 1) / l;
    w[i] = l * (2.0 / std::numbers::pi) * (std::asin(std::sqrt(b)) - std::asin(std::sqrt(a)));
  }
  return DensityHistogram(std::move(w), DensityMeta{});
}

DitheredIterator::DitheredIterator(const MapModel& map, std::size_t bins, std::uint64_t seed)
    : map_(&map), bins_(bins), rng_(seed) {
  if (bins == 0) throw DomainError("dithered iteration needs at least one bin");
  index_ = rng_.below(bins);
}

void DitheredIterator::reset(double x) {
  const double k = std::floor(x * static_cast<double>(bins_));
  index_ = k < 1.0 ? 1 : (k > static_cast<double>(bins_) ? bins_ : static_cast<std::uint64_t>(k));
}

double DitheredIterator::draw_point() {
  return std::min((static_cast<double>(index_) + rng_.uniform01()) / static_cast<double>(bins_), 1.0);
}

std::uint64_t DitheredIterator::step_from(double x) {
  const double g = static_cast<double>(bins_);
  const double v = std::floor(g * map_->eval_unchecked(x) + rng_.symmetric());
  index_ = v < 1.0 ? 1 : (v > g ? bins_ : static_cast<std::uint64_t>(v));
  return index_;
}

namespace {

std::vector<std::uint64_t> count_visits(const MapModel& map, std::size_t bins,
                                        std::size_t oversample, std::uint64_t seed,
                                        std::uint64_t burn_in, std::uint64_t samples) {
  const std::size_t grid = bins * oversample;
  DitheredIterator it(map, grid, seed);
  for (std::uint64_t n = 0; n < burn_in; ++n) it.step();
  std::vector<std::uint64_t> counts(bins, 0);
  for (std::uint64_t n = 0; n < samples; ++n) {
    const auto k = it.step();
    ++counts[k == grid ? bins - 1 : k / oversample];
  }
  return counts;
}

}  // namespace

DensityHistogram mc_density(const MapModel& map, std::size_t bins, const DitherConfig& cfg,
                            unsigned shards) {
  if (bins < 64) throw ConfigError("mc_density: L must be at least 64");
  cfg.validate(bins);
  if (cfg.oversample < 1) throw ConfigError("mc_density: oversample must be at least 1");
  shards = std::max(1u, shards);

  std::vector<std::uint64_t> counts;
  if (shards == 1) {
    counts = count_visits(map, bins, cfg.oversample, cfg.seed, cfg.burn_in, cfg.samples);
  } else {
    std::vector<std::vector<std::uint64_t>> partial(shards);
    {
      std::vector<std::jthread> workers;
      for (unsigned s = 0; s < shards; ++s) {
        const std::uint64_t share = cfg.samples / shards + (s < cfg.samples % shards ? 1 : 0);
        workers.emplace_back([&, s, share] {
          partial[s] = count_visits(map, bins, cfg.oversample, splitmix64(cfg.seed + s),
                                    cfg.burn_in, share);
        });
      }
    }
    counts.assign(bins, 0);
    for (const auto& p : partial) {
      for (std::size_t i = 0; i < bins; ++i) counts[i] += p[i];
    }
  }

  std::vector<double> weights(bins);
  const double scale = static_cast<double>(bins) / static_cast<double>(cfg.samples);
  for (std::size_t i = 0; i < bins; ++i) weights[i] = scale * static_cast<double>(counts[i]);

  DensityMeta meta;
  meta.method = DensityMethod::montecarlo;
  meta.samples = cfg.samples;
  meta.burn_in = cfg.burn_in;
  meta.seed = cfg.seed;
  meta.oversample = cfg.oversample;
  meta.rng = kRngAlgorithm;
  meta.shards = shards;
  return DensityHistogram(std::move(weights), std::move(meta));
}

TransferOperator::TransferOperator(const MapModel& map, std::size_t bins) : bins_(bins) {
  if (bins == 0) throw DomainError("transfer operator needs at least one bin");
  offsets_.reserve(bins + 1);
  offsets_.push_back(0);
  const double l = static_cast<double>(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    const IntervalSet target(static_cast<double>(j) / l, static_cast<double>(j + 1) / l);
    const IntervalSet source = map.preimage_of_set(target);
    for (const auto& iv : source.intervals()) {
      const auto first = static_cast<std::size_t>(iv.lo * l);
      const auto last = std::min(bins - 1, static_cast<std::size_t>(iv.hi * l));
      for (std::size_t i = first; i <= last; ++i) {
        const double lo = std::max(iv.lo, static_cast<double>(i) / l);
        const double hi = std::min(iv.hi, static_cast<double>(i + 1) / l);
        const double c = (static_cast<double>(i) + 0.5) / l;
        if (hi > lo) terms_.push_back({i, hi - lo, 0.5 * ((hi - c) * (hi - c) - (lo - c) * (lo - c))});
      }
    }
    offsets_.push_back(terms_.size());
  }
}

DensityHistogram TransferOperator::apply(const DensityHistogram& f) const {
  if (f.bins() != bins_) throw DomainError("transfer operator: bin count mismatch");
  // Limited slopes, in density per unit x.
  const double l = static_cast<double>(bins_);
  std::vector<double> slope(bins_, 0.0);
  for (std::size_t i = 0; i < bins_; ++i) {
    const double left = i > 0 ? f[i] - f[i - 1] : 0.0;
    const double right = i + 1 < bins_ ? f[i + 1] - f[i] : 0.0;
    double s = 0.0;
    if (i == 0) {
      s = right;
    } else if (i + 1 == bins_) {
      s = left;
    } else if (left * right > 0.0) {
      const double central = 0.5 * (left + right);
      s = std::copysign(std::min({std::abs(central), 2.0 * std::abs(left), 2.0 * std::abs(right)}),
                        central);
    }
    // Keep the line non-negative across the bin.
    s = std::copysign(std::min(std::abs(s), 2.0 * f[i]), s);
    slope[i] = s * l;
  }

  std::vector<double> out(bins_, 0.0);
  for (std::size_t j = 0; j < bins_; ++j) {
    double mass = 0.0;
    for (std::size_t t = offsets_[j]; t < offsets_[j + 1]; ++t) {
      const auto& term = terms_[t];
      mass += f[term.source] * term.overlap + slope[term.source] * term.moment;
    }
    out[j] = mass * l;
  }
  DensityMeta meta;
  meta.method = DensityMethod::fp_operator;
  meta.iterations = f.meta().method == DensityMethod::fp_operator ? f.meta().iterations + 1 : 1;
  return DensityHistogram(std::move(out), std::move(meta));
}

DensityHistogram fp_step(const MapModel& map, const DensityHistogram& f) {
  return TransferOperator(map, f.bins()).apply(f);
}

DensityHistogram fp_fixed_point(const MapModel& map, std::size_t bins,
                                const FixedPointOptions& opts) {
  if (!(opts.tol > 0.0)) throw ConfigError("fp_fixed_point: tol must be positive");
  const TransferOperator op(map, bins);
  DensityMeta start;
  start.method = DensityMethod::fp_operator;
  DensityHistogram f(std::vector<double>(bins, 1.0), start);
  double d = 0.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    DensityHistogram next = op.apply(f);
    d = l1_distance(f, next);
    f = std::move(next);
    if (d < opts.tol) {
      DensityMeta meta = f.meta();
      meta.iterations = it;
      meta.last_distance = d;
      return DensityHistogram(std::vector<double>(f.weights().begin(), f.weights().end()),
                              std::move(meta));
    }
  }
  std::ostringstream msg;
  msg << "fp_fixed_point did not converge in " << opts.max_iter
      << " iterations; last L1 distance " << d;
  throw ConvergenceError(msg.str(), d, opts.max_iter);
}

std::string density_to_csv(const DensityHistogram& f) {
  std::string out = "t,f\n";
  char line[64];
  const double l = static_cast<double>(f.bins());
  for (std::size_t i = 0; i < f.bins(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", static_cast<double>(i) / l, f[i]);
    out += line;
  }
  return out;
}

}  // namespace chaosent
