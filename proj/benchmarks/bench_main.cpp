#include <benchmark/benchmark.h>

#include <numbers>

#include "chaosent/bitstream.hpp"
#include "chaosent/density.hpp"
#include "chaosent/entropy.hpp"
#include "chaosent/partition.hpp"

using namespace chaosent;

namespace {

const double kXb = 1.0 / std::numbers::sqrt3;

void BM_McDensity(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  DitherConfig cfg;
  cfg.samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_density(m, 4096, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McDensity)->Arg(1'000'000)->Arg(4'000'000)->Unit(benchmark::kMillisecond);

void BM_FpFixedPoint(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  for (auto _ : state) benchmark::DoNotOptimize(fp_fixed_point(m, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_FpFixedPoint)->Arg(1024)->Arg(4096)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_TransferApply(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  const TransferOperator op(m, 4096);
  auto f = DensityHistogram::uniform(4096);
  for (auto _ : state) f = op.apply(f);
}
BENCHMARK(BM_TransferApply)->Unit(benchmark::kMicrosecond);

void BM_Refine(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  const auto s = SymbolPartition::threshold(kXb);
  for (auto _ : state) benchmark::DoNotOptimize(refine(m, s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Refine)->Arg(8)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_Analyze(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  const auto s = SymbolPartition::threshold(kXb);
  const auto f = fp_fixed_point(m, 4096);
  AnalysisOptions opts;
  opts.depth = 14;
  for (auto _ : state) benchmark::DoNotOptimize(analyze(m, s, f, opts));
}
BENCHMARK(BM_Analyze)->Unit(benchmark::kMillisecond);

void BM_GenerateBits(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  const auto s = SymbolPartition::threshold(kXb);
  BitstreamConfig cfg;
  cfg.length = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(generate_bits(m, s, cfg));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_GenerateBits)->Unit(benchmark::kMillisecond);

void BM_PatternCount(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  BitstreamConfig cfg;
  cfg.length = 10'000'000;
  const auto bits = generate_bits(m, SymbolPartition::threshold(kXb), cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_pattern_probs(bits, 8, static_cast<unsigned>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * 10'000'000);
}
BENCHMARK(BM_PatternCount)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_VonNeumann(benchmark::State& state) {
  const auto m = MapModel::cubic_sample();
  BitstreamConfig cfg;
  cfg.length = 1'000'000;
  const auto bits = generate_bits(m, SymbolPartition::threshold(kXb), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(von_neumann_extract(bits));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_VonNeumann)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
