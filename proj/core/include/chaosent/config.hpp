#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaosent/bitstream.hpp"
#include "chaosent/density.hpp"
#include "chaosent/entropy.hpp"
#include "chaosent/interval_set.hpp"
#include "chaosent/io.hpp"
#include "chaosent/partition.hpp"

namespace chaosent {

enum class DensityChoice { montecarlo, fp_operator, both };

const char* to_string(DensityChoice c) noexcept;

struct DensitySettings {
  DensityChoice method = DensityChoice::montecarlo;
  std::size_t bins = 4096;
  std::uint64_t samples = 4'000'000;
  std::uint64_t burn_in = 10'000;
  std::size_t oversample = 64;
  unsigned shards = 1;
  double tol = 1e-6;
  std::size_t max_iter = 10'000;

  friend bool operator==(const DensitySettings&, const DensitySettings&) = default;
};

struct BitgenSettings {
  std::uint64_t length = 1'000'000;
  bool dither = true;
  std::size_t grid = std::size_t{1} << 20;
  std::uint64_t burn_in = 10'000;
  std::optional<double> start;
  std::string format = "binary";  // binary | ascii
  bool von_neumann = false;

  friend bool operator==(const BitgenSettings&, const BitgenSettings&) = default;
};

struct VerifySettings {
  std::uint64_t bits = 10'000'000;
  int depth = 8;
  double tv_tol = 0.01;
  double h_tol = 0.01;

  friend bool operator==(const VerifySettings&, const VerifySettings&) = default;
};

struct OutputSettings {
  std::string directory = ".";
  bool csv = true;
  bool json = true;

  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

// Everything a command needs, as one JSON document:
// {
//   "map": {...} | "path/to/map.json",
//   "partition": [[lo, hi], ...],          S(0); S(1) is the complement
//   "density": {"method", "L", "K", "burn_in", "oversample", "shards", "tol", "max_iter"},
//   "depth", "seed", "window", "input_rate", "strict_resolution", "workers",
//   "bitstream": {"length", "dither", "grid", "burn_in", "start", "format", "von_neumann"},
//   "verify": {"bits", "depth", "tv_tol", "h_tol"},
//   "output": {"directory", "formats": ["csv", "json"]}
// }
// Missing fields take the defaults below; unknown fields are rejected.
struct AnalysisConfig {
  MapSpec map;
  std::optional<IntervalSet> partition;
  DensitySettings density;
  int depth = 14;
  std::uint64_t seed = 1;
  std::size_t window = 4;
  std::optional<double> input_rate;
  bool strict_resolution = false;
  unsigned workers = 0;  // 0: all available cores
  BitgenSettings bitstream;
  VerifySettings verify;
  OutputSettings output;

  // Range checks on every field; throws ConfigError naming the field.
  void validate() const;

  // Explicit partition, or the built-in split for a built-in map, else 1/2.
  SymbolPartition symbol_partition() const;
  unsigned worker_count() const;
  DitherConfig dither_config() const;
  FixedPointOptions fixed_point_options() const;
  AnalysisOptions analysis_options() const;
  BitstreamConfig bitstream_config() const;

  friend bool operator==(const AnalysisConfig& a, const AnalysisConfig& b);
};

// A string-valued "map" is read as a path, relative to base_dir.
AnalysisConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& file);

// Canonical form: sorted keys, map inlined, all fields present.
std::string to_json(const AnalysisConfig& cfg);

// FNV-1a of the canonical form with `workers` and `output` removed, since
// neither affects results.
std::string config_hash(const AnalysisConfig& cfg);

}  // namespace chaosent
