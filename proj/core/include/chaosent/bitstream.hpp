#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaosent/entropy.hpp"
#include "chaosent/map_model.hpp"
#include "chaosent/partition.hpp"

namespace chaosent {

// One bit per element, values 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

struct BitstreamConfig {
  std::uint64_t seed = 1;
  std::uint64_t length = 1'000'000;
  // Dithered digitized iteration on a grid of `grid` points; raw
  // floating-point iteration when off.
  bool dither = true;
  std::size_t grid = std::size_t{1} << 20;
  // Explicit x_0; otherwise drawn from the seed.
  std::optional<double> start;
  std::uint64_t burn_in = 10'000;

  void validate() const;
};

// Emits bit 0 while the state lies in S(0) and 1 in S(1), starting with the
// state reached after burn_in iterations.
BitSequence generate_bits(const MapModel& map, const SymbolPartition& s, const BitstreamConfig& cfg);

// Relative frequency of every N-bit word over all overlapping windows. Needs
// at least 100 * 2^N bits.
ProbabilityTable empirical_pattern_probs(const BitSequence& bits, int depth, unsigned workers = 1);

double ones_fraction(const BitSequence& bits);

struct ExtractResult {
  BitSequence bits;
  std::size_t input_length = 0;
  double ratio() const noexcept {
    return input_length == 0 ? 0.0 : static_cast<double>(bits.size()) / input_length;
  }
};

// Non-overlapping pairs: 01 -> 0, 10 -> 1, 00 and 11 dropped.
ExtractResult von_neumann_extract(const BitSequence& bits);

// Binary stream file: 16-byte header (magic "CHBS", u32 version, u64 bit
// count, little-endian) followed by bits packed eight per byte, stream bit k
// at byte k / 8, bit position k % 8.
void write_bits_binary(std::ostream& os, const BitSequence& bits);
BitSequence read_bits_binary(std::istream& is);

// ASCII stream: header line "# chaosent-bits v1 <count> [note]" then the bits
// as '0'/'1' characters, 64 per line. Readers ignore the note.
void write_bits_ascii(std::ostream& os, const BitSequence& bits, std::string_view note = {});
BitSequence read_bits_ascii(std::istream& is);

}  // namespace chaosent
