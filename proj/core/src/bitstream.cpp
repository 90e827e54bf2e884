#include "chaosent/bitstream.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "chaosent/density.hpp"
#include "chaosent/error.hpp"
#include "chaosent/random.hpp"
#include "parallel.hpp"

namespace chaosent {
namespace {

constexpr std::array<char, 4> kMagic{'C', 'H', 'B', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_le(std::ostream& os, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw ConfigError("bit stream: truncated header");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void BitstreamConfig::validate() const {
  if (length < 1) throw ConfigError("bitstream: length must be at least 1");
  if (dither && grid < 64) throw ConfigError("bitstream: dither grid must be at least 64");
  if (start && !(*start > 0.0 && *start < 1.0)) throw ConfigError("bitstream: start outside (0, 1)");
}

BitSequence generate_bits(const MapModel& map, const SymbolPartition& s, const BitstreamConfig& cfg) {
  cfg.validate();
  BitSequence out(cfg.length);

  if (cfg.dither) {
    DitheredIterator it(map, cfg.grid, cfg.seed);
    if (cfg.start) it.reset(*cfg.start);
    for (std::uint64_t n = 0; n < cfg.burn_in; ++n) it.step();
    for (std::uint64_t n = 0; n < cfg.length; ++n) {
      const double x = it.draw_point();
      out[n] = static_cast<std::uint8_t>(s.symbol(x));
      it.step_from(x);
    }
    return out;
  }

  double x = 0.0;
  if (cfg.start) {
    x = *cfg.start;
  } else {
    Rng rng(cfg.seed);
    do {
      x = rng.uniform01();
    } while (x == 0.0);
  }
  // Plain double iteration, clamped to [0, 1] only, so exact float fixed
  // points such as 0 are reached and kept.
  auto next = [&map](double v) { return std::clamp(map.raw(v), 0.0, 1.0); };
  for (std::uint64_t n = 0; n < cfg.burn_in; ++n) x = next(x);
  for (std::uint64_t n = 0; n < cfg.length; ++n) {
    out[n] = static_cast<std::uint8_t>(s.symbol(x));
    x = next(x);
  }
  return out;
}

ProbabilityTable empirical_pattern_probs(const BitSequence& bits, int depth, unsigned workers) {
  if (depth < 1 || depth > 24) throw DomainError("empirical_pattern_probs: depth must be 1..24");
  const std::size_t words = std::size_t{1} << depth;
  if (bits.size() < 100 * words) {
    std::ostringstream msg;
    msg << "empirical_pattern_probs: " << bits.size() << " bits is below the floor of 100 * 2^"
        << depth << " = " << 100 * words;
    throw InsufficientDataError(msg.str());
  }

  const std::size_t windows = bits.size() - static_cast<std::size_t>(depth) + 1;
  const Word mask = static_cast<Word>(words - 1);
  workers = std::max(1u, workers);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(words, 0));

  // Each shard counts the windows starting in its range, reading up to
  // depth - 1 bits past its end.
  const std::size_t chunk = (windows + workers - 1) / workers;
  detail::parallel_for(workers, workers, [&](std::size_t first, std::size_t last) {
    for (std::size_t shard = first; shard < last; ++shard) {
      const std::size_t begin = shard * chunk;
      const std::size_t end = std::min(windows, begin + chunk);
      if (begin >= end) continue;
      auto& counts = partial[shard];
      Word w = 0;
      for (int k = 0; k < depth - 1; ++k) w = (w << 1) | bits[begin + static_cast<std::size_t>(k)];
      for (std::size_t i = begin; i < end; ++i) {
        w = ((w << 1) | bits[i + static_cast<std::size_t>(depth) - 1]) & mask;
        ++counts[w];
      }
    }
  });

  std::vector<double> probs(words, 0.0);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t c = 0;
    for (const auto& p : partial) c += p[w];
    probs[w] = static_cast<double>(c) / static_cast<double>(windows);
  }
  return ProbabilityTable(depth, std::move(probs));
}

double ones_fraction(const BitSequence& bits) {
  if (bits.empty()) return 0.0;
  std::uint64_t ones = 0;
  for (auto b : bits) ones += b;
  return static_cast<double>(ones) / static_cast<double>(bits.size());
}

ExtractResult von_neumann_extract(const BitSequence& bits) {
  ExtractResult r;
  r.input_length = bits.size();
  r.bits.reserve(bits.size() / 4);
  for (std::size_t i = 0; i + 1 < bits.size(); i += 2) {
    if (bits[i] != bits[i + 1]) r.bits.push_back(bits[i]);
  }
  return r;
}

void write_bits_binary(std::ostream& os, const BitSequence& bits) {
  os.write(kMagic.data(), kMagic.size());
  put_le(os, kVersion, 4);
  put_le(os, bits.size(), 8);
  std::uint8_t byte = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    byte |= static_cast<std::uint8_t>((bits[k] & 1u) << (k % 8));
    if (k % 8 == 7) {
      os.put(static_cast<char>(byte));
      byte = 0;
    }
  }
  if (bits.size() % 8 != 0) os.put(static_cast<char>(byte));
}

BitSequence read_bits_binary(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ConfigError("bit stream: bad magic");
  }
  if (get_le(is, 4) != kVersion) throw ConfigError("bit stream: unsupported version");
  const std::uint64_t count = get_le(is, 8);
  BitSequence bits(count);
  for (std::uint64_t k = 0; k < count; k += 8) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw ConfigError("bit stream: truncated payload");
    for (std::uint64_t j = 0; j < 8 && k + j < count; ++j) {
      bits[k + j] = static_cast<std::uint8_t>((static_cast<unsigned>(c) >> j) & 1u);
    }
  }
  return bits;
}

void write_bits_ascii(std::ostream& os, const BitSequence& bits, std::string_view note) {
  os << "# chaosent-bits v1 " << bits.size();
  if (!note.empty()) os << ' ' << note;
  os << '\n';
  for (std::size_t k = 0; k < bits.size(); ++k) {
    os.put(bits[k] ? '1' : '0');
    if (k % 64 == 63 || k + 1 == bits.size()) os.put('\n');
  }
}

BitSequence read_bits_ascii(std::istream& is) {
  std::string header;
  std::getline(is, header);
  std::istringstream hs(header);
  std::string hash, tag, version;
  std::uint64_t count = 0;
  if (!(hs >> hash >> tag >> version >> count) || hash != "#" || tag != "chaosent-bits" ||
      version != "v1") {
    throw ConfigError("ascii bit stream: bad header line");
  }
  BitSequence bits;
  bits.reserve(count);
  char c = 0;
  while (bits.size() < count && is.get(c)) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != '\n' && c != '\r') {
      throw ConfigError("ascii bit stream: unexpected character");
    }
  }
  if (bits.size() != count) throw ConfigError("ascii bit stream: fewer bits than declared");
  return bits;
}

}  // namespace chaosent
