#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "chaosent/bitstream.hpp"
#include "chaosent/error.hpp"
#include "chaosent/io.hpp"

using namespace chaosent;

namespace {

const double kXb = 1.0 / std::numbers::sqrt3;

BitSequence iid_bits(double p0, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution one(1.0 - p0);
  BitSequence b(n);
  for (auto& v : b) v = one(rng) ? 1 : 0;
  return b;
}

BitSequence parse(const std::string& s) {
  BitSequence b;
  for (char c : s) {
    if (c == '0' || c == '1') b.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return b;
}

}  // namespace

TEST_SUITE("bitstream") {
  TEST_CASE("Von Neumann on the definitional example") {
    const auto r = von_neumann_extract(parse("01 10 00 11"));
    CHECK(r.bits == parse("01"));
    CHECK(r.input_length == 8);
    CHECK(r.ratio() == doctest::Approx(0.25));
    // Odd trailing bit is ignored.
    CHECK(von_neumann_extract(parse("101")).bits == parse("1"));
  }

  TEST_CASE("Von Neumann on an i.i.d. biased stream") {
    const auto r = von_neumann_extract(iid_bits(0.57, 1'000'000, 42));
    CHECK(ones_fraction(r.bits) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(ones_fraction(r.bits) - 0.5) < 0.005);
    CHECK(std::abs(r.ratio() - 0.2451) < 0.01);
  }

  TEST_CASE("property: inserting 00 / 11 pairs leaves Von Neumann output unchanged") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
      const auto base = iid_bits(0.6, 2000, rng());
      BitSequence padded;
      std::bernoulli_distribution insert(0.3), which(0.5);
      for (std::size_t i = 0; i + 1 < base.size(); i += 2) {
        while (insert(rng)) {
          const std::uint8_t v = which(rng) ? 1 : 0;
          padded.push_back(v);
          padded.push_back(v);
        }
        padded.push_back(base[i]);
        padded.push_back(base[i + 1]);
      }
      CHECK(von_neumann_extract(padded).bits == von_neumann_extract(base).bits);
    }
  }

  TEST_CASE("pattern counting") {
    const BitSequence zeros(1000, 0);
    const auto t = empirical_pattern_probs(zeros, 2);
    CHECK(t[0] == 1.0);
    CHECK(t[1] == 0.0);
    CHECK(t[2] == 0.0);
    CHECK(t[3] == 0.0);
    CHECK_THROWS_AS(empirical_pattern_probs(BitSequence(399, 0), 2), InsufficientDataError);

    // Sliding windows: 0110 has windows 01, 11, 10.
    const auto s = empirical_pattern_probs(parse(std::string(100, '0') + "0110" + std::string(296, '0')), 2);
    CHECK(s[parse_word("01")] == doctest::Approx(1.0 / 399));
    CHECK(s[parse_word("11")] == doctest::Approx(1.0 / 399));
    CHECK(s[parse_word("10")] == doctest::Approx(1.0 / 399));
  }

  TEST_CASE("sharded counting matches serial counting exactly") {
    const auto bits = iid_bits(0.55, 200'003, 4);
    for (int n : {1, 3, 7}) {
      const auto a = empirical_pattern_probs(bits, n, 1);
      const auto b = empirical_pattern_probs(bits, n, 5);
      CHECK(a.probs() == b.probs());
    }
  }

  TEST_CASE("generation is deterministic given the seed") {
    const auto m = MapModel::cubic_sample();
    const auto s = SymbolPartition::threshold(kXb);
    BitstreamConfig c;
    c.length = 100'000;
    c.seed = 77;
    const auto a = generate_bits(m, s, c);
    const auto b = generate_bits(m, s, c);
    CHECK(a == b);
    c.seed = 78;
    CHECK(generate_bits(m, s, c) != a);
  }

  TEST_CASE("Bernoulli shift monobit and 4-bit words") {
    const auto m = MapModel::bernoulli_shift();
    BitstreamConfig c;
    c.length = 1'000'000;
    const auto bits = generate_bits(m, SymbolPartition::threshold(0.5), c);
    CHECK(std::abs(ones_fraction(bits) - 0.5) < 0.002);
    const auto t = empirical_pattern_probs(bits, 4);
    for (double p : t.probs()) CHECK(std::abs(p - 1.0 / 16) < 0.005);
  }

  TEST_CASE("sample map stream reproduces the single- and two-bit tables") {
    const auto m = MapModel::cubic_sample();
    BitstreamConfig c;
    c.length = 10'000'000;
    const auto bits = generate_bits(m, SymbolPartition::threshold(kXb), c);
    CHECK(std::abs((1.0 - ones_fraction(bits)) - 0.57) < 0.01);
    const auto t = empirical_pattern_probs(bits, 2);
    CHECK(std::abs(t[parse_word("00")] - 0.35) < 0.02);
    CHECK(std::abs(t[parse_word("01")] - 0.22) < 0.02);
    CHECK(std::abs(t[parse_word("10")] - 0.23) < 0.02);
    CHECK(std::abs(t[parse_word("11")] - 0.20) < 0.02);
  }

  TEST_CASE("raw float iteration of the tent map collapses to a fixed point") {
    const auto m = MapModel::tent();
    BitstreamConfig c;
    c.dither = false;
    c.burn_in = 0;
    c.length = 200;
    c.start = 0.3141592653589793;
    const auto bits = generate_bits(m, SymbolPartition::threshold(0.5), c);
    // Doubling exhausts the 53-bit mantissa, after which the state is 0.
    for (std::size_t k = 60; k < bits.size(); ++k) CHECK(bits[k] == 0);
    // The dithered iteration from the same start keeps producing both symbols.
    c.dither = true;
    const auto dithered = generate_bits(m, SymbolPartition::threshold(0.5), c);
    std::size_t ones = 0;
    for (std::size_t k = 60; k < dithered.size(); ++k) ones += dithered[k];
    CHECK(ones > 30);
  }

  TEST_CASE("stream length grows the oracle agreement") {
    const auto m = MapModel::cubic_sample();
    const auto s = SymbolPartition::threshold(kXb);
    const auto f = fp_fixed_point(m, std::size_t{1} << 16);
    const auto p = refine(m, s, 4);
    const auto exact = block_probabilities(p, f, false);
    BitstreamConfig c;
    c.length = 100'000;
    const double tv_short = total_variation(exact, empirical_pattern_probs(generate_bits(m, s, c), 4));
    c.length = 10'000'000;
    const double tv_long = total_variation(exact, empirical_pattern_probs(generate_bits(m, s, c), 4));
    CHECK(tv_long * 3 < tv_short);
  }

  TEST_CASE("binary file round trip") {
    const auto bits = iid_bits(0.5, 1001, 3);
    std::stringstream ss;
    write_bits_binary(ss, bits);
    const std::string raw = ss.str();
    CHECK(raw.size() == 16 + (1001 + 7) / 8);
    CHECK(raw.substr(0, 4) == "CHBS");
    CHECK(static_cast<unsigned char>(raw[4]) == 1);
    CHECK(static_cast<unsigned char>(raw[8]) == (1001 & 0xff));
    CHECK(static_cast<unsigned char>(raw[9]) == (1001 >> 8));
    // LSB-first within a byte.
    CHECK((static_cast<unsigned char>(raw[16]) & 1) == bits[0]);
    CHECK(((static_cast<unsigned char>(raw[16]) >> 1) & 1) == bits[1]);
    std::stringstream in(raw);
    CHECK(read_bits_binary(in) == bits);

    std::stringstream bad("XXXX" + raw.substr(4));
    CHECK_THROWS(read_bits_binary(bad));
  }

  TEST_CASE("ascii file round trip") {
    const auto bits = iid_bits(0.5, 130, 5);
    std::stringstream ss;
    write_bits_ascii(ss, bits, "config_hash=0123");
    std::string header;
    std::getline(ss, header);
    CHECK(header == "# chaosent-bits v1 130 config_hash=0123");
    std::stringstream again(ss.str());
    write_bits_ascii(again, bits);
    std::stringstream in1;
    write_bits_ascii(in1, bits, "x");
    CHECK(read_bits_ascii(in1) == bits);
    std::stringstream in2;
    write_bits_ascii(in2, bits);
    CHECK(read_bits_ascii(in2) == bits);
  }

  TEST_CASE("config validation") {
    BitstreamConfig c;
    c.length = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.start = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}
