// chaosent: invariant density, block entropy and bit generation for 1-D
// chaotic maps. Subcommands: density, analyze, bitgen, verify.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaosent/config.hpp"
#include "chaosent/error.hpp"
#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chaosent;

// Flags mirror config fields one to one and win over the file.
struct Overrides {
  std::string config;
  std::optional<std::string> map, map_file, partition, method, out, formats, format;
  std::optional<std::uint64_t> bins, samples, burn_in, oversample, shards, max_iter, seed, window,
      workers, length, grid, bit_burn_in, verify_bits;
  std::optional<int> depth, verify_depth;
  std::optional<double> tol, input_rate, start, tv_tol, h_tol;
  bool strict = false, no_dither = false, von_neumann = false;
};

void add_options(CLI::App& app, Overrides& o) {
  app.add_option("-c,--config", o.config, "JSON config file");
  app.add_option("--map", o.map, "built-in map: cubic_sample, tent, bernoulli_shift, logistic");
  app.add_option("--map-file", o.map_file, "JSON map description");
  app.add_option("--partition", o.partition, "S(0) as [[lo, hi], ...] or a threshold t for (0, t]");
  app.add_option("--method", o.method, "density method: montecarlo, fp_operator, both");
  app.add_option("-L,--bins", o.bins, "histogram bins L");
  app.add_option("-K,--samples", o.samples, "Monte Carlo iterations K");
  app.add_option("--burn-in", o.burn_in, "Monte Carlo burn-in");
  app.add_option("--oversample", o.oversample, "dither grid points per bin");
  app.add_option("--shards", o.shards, "independent Monte Carlo shards");
  app.add_option("--tol", o.tol, "fixed-point L1 tolerance");
  app.add_option("--max-iter", o.max_iter, "fixed-point iteration cap");
  app.add_option("-N,--depth", o.depth, "refinement depth N");
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--window", o.window, "trailing window for the h estimate");
  app.add_option("--input-rate", o.input_rate, "source bit rate R in bit/s");
  app.add_flag("--strict-resolution", o.strict, "fail when cells are narrower than a bin");
  app.add_option("--workers", o.workers, "worker threads (0: all cores)");
  app.add_option("-o,--out", o.out, "output directory");
  app.add_option("--formats", o.formats, "comma list of csv, json");
  app.add_option("--length", o.length, "bits to generate");
  app.add_flag("--no-dither", o.no_dither, "raw floating-point iteration");
  app.add_option("--grid", o.grid, "dither grid points for bit generation");
  app.add_option("--start", o.start, "initial state x_0");
  app.add_option("--bit-burn-in", o.bit_burn_in, "iterations discarded before the first bit");
  app.add_option("--format", o.format, "stream format: binary, ascii");
  app.add_flag("--von-neumann", o.von_neumann, "also write a Von Neumann extracted stream");
  app.add_option("--verify-bits", o.verify_bits, "stream length for verify");
  app.add_option("--verify-depth", o.verify_depth, "largest N compared by verify");
  app.add_option("--tv-tol", o.tv_tol, "total-variation limit for verify");
  app.add_option("--h-tol", o.h_tol, "h_N agreement limit for verify");
}

json read_json_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in '" + p.string() + "': " + e.what());
  }
}

json& section(json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_object()) j[key] = json::object();
  return j[key];
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

AnalysisConfig build_config(const Overrides& o) {
  json j = json::object();
  fs::path base = fs::current_path();
  if (!o.config.empty()) {
    j = read_json_file(o.config);
    if (!j.is_object()) throw ConfigError("config: expected an object");
    base = fs::absolute(o.config).parent_path();
  }
  if (o.map && o.map_file) throw ConfigError("map: give either --map or --map-file");
  if (o.map) j["map"] = {{"type", "builtin"}, {"name", *o.map}};
  if (o.map_file) j["map"] = read_json_file(*o.map_file);
  if (o.partition) {
    json p;
    try {
      p = json::parse(*o.partition);
    } catch (const json::exception&) {
      throw ConfigError("partition: expected [[lo, hi], ...] or a number");
    }
    j["partition"] = p.is_number() ? json::array({json::array({0.0, p.get<double>()})}) : p;
  }

  json& d = section(j, "density");
  put(d, "method", o.method);
  put(d, "L", o.bins);
  put(d, "K", o.samples);
  put(d, "burn_in", o.burn_in);
  put(d, "oversample", o.oversample);
  put(d, "shards", o.shards);
  put(d, "tol", o.tol);
  put(d, "max_iter", o.max_iter);

  put(j, "depth", o.depth);
  put(j, "seed", o.seed);
  put(j, "window", o.window);
  put(j, "input_rate", o.input_rate);
  if (o.strict) j["strict_resolution"] = true;
  put(j, "workers", o.workers);

  json& b = section(j, "bitstream");
  put(b, "length", o.length);
  if (o.no_dither) b["dither"] = false;
  put(b, "grid", o.grid);
  put(b, "burn_in", o.bit_burn_in);
  put(b, "start", o.start);
  put(b, "format", o.format);
  if (o.von_neumann) b["von_neumann"] = true;

  json& v = section(j, "verify");
  put(v, "bits", o.verify_bits);
  put(v, "depth", o.verify_depth);
  put(v, "tv_tol", o.tv_tol);
  put(v, "h_tol", o.h_tol);

  json& out = section(j, "output");
  put(out, "directory", o.out);
  if (o.formats) {
    json list = json::array();
    std::stringstream ss(*o.formats);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) list.push_back(item);
    }
    out["formats"] = list;
  }
  return parse_config(j.dump(), base);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaosent: entropy analysis of chaos-based random bit generators"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  add_options(app, o);
  auto* density = app.add_subcommand("density", "invariant density estimate(s)");
  auto* analyze = app.add_subcommand("analyze", "block probabilities, entropies and rate");
  auto* bitgen = app.add_subcommand("bitgen", "generate a bit stream");
  auto* verify = app.add_subcommand("verify", "cross-check density path against a long stream");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return chaosent::cli::kConfigError;
  }

  try {
    const AnalysisConfig cfg = build_config(o);
    if (density->parsed()) return chaosent::cli::run_density(cfg, std::cout);
    if (analyze->parsed()) return chaosent::cli::run_analyze(cfg, std::cout);
    if (bitgen->parsed()) return chaosent::cli::run_bitgen(cfg, std::cout);
    if (verify->parsed()) return chaosent::cli::run_verify(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return chaosent::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return chaosent::cli::kAnalysisFailure;
  }
  return chaosent::cli::kConfigError;
}
