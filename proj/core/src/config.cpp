#include "chaosent/config.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chaosent/error.hpp"

namespace chaosent {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

// Field access on one JSON object, rejecting keys nobody asked about.
class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> known)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_.empty() ? "config" : path_, "expected an object");
    for (const auto& [key, _] : j_.items()) {
      if (!known.count(key)) bad(name(key), "unknown field");
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_[key].is_null(); }
  const json& at(const std::string& key) const { return j_[key]; }

  template <class T>
  void get_uint(const std::string& key, T& out) const {
    if (!has(key)) return;
    const json& v = j_[key];
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > std::numeric_limits<T>::max()) bad(name(key), "value too large");
      out = static_cast<T>(u);
      return;
    }
    // Accept integral floats such as 4e6.
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && d == static_cast<double>(static_cast<std::uint64_t>(d)) &&
          d <= static_cast<double>(std::numeric_limits<T>::max())) {
        out = static_cast<T>(d);
        return;
      }
    }
    bad(name(key), "expected a non-negative integer");
  }

  void get_int(const std::string& key, int& out) const {
    if (!has(key)) return;
    if (!j_[key].is_number_integer()) bad(name(key), "expected an integer");
    const auto v = j_[key].get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      bad(name(key), "value out of range");
    }
    out = static_cast<int>(v);
  }

  void get_double(const std::string& key, double& out) const {
    if (!has(key)) return;
    if (!j_[key].is_number()) bad(name(key), "expected a number");
    out = j_[key].get<double>();
  }

  void get_double(const std::string& key, std::optional<double>& out) const {
    if (!has(key)) return;
    double v = 0.0;
    get_double(key, v);
    out = v;
  }

  void get_bool(const std::string& key, bool& out) const {
    if (!has(key)) return;
    if (!j_[key].is_boolean()) bad(name(key), "expected true or false");
    out = j_[key].get<bool>();
  }

  void get_string(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    if (!j_[key].is_string()) bad(name(key), "expected a string");
    out = j_[key].get<std::string>();
  }

 private:
  const json& j_;
  std::string path_;
};

DensityChoice parse_choice(const std::string& s) {
  if (s == "montecarlo") return DensityChoice::montecarlo;
  if (s == "fp_operator") return DensityChoice::fp_operator;
  if (s == "both") return DensityChoice::both;
  bad("density.method", "expected montecarlo, fp_operator or both, got '" + s + "'");
}

std::string read_file(const std::filesystem::path& p, const std::string& field) {
  std::ifstream in(p, std::ios::binary);
  if (!in) bad(field, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json canonical(const AnalysisConfig& c) {
  json j;
  j["map"] = json::parse(to_json(c.map));
  if (c.partition) {
    json arr = json::array();
    for (const auto& iv : c.partition->intervals()) arr.push_back({iv.lo, iv.hi});
    j["partition"] = arr;
  } else {
    j["partition"] = nullptr;
  }
  const auto& d = c.density;
  j["density"] = {{"method", to_string(d.method)}, {"L", d.bins},          {"K", d.samples},
                  {"burn_in", d.burn_in},          {"oversample", d.oversample}, {"shards", d.shards},
                  {"tol", d.tol},                  {"max_iter", d.max_iter}};
  j["depth"] = c.depth;
  j["seed"] = c.seed;
  j["window"] = c.window;
  j["input_rate"] = c.input_rate ? json(*c.input_rate) : json(nullptr);
  j["strict_resolution"] = c.strict_resolution;
  j["workers"] = c.workers;
  const auto& b = c.bitstream;
  j["bitstream"] = {{"length", b.length},
                    {"dither", b.dither},
                    {"grid", b.grid},
                    {"burn_in", b.burn_in},
                    {"start", b.start ? json(*b.start) : json(nullptr)},
                    {"format", b.format},
                    {"von_neumann", b.von_neumann}};
  const auto& v = c.verify;
  j["verify"] = {{"bits", v.bits}, {"depth", v.depth}, {"tv_tol", v.tv_tol}, {"h_tol", v.h_tol}};
  json formats = json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  j["output"] = {{"directory", c.output.directory}, {"formats", formats}};
  return j;
}

}  // namespace

const char* to_string(DensityChoice c) noexcept {
  switch (c) {
    case DensityChoice::montecarlo: return "montecarlo";
    case DensityChoice::fp_operator: return "fp_operator";
    case DensityChoice::both: return "both";
  }
  return "?";
}

bool operator==(const AnalysisConfig& a, const AnalysisConfig& b) {
  return a.map == b.map && a.partition == b.partition && a.density == b.density &&
         a.depth == b.depth && a.seed == b.seed && a.window == b.window &&
         a.input_rate == b.input_rate && a.strict_resolution == b.strict_resolution &&
         a.workers == b.workers && a.bitstream == b.bitstream && a.verify == b.verify &&
         a.output == b.output;
}

void AnalysisConfig::validate() const {
  if (density.bins < 64) bad("density.L", "need at least 64 bins");
  if (density.samples == 0) bad("density.K", "must be positive");
  if (density.burn_in < DitherConfig::kMinBurnIn) {
    bad("density.burn_in", "need at least " + std::to_string(DitherConfig::kMinBurnIn));
  }
  if (density.oversample == 0) bad("density.oversample", "must be positive");
  if (density.shards == 0) bad("density.shards", "must be positive");
  if (!(density.tol > 0.0)) bad("density.tol", "must be positive");
  if (density.max_iter == 0) bad("density.max_iter", "must be positive");
  if (depth < 1 || depth > 20) bad("depth", "expected 1..20");
  if (window < 2) bad("window", "need at least 2");
  if (input_rate && !(*input_rate > 0.0)) bad("input_rate", "must be positive");
  if (bitstream.length == 0) bad("bitstream.length", "must be positive");
  if (bitstream.grid < 2) bad("bitstream.grid", "need at least 2 points");
  if (bitstream.start && !(*bitstream.start > 0.0 && *bitstream.start < 1.0)) {
    bad("bitstream.start", "must lie in (0, 1)");
  }
  if (bitstream.format != "binary" && bitstream.format != "ascii") {
    bad("bitstream.format", "expected binary or ascii");
  }
  if (verify.depth < 1 || verify.depth > 16) bad("verify.depth", "expected 1..16");
  if (verify.bits == 0) bad("verify.bits", "must be positive");
  if (!(verify.tv_tol > 0.0)) bad("verify.tv_tol", "must be positive");
  if (!(verify.h_tol > 0.0)) bad("verify.h_tol", "must be positive");
  if (partition) {
    try {
      SymbolPartition{*partition};
    } catch (const Error& e) {
      bad("partition", e.what());
    }
  }
}

SymbolPartition AnalysisConfig::symbol_partition() const {
  if (partition) return SymbolPartition(*partition);
  return SymbolPartition::threshold(map.type == "builtin" ? builtin_split(map.name) : 0.5);
}

unsigned AnalysisConfig::worker_count() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

DitherConfig AnalysisConfig::dither_config() const {
  DitherConfig d;
  d.seed = seed;
  d.burn_in = density.burn_in;
  d.samples = density.samples;
  d.oversample = density.oversample;
  return d;
}

FixedPointOptions AnalysisConfig::fixed_point_options() const {
  return FixedPointOptions{density.tol, density.max_iter};
}

AnalysisOptions AnalysisConfig::analysis_options() const {
  AnalysisOptions o;
  o.depth = depth;
  o.window = window;
  o.input_rate = input_rate;
  o.strict_resolution = strict_resolution;
  o.refine.workers = worker_count();
  return o;
}

BitstreamConfig AnalysisConfig::bitstream_config() const {
  BitstreamConfig b;
  b.seed = seed;
  b.length = bitstream.length;
  b.dither = bitstream.dither;
  b.grid = bitstream.grid;
  b.burn_in = bitstream.burn_in;
  b.start = bitstream.start;
  return b;
}

AnalysisConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const Section top(j, "",
                    {"map", "partition", "density", "depth", "seed", "window", "input_rate",
                     "strict_resolution", "workers", "bitstream", "verify", "output"});
  AnalysisConfig c;

  if (top.has("map")) {
    const json& m = top.at("map");
    if (m.is_string()) {
      const std::filesystem::path p = base_dir / m.get<std::string>();
      c.map = parse_map_spec(read_file(p, "map"));
    } else {
      c.map = parse_map_spec(m.dump());
    }
  }
  if (top.has("partition")) {
    try {
      c.partition = parse_interval_list(top.at("partition").dump());
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("partition: ") + e.what());
    }
  }

  if (top.has("density")) {
    const Section d(top.at("density"), "density",
                    {"method", "L", "K", "burn_in", "oversample", "shards", "tol", "max_iter"});
    std::string method = to_string(c.density.method);
    d.get_string("method", method);
    c.density.method = parse_choice(method);
    d.get_uint("L", c.density.bins);
    d.get_uint("K", c.density.samples);
    d.get_uint("burn_in", c.density.burn_in);
    d.get_uint("oversample", c.density.oversample);
    d.get_uint("shards", c.density.shards);
    d.get_double("tol", c.density.tol);
    d.get_uint("max_iter", c.density.max_iter);
  }
  top.get_int("depth", c.depth);
  top.get_uint("seed", c.seed);
  top.get_uint("window", c.window);
  top.get_double("input_rate", c.input_rate);
  top.get_bool("strict_resolution", c.strict_resolution);
  top.get_uint("workers", c.workers);

  if (top.has("bitstream")) {
    const Section b(top.at("bitstream"), "bitstream",
                    {"length", "dither", "grid", "burn_in", "start", "format", "von_neumann"});
    b.get_uint("length", c.bitstream.length);
    b.get_bool("dither", c.bitstream.dither);
    b.get_uint("grid", c.bitstream.grid);
    b.get_uint("burn_in", c.bitstream.burn_in);
    b.get_double("start", c.bitstream.start);
    b.get_string("format", c.bitstream.format);
    b.get_bool("von_neumann", c.bitstream.von_neumann);
  }
  if (top.has("verify")) {
    const Section v(top.at("verify"), "verify", {"bits", "depth", "tv_tol", "h_tol"});
    v.get_uint("bits", c.verify.bits);
    v.get_int("depth", c.verify.depth);
    v.get_double("tv_tol", c.verify.tv_tol);
    v.get_double("h_tol", c.verify.h_tol);
  }
  if (top.has("output")) {
    const Section o(top.at("output"), "output", {"directory", "formats"});
    o.get_string("directory", c.output.directory);
    if (o.has("formats")) {
      const json& f = o.at("formats");
      if (!f.is_array()) bad("output.formats", "expected an array of \"csv\" / \"json\"");
      c.output.csv = c.output.json = false;
      for (const auto& v : f) {
        if (v == "csv") {
          c.output.csv = true;
        } else if (v == "json") {
          c.output.json = true;
        } else {
          bad("output.formats", "unknown format " + v.dump());
        }
      }
    }
  }
  c.validate();
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& file) {
  return parse_config(read_file(file, "config"), file.parent_path());
}

std::string to_json(const AnalysisConfig& cfg) { return canonical(cfg).dump(1); }

std::string config_hash(const AnalysisConfig& cfg) {
  json j = canonical(cfg);
  j.erase("workers");
  j.erase("output");
  return fnv1a_hex(j.dump());
}

}  // namespace chaosent
