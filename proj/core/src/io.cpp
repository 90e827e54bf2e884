#include "chaosent/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "chaosent/error.hpp"

namespace chaosent {
namespace {

using nlohmann::json;

json parse_or_throw(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::vector<double> number_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError("map." + field + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("map." + field + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json intervals_json(const IntervalSet& s) {
  json arr = json::array();
  for (const auto& iv : s.intervals()) arr.push_back({iv.lo, iv.hi});
  return arr;
}

json meta_json(const DensityMeta& m) {
  json j;
  j["method"] = to_string(m.method);
  if (m.method == DensityMethod::montecarlo) {
    j["K"] = m.samples;
    j["burn_in"] = m.burn_in;
    j["seed"] = m.seed;
    j["rng"] = m.rng;
    j["shards"] = m.shards;
  } else {
    j["iterations"] = m.iterations;
    j["last_l1"] = m.last_distance;
  }
  return j;
}

}  // namespace

bool operator==(const MapSpec& a, const MapSpec& b) {
  auto same_points = [](const std::vector<Breakpoint>& x, const std::vector<Breakpoint>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].x != y[i].x || x[i].y != y[i].y) return false;
    }
    return true;
  };
  return a.type == b.type && a.name == b.name && a.coefficients == b.coefficients &&
         a.critical_points == b.critical_points && same_points(a.breakpoints, b.breakpoints);
}

const std::vector<std::string>& builtin_map_names() {
  static const std::vector<std::string> names{"cubic_sample", "tent", "bernoulli_shift", "logistic"};
  return names;
}

MapModel builtin_map(const std::string& name) {
  if (name == "cubic_sample") return MapModel::cubic_sample();
  if (name == "tent") return MapModel::tent();
  if (name == "bernoulli_shift") return MapModel::bernoulli_shift();
  if (name == "logistic") return MapModel::logistic();
  throw ConfigError("map.name: unknown builtin '" + name +
                    "' (expected cubic_sample, tent, bernoulli_shift or logistic)");
}

double builtin_split(const std::string& name) {
  return name == "cubic_sample" ? 1.0 / std::numbers::sqrt3 : 0.5;
}

MapModel MapSpec::build() const {
  if (type == "builtin") return builtin_map(name);
  if (type == "polynomial") {
    if (critical_points.empty() && coefficients.size() > 2) {
      throw ConfigError("map.critical_points: required for a nonlinear polynomial");
    }
    return MapModel::polynomial(coefficients, critical_points, name.empty() ? "polynomial" : name);
  }
  if (type == "piecewise_linear") {
    return MapModel::piecewise_linear(breakpoints, name.empty() ? "piecewise_linear" : name);
  }
  throw ConfigError("map.type: expected builtin, polynomial or piecewise_linear, got '" + type + "'");
}

MapSpec parse_map_spec(std::string_view text) {
  const json j = parse_or_throw(text, "map");
  if (!j.is_object()) throw ConfigError("map: expected an object");
  MapSpec spec;
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ConfigError("map.type: required string field");
  }
  spec.type = j["type"].get<std::string>();
  spec.name.clear();
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ConfigError("map.name: expected a string");
    spec.name = j["name"].get<std::string>();
  }

  if (spec.type == "builtin") {
    if (spec.name.empty()) throw ConfigError("map.name: required for a builtin map");
    builtin_map(spec.name);
  } else if (spec.type == "polynomial") {
    if (!j.contains("coefficients")) throw ConfigError("map.coefficients: required for a polynomial map");
    spec.coefficients = number_list(j["coefficients"], "coefficients");
    if (!j.contains("critical_points")) {
      throw ConfigError("map.critical_points: required for a polynomial map");
    }
    spec.critical_points = number_list(j["critical_points"], "critical_points");
  } else if (spec.type == "piecewise_linear") {
    if (!j.contains("breakpoints") || !j["breakpoints"].is_array()) {
      throw ConfigError("map.breakpoints: required array of [x, y] pairs");
    }
    for (const auto& p : j["breakpoints"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("map.breakpoints: each entry must be [x, y]");
      }
      spec.breakpoints.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (j.contains("critical_points")) {
      spec.critical_points = number_list(j["critical_points"], "critical_points");
    }
  } else {
    throw ConfigError("map.type: expected builtin, polynomial or piecewise_linear, got '" +
                      spec.type + "'");
  }
  return spec;
}

std::string to_json(const MapSpec& spec) {
  json j;
  j["type"] = spec.type;
  if (!spec.name.empty()) j["name"] = spec.name;
  if (spec.type == "polynomial") j["coefficients"] = spec.coefficients;
  if (spec.type != "builtin" && !spec.critical_points.empty()) {
    j["critical_points"] = spec.critical_points;
  }
  if (spec.type == "piecewise_linear") {
    json pts = json::array();
    for (const auto& p : spec.breakpoints) pts.push_back({p.x, p.y});
    j["breakpoints"] = pts;
  }
  return j.dump();
}

IntervalSet parse_interval_list(std::string_view text) {
  const json j = parse_or_throw(text, "interval list");
  if (!j.is_array()) throw ConfigError("interval list: expected [[lo, hi], ...]");
  std::vector<Interval> pieces;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ConfigError("interval list: each entry must be [lo, hi]");
    }
    const double lo = p[0].get<double>();
    const double hi = p[1].get<double>();
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
      throw ConfigError("interval list: need 0 <= lo < hi <= 1");
    }
    pieces.push_back({lo, hi});
  }
  std::ranges::sort(pieces, {}, &Interval::lo);
  for (std::size_t k = 1; k < pieces.size(); ++k) {
    if (pieces[k].lo < pieces[k - 1].hi) throw ConfigError("interval list: entries overlap");
  }
  return IntervalSet(std::move(pieces));
}

std::string density_to_json(const DensityHistogram& f) {
  json j = meta_json(f.meta());
  j["L"] = f.bins();
  j["f"] = std::vector<double>(f.weights().begin(), f.weights().end());
  return j.dump(1);
}

std::string partition_to_json(const RefinedPartition& p) {
  json cells = json::object();
  for (std::size_t w = 0; w < p.word_count(); ++w) {
    cells[word_string(static_cast<Word>(w), p.depth())] = intervals_json(p.cell(static_cast<Word>(w)));
  }
  json j;
  j["depth"] = p.depth();
  j["cells"] = std::move(cells);
  return j.dump(1);
}

std::string report_to_json(const EntropyReport& r) {
  json j;
  json prov;
  prov["map"] = r.provenance.map_name;
  prov["density"] = meta_json(r.provenance.density);
  prov["L"] = r.provenance.bins;
  prov["N"] = r.provenance.depth;
  if (!r.provenance.config_hash.empty()) prov["config_hash"] = r.provenance.config_hash;
  j["provenance"] = prov;

  j["bias"] = r.bias;
  j["H"] = r.block_entropy;
  j["h"] = r.per_bit;
  j["h_estimate"] = r.rate.value;
  j["h_spread"] = r.rate.spread;
  j["h_window"] = r.rate.window;
  if (r.budget) {
    json b;
    b["R"] = r.budget->input_rate;
    b["R_d"] = r.budget->output_rate;
    b["no_extractable_entropy"] = r.budget->no_entropy;
    if (std::isfinite(r.budget->overhead)) {
      b["overhead"] = r.budget->overhead;
    } else {
      b["overhead"] = nullptr;
    }
    j["rate_budget"] = b;
  }

  // Word tables are only written while they stay readable.
  json tables = json::array();
  for (const auto& t : r.tables) {
    if (t.depth() > 8) break;
    json probs = json::object();
    for (std::size_t w = 0; w < t.size(); ++w) {
      probs[word_string(static_cast<Word>(w), t.depth())] = t[static_cast<Word>(w)];
    }
    tables.push_back({{"N", t.depth()}, {"renormalization", t.renormalization()}, {"P", probs}});
  }
  j["tables"] = tables;
  j["warnings"] = r.warnings;
  return j.dump(1);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chaosent
