#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaosent/bitstream.hpp"
#include "chaosent/density.hpp"
#include "chaosent/entropy.hpp"
#include "chaosent/error.hpp"
#include "chaosent/io.hpp"
#include "chaosent/partition.hpp"

namespace chaosent::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kCrossMethodLimit = 0.05;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path out_path(const AnalysisConfig& cfg, const std::string& name) {
  const fs::path dir(cfg.output.directory);
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + p.string());
  os << content;
  if (!os) throw Error("write failed: " + p.string());
}

std::string with_hash(const std::string& json_text, const std::string& hash) {
  json j = json::parse(json_text);
  j["config_hash"] = hash;
  return j.dump(1) + "\n";
}

std::string csv_with_hash(const std::string& csv, const std::string& hash) {
  return "# config_hash " + hash + "\n" + csv;
}

void write_config(const AnalysisConfig& cfg) {
  write_file(out_path(cfg, "config.json"), to_json(cfg) + "\n");
}

struct Densities {
  std::optional<DensityHistogram> mc;
  std::optional<DensityHistogram> fp;

  // The Monte Carlo estimate drives analysis whenever it exists.
  const DensityHistogram& primary() const { return mc ? *mc : *fp; }
};

Densities compute_densities(const MapModel& map, const AnalysisConfig& cfg) {
  Densities d;
  const auto m = cfg.density.method;
  if (m != DensityChoice::fp_operator) {
    d.mc = mc_density(map, cfg.density.bins, cfg.dither_config(), cfg.density.shards);
  }
  if (m != DensityChoice::montecarlo) {
    d.fp = fp_fixed_point(map, cfg.density.bins, cfg.fixed_point_options());
  }
  return d;
}

void write_density(const AnalysisConfig& cfg, const DensityHistogram& f, const std::string& stem,
                   const std::string& hash, std::ostream& out) {
  if (cfg.output.csv) {
    const auto p = out_path(cfg, stem + ".csv");
    write_file(p, csv_with_hash(density_to_csv(f), hash));
    out << "wrote " << p.string() << "\n";
  }
  if (cfg.output.json) {
    const auto p = out_path(cfg, stem + ".json");
    write_file(p, with_hash(density_to_json(f), hash));
    out << "wrote " << p.string() << "\n";
  }
}

void print_table(std::ostream& out, const ProbabilityTable& t) {
  out << "  N=" << t.depth() << ":";
  for (std::size_t w = 0; w < t.size(); ++w) {
    out << " " << word_string(static_cast<Word>(w), t.depth()) << "=" << fmt("%.4f", t[static_cast<Word>(w)]);
  }
  out << "\n";
}

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
  std::string note;
};

}  // namespace

int run_density(const AnalysisConfig& cfg, std::ostream& out) {
  const auto hash = config_hash(cfg);
  const MapModel map = cfg.map.build();
  const Densities d = compute_densities(map, cfg);
  write_config(cfg);
  if (d.mc) write_density(cfg, *d.mc, "density_mc", hash, out);
  if (d.fp) {
    write_density(cfg, *d.fp, "density_fp", hash, out);
    out << "fp_operator converged in " << d.fp->meta().iterations << " iterations\n";
  }
  if (d.mc && d.fp) out << "L1(mc, fp) = " << fmt("%.6f", l1_distance(*d.mc, *d.fp)) << "\n";
  out << "config_hash " << hash << "\n";
  return kOk;
}

int run_analyze(const AnalysisConfig& cfg, std::ostream& out) {
  const auto hash = config_hash(cfg);
  const MapModel map = cfg.map.build();
  const SymbolPartition s = cfg.symbol_partition();
  const Densities d = compute_densities(map, cfg);

  EntropyReport r = analyze(map, s, d.primary(), cfg.analysis_options());
  r.provenance.config_hash = hash;
  write_config(cfg);
  if (cfg.output.json) {
    json j = json::parse(report_to_json(r));
    if (d.mc && d.fp) j["l1_mc_fp"] = l1_distance(*d.mc, *d.fp);
    j["config_hash"] = hash;
    const auto p = out_path(cfg, "report.json");
    write_file(p, j.dump(1) + "\n");
    out << "wrote " << p.string() << "\n";
  }
  if (cfg.output.csv) {
    const auto p = out_path(cfg, "entropy.csv");
    write_file(p, csv_with_hash(entropy_to_csv(r), hash));
    out << "wrote " << p.string() << "\n";
  }

  out << "map " << r.provenance.map_name << ", density " << to_string(d.primary().method())
      << ", L=" << r.provenance.bins << ", N=" << r.provenance.depth << "\n";
  out << "P(0) = " << fmt("%.4f", r.tables[0][0]) << ", P(1) = " << fmt("%.4f", r.tables[0][1])
      << ", bias = " << fmt("%.5f", r.bias) << "\n";
  for (std::size_t k = 0; k < r.per_bit.size(); ++k) {
    out << "  h_" << k + 1 << " = " << fmt("%.6f", r.per_bit[k]) << "\n";
  }
  out << "h_estimate = " << fmt("%.6f", r.rate.value) << " (spread " << fmt("%.2e", r.rate.spread)
      << " over last " << r.rate.window << ")\n";
  if (r.budget) {
    out << "R = " << r.budget->input_rate << " bit/s -> R_d = " << fmt("%.6g", r.budget->output_rate)
        << " bit/s";
    if (r.budget->no_entropy) out << " (no extractable entropy)";
    out << "\n";
  }
  if (d.mc && d.fp) out << "L1(mc, fp) = " << fmt("%.6f", l1_distance(*d.mc, *d.fp)) << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  out << "config_hash " << hash << "\n";
  return kOk;
}

int run_bitgen(const AnalysisConfig& cfg, std::ostream& out) {
  const auto hash = config_hash(cfg);
  const MapModel map = cfg.map.build();
  const SymbolPartition s = cfg.symbol_partition();
  const BitSequence bits = generate_bits(map, s, cfg.bitstream_config());
  const bool ascii = cfg.bitstream.format == "ascii";
  const std::string ext = ascii ? ".txt" : ".bin";

  auto save = [&](const BitSequence& b, const std::string& stem) {
    const auto p = out_path(cfg, stem + ext);
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + p.string());
    if (ascii) {
      write_bits_ascii(os, b, "config_hash=" + hash);
    } else {
      write_bits_binary(os, b);
    }
    if (!os) throw Error("write failed: " + p.string());
    out << "wrote " << p.string() << "\n";
    return p;
  };

  write_config(cfg);
  json summary;
  summary["config_hash"] = hash;
  summary["map"] = map.name();
  summary["length"] = bits.size();
  summary["stream"] = save(bits, "bits").filename().string();

  const double ones = ones_fraction(bits);
  summary["ones_fraction"] = ones;
  out << bits.size() << " bits, ones fraction " << fmt("%.5f", ones) << "\n";
  const auto workers = cfg.worker_count();
  json patterns = json::object();
  for (int n = 1; n <= 4; ++n) {
    if (bits.size() < (std::uint64_t{100} << n)) break;
    const auto t = empirical_pattern_probs(bits, n, workers);
    print_table(out, t);
    json p = json::object();
    for (std::size_t w = 0; w < t.size(); ++w) p[word_string(static_cast<Word>(w), n)] = t[static_cast<Word>(w)];
    patterns[std::to_string(n)] = p;
  }
  summary["patterns"] = patterns;

  if (cfg.bitstream.von_neumann) {
    const ExtractResult vn = von_neumann_extract(bits);
    // Pairs are accepted at rate (P(01) + P(10)) / 2; this equals P(0)P(1)
    // only for an uncorrelated stream.
    std::optional<double> pair_rate;
    if (bits.size() >= 400) {
      const auto t2 = empirical_pattern_probs(bits, 2, workers);
      pair_rate = 0.5 * (t2[1] + t2[2]);
    }
    summary["von_neumann"] = {{"stream", save(vn.bits, "bits_vn").filename().string()},
                              {"length", vn.bits.size()},
                              {"ratio", vn.ratio()},
                              {"ratio_iid", ones * (1.0 - ones)},
                              {"ratio_pairs", pair_rate ? json(*pair_rate) : json(nullptr)},
                              {"ones_fraction", ones_fraction(vn.bits)}};
    out << "von Neumann: " << vn.bits.size() << " bits, ratio " << fmt("%.5f", vn.ratio())
        << " (P(0)P(1) = " << fmt("%.5f", ones * (1.0 - ones));
    if (pair_rate) out << ", (P(01) + P(10)) / 2 = " << fmt("%.5f", *pair_rate);
    out << "), ones fraction " << fmt("%.5f", ones_fraction(vn.bits)) << "\n";
  }
  if (cfg.output.json) {
    const auto p = out_path(cfg, "bitgen.json");
    write_file(p, summary.dump(1) + "\n");
    out << "wrote " << p.string() << "\n";
  }
  out << "config_hash " << hash << "\n";
  return kOk;
}

int run_verify(const AnalysisConfig& cfg, std::ostream& out) {
  const auto hash = config_hash(cfg);
  const MapModel map = cfg.map.build();
  const SymbolPartition s = cfg.symbol_partition();
  std::vector<Check> checks;

  auto report = [&]() {
    bool ok = true;
    char line[160];
    std::snprintf(line, sizeof line, "%-34s %12s %12s  %s\n", "check", "value", "limit", "result");
    out << line;
    json arr = json::array();
    for (const auto& c : checks) {
      std::snprintf(line, sizeof line, "%-34s %12.6g %12.6g  %s", c.name.c_str(), c.value, c.limit,
                    c.pass ? "PASS" : "FAIL");
      out << line;
      if (!c.note.empty()) out << "  " << c.note;
      out << "\n";
      ok = ok && c.pass;
      arr.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass},
                     {"note", c.note}});
    }
    out << (ok ? "all checks passed" : "verification FAILED") << "\n";
    write_config(cfg);
    if (cfg.output.json) {
      const json j{{"config_hash", hash}, {"map", map.name()}, {"pass", ok}, {"checks", arr}};
      write_file(out_path(cfg, "verify.json"), j.dump(1) + "\n");
    }
    out << "config_hash " << hash << "\n";
    return ok ? kOk : kAnalysisFailure;
  };

  std::optional<Densities> dens;
  try {
    dens = compute_densities(map, cfg);
  } catch (const ResolutionError& e) {
    checks.push_back({"density resolution (K >= 100 L)",
                      static_cast<double>(cfg.density.samples) / cfg.density.bins,
                      static_cast<double>(DitherConfig::kSamplesPerBin), false, e.what()});
    return report();
  } catch (const ConvergenceError& e) {
    checks.push_back({"fp_operator convergence", e.last_distance(), cfg.density.tol, false, e.what()});
    return report();
  }
  if (dens->mc && dens->fp) {
    const double l1 = l1_distance(*dens->mc, *dens->fp);
    checks.push_back({"L1(mc, fp)", l1, kCrossMethodLimit, l1 < kCrossMethodLimit, ""});
  }
  const DensityHistogram& f = dens->primary();

  // Structural invariants run inside analyze.
  std::optional<EntropyReport> r;
  AnalysisOptions opts = cfg.analysis_options();
  opts.depth = std::max(cfg.depth, cfg.verify.depth);
  try {
    r = analyze(map, s, f, opts);
    checks.push_back({"structural invariants N=1.." + std::to_string(opts.depth), 0.0, 0.0, true, ""});
  } catch (const InvariantViolation& e) {
    checks.push_back({"structural invariants", 1.0, 0.0, false, e.what()});
    return report();
  }

  BitstreamConfig bc = cfg.bitstream_config();
  bc.length = cfg.verify.bits;
  const BitSequence bits = generate_bits(map, s, bc);
  const auto workers = cfg.worker_count();
  std::vector<double> H_emp;
  for (int n = 1; n <= cfg.verify.depth; ++n) {
    if (bits.size() < (std::uint64_t{100} << n)) {
      checks.push_back({"P_" + std::to_string(n) + " stream length", static_cast<double>(bits.size()),
                        static_cast<double>(std::uint64_t{100} << n), false, "stream too short"});
      break;
    }
    const auto emp = empirical_pattern_probs(bits, n, workers);
    const double tv = total_variation(r->tables[n - 1], emp);
    checks.push_back({"P_" + std::to_string(n) + " total variation", tv, cfg.verify.tv_tol,
                      tv < cfg.verify.tv_tol, ""});
    H_emp.push_back(block_entropy(emp));
  }
  const auto h_emp = per_bit_entropies(H_emp);
  for (std::size_t k = 0; k < h_emp.size(); ++k) {
    const double dh = std::abs(h_emp[k] - r->per_bit[k]);
    checks.push_back({"h_" + std::to_string(k + 1) + " |density - stream|", dh, cfg.verify.h_tol,
                      dh < cfg.verify.h_tol, ""});
  }
  return report();
}

}  // namespace chaosent::cli
