#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chaosent/density.hpp"
#include "chaosent/entropy.hpp"
#include "chaosent/interval_set.hpp"
#include "chaosent/map_model.hpp"
#include "chaosent/partition.hpp"

namespace chaosent {

// Declarative map description, the JSON map config:
//   {"type": "builtin", "name": "cubic_sample"}
//   {"type": "polynomial", "coefficients": [...], "critical_points": [...]}
//   {"type": "piecewise_linear", "breakpoints": [[x, y], ...]}
struct MapSpec {
  std::string type = "builtin";
  std::string name = "cubic_sample";
  std::vector<double> coefficients;
  std::vector<double> critical_points;
  std::vector<Breakpoint> breakpoints;

  MapModel build() const;

  friend bool operator==(const MapSpec& a, const MapSpec& b);
};

const std::vector<std::string>& builtin_map_names();
MapModel builtin_map(const std::string& name);
// Threshold of the bit partition used with a built-in map: 1/sqrt(3) for
// cubic_sample, 1/2 otherwise.
double builtin_split(const std::string& name);

// Throws ConfigError naming the offending field.
MapSpec parse_map_spec(std::string_view json_text);
std::string to_json(const MapSpec& spec);

// [[lo, hi], ...]
IntervalSet parse_interval_list(std::string_view json_text);

std::string density_to_json(const DensityHistogram& f);
// {"depth": N, "cells": {"0101": [[lo, hi], ...], ...}}
std::string partition_to_json(const RefinedPartition& p);
std::string report_to_json(const EntropyReport& r);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace chaosent
