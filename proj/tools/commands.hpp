#pragma once

#include <iosfwd>

#include "chaosent/config.hpp"

namespace chaosent::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kAnalysisFailure = 1;
inline constexpr int kConfigError = 2;

// Each command writes its files under cfg.output.directory, prints a short
// summary to `out` and returns an exit code. Library errors propagate.
int run_density(const AnalysisConfig& cfg, std::ostream& out);
int run_analyze(const AnalysisConfig& cfg, std::ostream& out);
int run_bitgen(const AnalysisConfig& cfg, std::ostream& out);
int run_verify(const AnalysisConfig& cfg, std::ostream& out);

}  // namespace chaosent::cli
