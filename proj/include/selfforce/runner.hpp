#pragma once

// Orchestration of the four run modes. Each writes into an output directory:
//   config.echo, format_version      always
//   timeseries.csv                   analytic, duhamel, fdtd
//   snapshot_NNN.csv                 one per snapshot time
//   run.json                         run summary (also on abort)
//   report.json                      verify

#include <filesystem>
#include <ostream>

#include "selfforce/config.hpp"

namespace selfforce::runner {

/// Runs the configured mode. Returns 0 on success, 1 if a verification
/// criterion failed. Errors propagate after partial output has been flushed.
int run(const config::RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Directory used when neither --out nor paths.output_dir is given.
inline constexpr const char* kDefaultOutputDir = "selfforce-out";

}  // namespace selfforce::runner
