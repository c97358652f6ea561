#pragma once

// Run configuration: a flat `key = value` file with [physics], [numerics],
// [probes] and [paths] sections. `mode` comes before the first section.
// Parsing is strict: unknown keys, duplicates and malformed values are errors
// that name the line.
//
//   mode = fdtd
//   [physics]
//   m = 1
//   c = 1
//   beta = 1
//   v0 = 0.5
//   sigma = 0.02
//   [numerics]
//   dx = 0.004
//   courant = 0.5        # or dt = ..., not both
//   T = 10
//   stride = 10
//   snapshot_times = 2.5, 5
//   [probes]
//   x = -1, 0, 1
//   [paths]
//   output_dir = out

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfforce/core.hpp"

namespace selfforce::config {

enum class Mode { Analytic, Duhamel, Fdtd, Verify };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view name);

struct Numerics {
  std::optional<double> dx;
  std::optional<double> dt;
  std::optional<double> courant;
  double T = 0.0;
  std::size_t stride = 1;
  std::vector<double> snapshot_times;

  bool operator==(const Numerics&) const = default;
};

struct RunConfig {
  Mode mode = Mode::Analytic;
  PhysicalParams physics;
  Numerics numerics;
  std::vector<double> probes;
  std::optional<std::string> output_dir;

  bool operator==(const RunConfig&) const = default;

  /// dt if given, courant dx / c if given, otherwise T / 100 (analytic and
  /// duhamel output spacing; 1 when T = 0).
  double time_step() const;
};

/// Parses and validates a configuration. Throws UnknownKey, MissingKey,
/// TypeError or InvalidConfig with the line number, or the core validation
/// error for out-of-range physics.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical text form with every value at full precision;
/// parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& c);

}  // namespace selfforce::config
