#pragma once

// The end-to-end verification suite behind `selfforce verify`: eight
// criteria A1-A8 covering the damping law, the energy asymptotics, energy
// conservation, the grid solver's bounds and order, and the sigma -> 0 limit.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfforce/config.hpp"

namespace selfforce::acceptance {

struct Criterion {
  std::string criterion_id;
  std::string title;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  std::vector<Criterion> criteria;
  bool all_pass() const;
};

/// m = c = beta = 1, v0 = 0.5, sigma = 0.02, dx = 0.004, Courant 0.5, T = 10,
/// stride 10.
config::RunConfig reference_config();

/// Runs A1-A8 in order. Grid preconditions (CFL, source resolution) are
/// checked before any criterion. `on_result` sees each criterion as soon as
/// it finishes. An error inside a criterion is rethrown with its id prefixed.
Report run_acceptance(const config::RunConfig& cfg,
                      const std::function<void(const Criterion&)>& on_result = {});

/// One line per criterion: "A5 PASS measured=... tolerance=... <detail>".
std::string summary_line(const Criterion& c);

nlohmann::json to_json(const Criterion& c);
nlohmann::json to_json(const Report& r);

}  // namespace selfforce::acceptance
