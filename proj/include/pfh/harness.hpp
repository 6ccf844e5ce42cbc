// Report-producing entry points behind the command line. Each run takes a
// parameter object (config file merged with flags) and returns a JSON report.
#pragma once

#include <optional>
#include <string>

#include "pfh/serialization.hpp"

namespace pfh {

inline constexpr const char* kVersion = "pfhspec 0.1.0";

struct Report {
  json body;
  std::optional<std::string> csv;
  int exit_code = 0;
};

Report run_bound(const json& params);
Report run_capacity(const json& params);
Report run_spectral(const json& params);
Report run_orbits(const json& params);
Report run_sweep(const json& params);
Report run_experiment(const json& params);

/// 0 ok, 2 validation, 3 hypothesis, 4 not found at resolution, 1 numerical failure.
int exit_code_for(ErrorKind kind);
json error_report(const std::string& command, const Error& e);

/// Report without its "timestamp" member, serialized; equal for reproducible runs.
std::string reproducible_dump(const json& report);

}  // namespace pfh
