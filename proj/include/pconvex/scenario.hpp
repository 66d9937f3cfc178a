#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pconvex/registry.hpp"

namespace pconvex {

enum class RunStatus : int {
  ok = 0,
  io_error = 2,       // config file missing or unreadable
  invalid_config = 3  // bad p, unknown registry key, malformed task
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_dir;
  bool parallel = false;
  bool write_traces = true;
};

struct RunResult {
  RunStatus status = RunStatus::ok;
  std::string error;        // populated on failure, names the field
  nlohmann::json report;    // full report document
  std::string report_path;  // empty when not written
};

/// Executes a scenario config: builds the space/body/map, runs the task list
/// in order (or in parallel when asked; per-task seeds are derived from the
/// scenario seed either way, so the report is identical), and writes the
/// report JSON plus optional CSV traces. The report "body" is byte-stable
/// for a fixed (config, seed); wall-clock lives outside it.
RunResult run_scenario(const std::string& config_path,
                       const RunOptions& options = {});

/// Registry listing as a JSON document (the `list` subcommand).
nlohmann::json list_builtins_json(const std::string& filter = "");

/// Serialized report body only (deterministic part), for diffing.
std::string report_body_string(const nlohmann::json& report);

}  // namespace pconvex
