#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gooed/common.hpp"

namespace gooed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitRuntimeError = 4;

struct CliOptions {
  std::string command;  // sweep | optimize | validate | pde-demo
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  int threads = 1;
  bool paper_resolution = false;
  bool emit_plot_script = false;
};

/// FNV-1a over the canonical (key-sorted) dump of the effective study
/// configuration; stable under field reordering in the config file.
std::uint64_t config_hash(const nlohmann::json& effective);

/// Loads the config, runs the command, writes artifacts into out_dir.
/// Returns a process exit code (0 ok, 2 validation failure, 3 config
/// error, 4 runtime/IO error).
int run_study(const CliOptions& opts);

/// argv-style entry point used by the gooed binary and the test suite.
int run_cli(const std::vector<std::string>& args);

}  // namespace gooed::cli
