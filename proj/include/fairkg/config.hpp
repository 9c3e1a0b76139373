#pragma once

// Run configuration files: one `key = value` per line, '#' or ';' comments.
// README.md lists every key.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "fairkg/eval.hpp"
#include "fairkg/graph.hpp"
#include "fairkg/train.hpp"

namespace fairkg {

struct RunConfig {
  TrainConfig train;
  SplitRatios ratios;
  Test1Scope test1_scope = Test1Scope::all_bridges;
  /// Sensitive keys, when present in the file.
  std::optional<SensitiveLabels> sensitive;
};

/// Sets one key. Throws ConfigError on an unknown key or a bad value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads settings on top of `base`. Throws ConfigError naming the source and
/// line on a syntax error, a duplicated key or a bad value.
RunConfig parse_run_config(std::istream& in, const std::string& source, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

/// Sorted `key=value` lines describing every training-relevant setting.
std::string canonical_config(const TrainConfig& train, const SplitRatios& ratios, Test1Scope scope);
/// FNV-1a hex digest of canonical_config.
std::string config_digest(const TrainConfig& train, const SplitRatios& ratios, Test1Scope scope);

std::string_view to_string(Test1Scope scope);
Test1Scope parse_test1_scope(std::string_view text);

}  // namespace fairkg
