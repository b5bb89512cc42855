#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tenet/granger.hpp"

namespace tenet::cli {

/// Generator settings for the `synth` subcommand. A preset seeds the lag-1
/// coupling matrix; explicit `coupling` entries ("lag:target:source:value",
/// 1-based lag, 0-based indices) are applied on top.
struct SynthConfig {
  int n = 3;
  int T = 1000;
  int p = 1;
  double noise_sd = 1.0;
  std::string preset = "chain";  // chain | independent
  double strength = 0.4;
  double self_coupling = 0.3;
  std::vector<std::string> coupling;
};

/// Everything a pipeline run needs. Defaults are the documented ones; a
/// config file may override them and command-line flags override the file.
struct RunConfig {
  std::string input;
  std::string date_column = "date";
  std::string lag = "auto";  // "auto" or a positive integer
  double alpha = 0.01;
  std::string method = "f_test";  // f_test | surrogate
  int bins = 3;
  int surrogates = 100;
  std::uint64_t seed = 42;
  std::string output_dir = ".";
  std::string flagged;  // optional path: one vertex label per line
  SynthConfig synth;

  bool lag_is_auto() const { return lag == "auto"; }
  int lag_value() const;  // numeric lag; throws ConfigError on "auto"
  SigMethod sig_method() const;
};

/// Parse a flat `key = value` file ('#' comments). Unknown keys and invalid
/// values raise ConfigError naming the key.
RunConfig parse_config(const std::string& path);

/// Range-check every field; throws ConfigError naming the offending key.
void validate_config(const RunConfig& config);

/// The config as a JSON object (embedded in every artifact's meta block).
std::string config_to_json(const RunConfig& config);

/// Rebuild a RunConfig from the JSON object written by config_to_json.
RunConfig config_from_json(const std::string& json_text);

/// The config as `# key = value` lines (CSV artifact metadata block).
std::string config_to_comment_block(const RunConfig& config);

}  // namespace tenet::cli
