#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wayfield/engine.hpp"

namespace wayfield {

/// Everything a simulation run needs. Serialized as flat key=value text;
/// every key can also be set by the command-line flag of the same name.
struct RunConfig {
  std::string scenario;  // scenario file path
  ModelParams params;
  uint64_t seed = 1;
  int64_t steps = 0;
  std::vector<int64_t> snapshot_steps;
  std::string output_dir = ".";
  double speed = 4.0 / 3.0;  // population desired speed; also the tree reference speed
  std::string arrivals = "poisson";  // or "constant"
  bool dump_fields = false;
  bool verbose = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies one key=value pair; throws ConfigError on unknown keys or bad
/// values.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Full key=value dump; feeding it back reproduces the same run.
std::string serialize_config(const RunConfig& config);

EngineConfig engine_config_of(const RunConfig& config);

}  // namespace wayfield
