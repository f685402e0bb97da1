#pragma once

#include <string>

#include "crowd/params.hpp"
#include "crowd/sweep.hpp"

namespace crowd {

struct RunConfig {
  SimParams sim;
  ObserverConfig observer;
};

// flat JSON with defaults for every field; unknown keys are config errors
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json_text(const std::string& text);

RunManifest load_manifest(const std::string& path);
RunManifest manifest_from_json_text(const std::string& text);

// grid, run count, seed, tool version and an ISO-8601 timestamp
void write_sweep_manifest(const RunManifest& m, const std::string& path);

}  // namespace crowd
