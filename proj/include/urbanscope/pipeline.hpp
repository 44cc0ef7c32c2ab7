#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "urbanscope/io.hpp"

namespace urbanscope {

inline constexpr const char* kVersion = "1.0.0";

struct PipelineOptions {
  std::optional<std::string> output_dir;  // overrides the config's output_dir
  std::optional<unsigned> workers;        // overrides the config's workers
  std::string base_dir;                   // relative input paths resolve here
};

struct PipelineResult {
  std::string output_dir;
  Json manifest;
  std::string manifest_hash;  // FNV-1a of the manifest as written
  std::vector<std::string> notices;
};

// Runs every analysis stage the config's inputs allow and writes the
// artifacts plus manifest.json into the output directory. Output is staged
// in a sibling temporary directory and moved into place only on success.
//
// Throws InvalidInput for a malformed config and StageFailure when a stage
// fails.
PipelineResult run_pipeline(const Json& config, const PipelineOptions& opts = {});
PipelineResult run_pipeline_file(const std::string& config_path, const PipelineOptions& opts = {});

}  // namespace urbanscope
