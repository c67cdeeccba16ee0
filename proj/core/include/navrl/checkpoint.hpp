#pragma once

#include <string>

#include <json.hpp>

#include "navrl/nn.hpp"

namespace navrl {

// Checkpoint = JSON manifest + little-endian float32 blob. The manifest
// stores tensor names, shapes, and byte offsets into the blob, plus an
// arbitrary "config" echo. Round trips are bit exact.
void save_checkpoint(const ParamSet<float>& params, const std::string& manifest_path,
                     const std::string& blob_path,
                     const nlohmann::ordered_json& config_echo);

struct LoadedCheckpoint {
  ParamSet<float> params;
  nlohmann::ordered_json config;
};

// Reads a manifest and its blob (blob filename resolved relative to the
// manifest's directory). Throws on malformed manifests or size mismatches.
LoadedCheckpoint load_checkpoint(const std::string& manifest_path);

// Copies loaded values into an existing parameter set, matching by name.
// Throws if a destination name is missing or shapes differ.
void restore_params(ParamSet<float>& dst, const ParamSet<float>& loaded);

}  // namespace navrl
