#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mixssl/nn/model.hpp"

namespace mixssl::nn {

struct CheckpointMeta {
  int64_t epoch = 0;
  uint64_t seed = 0;
  int64_t optimizer_steps = -1;  // -1: no optimizer state stored
};

// A checkpoint is a directory: `params.bin` (checksummed named-tensor
// payload), sidecar `manifest.json` (config, components, epoch, seed,
// config_hash), and optionally `optimizer.bin`.
void save_checkpoint(const ModelBundleF& bundle, const std::filesystem::path& dir,
                     const CheckpointMeta& meta);

ModelBundleF load_checkpoint(const std::filesystem::path& dir);

// Loads and verifies the stored config against the requesting one; throws
// IncompatibleCheckpoint on any mismatch.
ModelBundleF load_checkpoint(const std::filesystem::path& dir, const ModelConfig& requested);

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& dir);

bool is_checkpoint_dir(const std::filesystem::path& dir);

std::string config_hash(const ModelConfig& config, const Components& components);

// Named-tensor container used for parameters and optimizer state.
void write_tensor_file(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, const TensorF*>>& tensors);
std::map<std::string, TensorF> read_tensor_file(const std::filesystem::path& path);

}  // namespace mixssl::nn
