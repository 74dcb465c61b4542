#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "coat/model/model.hpp"

namespace coat {

inline constexpr int kCheckpointFormatVersion = 1;

/// A checkpoint is a directory: manifest.txt (key=value: format, version,
/// model config, one param.<name>=<file> per tensor, free-form info.<key>) and
/// one blob per parameter: u64 rank, u64 dims..., f32 data, little endian.
void save_checkpoint(const std::filesystem::path& dir, const Model<float>& model,
                     const std::map<std::string, std::string>& info = {});

struct Checkpoint {
  Model<float> model;
  std::map<std::string, std::string> info;
};
Checkpoint load_checkpoint(const std::filesystem::path& dir);

std::string encode_tensor_blob(const Tensor<float>& t);
Tensor<float> decode_tensor_blob(std::string_view bytes, const std::string& what);

/// key=value lines for every ModelConfig field, prefixed "model.".
std::map<std::string, std::string> model_config_fields(const ModelConfig& config);
ModelConfig model_config_from_fields(const std::map<std::string, std::string>& fields);

}  // namespace coat
