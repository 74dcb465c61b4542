#include "coat/bench/checkpoint.hpp"

#include <bit>
#include <cstdio>

#include "coat/bench/io.hpp"
#include "coat/error.hpp"

namespace coat {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

std::size_t to_size(const std::map<std::string, std::string>& f, const std::string& key) {
  auto it = f.find(key);
  if (it == f.end()) throw IoError("checkpoint manifest lacks " + key);
  try {
    std::size_t used = 0;
    const auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw IoError("checkpoint manifest: " + key + " is not a count");
  }
}

}  // namespace

std::string encode_tensor_blob(const Tensor<float>& t) {
  std::string out;
  put_u64(out, t.rank());
  for (auto d : t.shape().dims()) put_u64(out, d);
  for (float v : t.data()) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  return out;
}

Tensor<float> decode_tensor_blob(std::string_view bytes, const std::string& what) {
  if (bytes.size() < 8) throw IoError(what + ": truncated blob");
  const auto rank = get_u64(bytes, 0);
  if (rank > 8 || bytes.size() < 8 * (1 + rank)) throw IoError(what + ": bad rank");
  std::vector<std::size_t> dims;
  for (std::uint64_t i = 0; i < rank; ++i) dims.push_back(static_cast<std::size_t>(get_u64(bytes, 8 * (1 + i))));
  const Shape shape(dims);
  const std::size_t offset = 8 * (1 + rank);
  if (bytes.size() != offset + 4 * shape.numel())
    throw IoError(what + ": blob holds " + std::to_string(bytes.size() - offset) + " data bytes, shape " + shape.str() +
                  " needs " + std::to_string(4 * shape.numel()));
  std::vector<float> data(shape.numel());
  for (std::size_t k = 0; k < data.size(); ++k) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + 4 * k + i])) << (8 * i);
    data[k] = std::bit_cast<float>(bits);
  }
  return Tensor<float>(shape, std::move(data));
}

std::map<std::string, std::string> model_config_fields(const ModelConfig& c) {
  return {{"model.preconv_layers", std::to_string(c.preconv_layers)},
          {"model.preconv_filters", std::to_string(c.preconv_filters)},
          {"model.blocks_per_branch", std::to_string(c.blocks_per_branch)},
          {"model.block_filters", std::to_string(c.block_filters)},
          {"model.attention_heads", std::to_string(c.attention_heads)},
          {"model.posenc_depth", std::to_string(c.posenc_depth)},
          {"model.fc1_width", std::to_string(c.fc1_width)},
          {"model.head_mode", to_string(c.head_mode)},
          {"model.action_count", std::to_string(c.action_count)},
          {"model.input_channels", std::to_string(c.input_channels)},
          {"model.agent_count", std::to_string(c.agent_count)},
          {"model.desk_scale", c.desk_scale ? "1" : "0"}};
}

ModelConfig model_config_from_fields(const std::map<std::string, std::string>& f) {
  ModelConfig c;
  c.preconv_layers = to_size(f, "model.preconv_layers");
  c.preconv_filters = to_size(f, "model.preconv_filters");
  c.blocks_per_branch = to_size(f, "model.blocks_per_branch");
  c.block_filters = to_size(f, "model.block_filters");
  c.attention_heads = to_size(f, "model.attention_heads");
  c.posenc_depth = to_size(f, "model.posenc_depth");
  c.fc1_width = to_size(f, "model.fc1_width");
  auto head = f.find("model.head_mode");
  if (head == f.end()) throw IoError("checkpoint manifest lacks model.head_mode");
  c.head_mode = parse_head_mode(head->second);
  c.action_count = to_size(f, "model.action_count");
  c.input_channels = to_size(f, "model.input_channels");
  c.agent_count = to_size(f, "model.agent_count");
  c.desk_scale = to_size(f, "model.desk_scale") != 0;
  c.validate();
  return c;
}

void save_checkpoint(const std::filesystem::path& dir, const Model<float>& model,
                     const std::map<std::string, std::string>& info) {
  std::map<std::string, std::string> manifest = model_config_fields(model.config());
  std::size_t index = 0;
  for (const auto& [name, entry] : model.params()) {
    char file[32];
    std::snprintf(file, sizeof file, "p%03zu.bin", index++);
    atomic_write(dir / file, encode_tensor_blob(entry.value));
    manifest["param." + name] = file;
  }
  for (const auto& [k, v] : info) {
    if (k.empty() || k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
      throw ContractError("checkpoint info must be single-line key=value text");
    manifest["info." + k] = v;
  }
  std::string text = "format=coat-checkpoint\nversion=" + std::to_string(kCheckpointFormatVersion) + "\n";
  for (const auto& [k, v] : manifest) text += k + "=" + v + "\n";
  // the manifest goes last: a checkpoint without one is incomplete
  atomic_write(dir / "manifest.txt", text);
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto fields = parse_key_values(read_file(dir / "manifest.txt"), "checkpoint manifest");
  auto get = [&](const std::string& k) {
    auto it = fields.find(k);
    if (it == fields.end()) throw IoError("checkpoint manifest lacks " + k);
    return it->second;
  };
  if (get("format") != "coat-checkpoint") throw IoError(dir.string() + " is not a checkpoint");
  if (get("version") != std::to_string(kCheckpointFormatVersion))
    throw IoError("unsupported checkpoint version " + get("version"));
  const auto config = model_config_from_fields(fields);
  ParamStore<float> params;
  std::map<std::string, std::string> info;
  for (const auto& [k, v] : fields) {
    if (k.starts_with("param.")) {
      const auto name = k.substr(6);
      if (v.find('/') != std::string::npos || v.starts_with(".")) throw IoError("bad blob name " + v);
      params.add(name, decode_tensor_blob(read_file(dir / v), name));
    } else if (k.starts_with("info.")) {
      info.emplace(k.substr(5), v);
    }
  }
  try {
    return {Model<float>(config, std::move(params)), std::move(info)};
  } catch (const ConfigError& e) {
    throw IoError(std::string("checkpoint does not match its config: ") + e.what());
  }
}

}  // namespace coat
