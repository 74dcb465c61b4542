#include "coat/model/model.hpp"

#include <random>

namespace coat {

std::string to_string(HeadMode mode) { return mode == HeadMode::dual ? "dual" : "single"; }

HeadMode parse_head_mode(const std::string& text) {
  if (text == "dual") return HeadMode::dual;
  if (text == "single") return HeadMode::single;
  throw ConfigError("unknown head mode: " + text);
}

ModelConfig ModelConfig::paper(std::size_t input_channels, std::size_t action_count, HeadMode mode,
                               std::size_t agent_count) {
  ModelConfig c;
  c.input_channels = input_channels;
  c.action_count = action_count;
  c.head_mode = mode;
  c.agent_count = agent_count;
  return c;
}

ModelConfig ModelConfig::desk(std::size_t input_channels, std::size_t action_count, HeadMode mode,
                              std::size_t agent_count) {
  ModelConfig c = paper(input_channels, action_count, mode, agent_count);
  c.preconv_layers = 2;
  c.preconv_filters = 16;
  c.blocks_per_branch = 2;
  c.block_filters = 24;
  c.attention_heads = 2;
  c.posenc_depth = 8;
  c.fc1_width = 64;
  c.desk_scale = true;
  return c;
}

void ModelConfig::validate() const {
  if (preconv_layers == 0 || preconv_filters == 0 || blocks_per_branch == 0 || block_filters == 0 ||
      attention_heads == 0 || fc1_width == 0 || input_channels == 0 || agent_count == 0)
    throw ConfigError("model config: all layer counts and widths must be positive");
  if (head_mode == HeadMode::dual && action_count == 0)
    throw ConfigError("model config: dual-head mode needs at least one action");
  nn::AttentionConfig{attention_heads, block_filters}.validate();
  nn::PosEncConfig{posenc_depth}.validate();
}

std::vector<nn::CoAtBlockSpec> ModelConfig::branch_blocks(char branch) const {
  std::vector<nn::CoAtBlockSpec> blocks;
  std::size_t in = preconv_filters;
  for (std::size_t j = 0; j < blocks_per_branch; ++j) {
    nn::CoAtBlockSpec spec;
    spec.prefix = std::string("branch.") + branch + ".block." + std::to_string(j);
    spec.in_channels = in;
    spec.filters = block_filters;
    spec.attention_heads = attention_heads;
    spec.posenc = nn::PosEncConfig{posenc_depth};
    in = spec.output_channels();
    blocks.push_back(std::move(spec));
  }
  return blocks;
}

std::map<std::string, Shape> ModelConfig::parameter_shapes() const {
  validate();
  std::map<std::string, Shape> shapes;
  std::size_t in = input_channels;
  for (std::size_t i = 0; i < preconv_layers; ++i) {
    const std::string p = "preconv." + std::to_string(i);
    shapes[p + ".conv.kernel"] = Shape{3, 3, in, preconv_filters};
    shapes[p + ".conv.bias"] = Shape{preconv_filters};
    in = preconv_filters;
  }
  const std::string branches = head_mode == HeadMode::dual ? "hp" : "h";
  for (char b : branches)
    for (const auto& spec : branch_blocks(b)) {
      shapes[spec.kernel_name()] = Shape{3, 3, spec.in_channels, spec.filters};
      shapes[spec.bias_name()] = Shape{spec.filters};
    }
  shapes["fc1.weight"] = Shape{fc1_inputs(), fc1_width};
  shapes["fc1.bias"] = Shape{fc1_width};
  shapes["fc2_h.weight"] = Shape{fc1_width, 1};
  shapes["fc2_h.bias"] = Shape{1};
  if (head_mode == HeadMode::dual) {
    shapes["fc2_a.weight"] = Shape{fc1_width, action_count};
    shapes["fc2_a.bias"] = Shape{action_count};
  }
  return shapes;
}

template <typename T>
Model<T>::Model(ModelConfig config, ParamStore<T> params) : config_(std::move(config)), params_(std::move(params)) {
  const auto shapes = config_.parameter_shapes();
  if (shapes.size() != params_.size())
    throw ConfigError("model parameters do not match config: expected " + std::to_string(shapes.size()) +
                      " tensors, got " + std::to_string(params_.size()));
  for (const auto& [name, shape] : shapes) {
    if (!params_.contains(name)) throw ConfigError("model parameters missing " + name);
    if (params_.at(name).shape() != shape)
      throw ConfigError("parameter " + name + " has shape " + params_.at(name).shape().str() + ", config implies " +
                        shape.str());
  }
}

template <typename T>
ForwardResult<T> Model<T>::forward(Tape<T>& tape, Var encoded, const std::vector<GridPos>& agents) const {
  const auto& x = tape.value(encoded);
  if (x.rank() != 3 || x.channels() != config_.input_channels)
    throw ConfigError("model expects " + std::to_string(config_.input_channels) + " input channels, got " +
                      x.shape().str());
  if (agents.size() != config_.agent_count)
    throw ContractError("model expects " + std::to_string(config_.agent_count) + " agent position(s), got " +
                        std::to_string(agents.size()));
  for (const auto& a : agents)
    if (a.row >= x.height() || a.col >= x.width())
      throw ContractError("agent position (" + std::to_string(a.row) + ", " + std::to_string(a.col) +
                          ") outside the " + x.shape().str() + " input");

  Var z = encoded;
  for (std::size_t i = 0; i < config_.preconv_layers; ++i) {
    const std::string p = "preconv." + std::to_string(i);
    z = nn::conv_relu_skip(tape, z, p + ".conv.kernel", p + ".conv.bias");
  }

  const std::string branches = config_.head_mode == HeadMode::dual ? "hp" : "h";
  std::vector<Var> flat;
  for (char b : branches) {
    Var zb = z;
    for (const auto& spec : config_.branch_blocks(b)) zb = nn::coat_block(tape, zb, spec);
    flat.push_back(ops::gather_positions(tape, zb, agents));
  }
  Var features = flat.size() == 1 ? flat.front() : ops::concat(tape, flat);
  Var hidden = ops::dense(tape, features, tape.param("fc1.weight"), tape.param("fc1.bias"), Activation::relu);

  ForwardResult<T> out;
  out.raw_value = ops::dense(tape, hidden, tape.param("fc2_h.weight"), tape.param("fc2_h.bias"), Activation::identity);
  if (config_.head_mode == HeadMode::dual)
    out.policy = ops::dense(tape, hidden, tape.param("fc2_a.weight"), tape.param("fc2_a.bias"), Activation::softmax);
  return out;
}

template <typename T>
Prediction<T> Model<T>::predict(const Tensor<T>& encoded, const std::vector<GridPos>& agents) const {
  Tape<T> tape(&params_, false);
  auto result = forward(tape, tape.constant(encoded), agents);
  Prediction<T> p;
  p.value = tape.value(result.raw_value)[0];
  if (result.policy) p.policy = tape.value(*result.policy).storage();
  return p;
}

template <typename T>
Model<T> build_model(const ModelConfig& config, std::uint64_t seed) {
  const auto shapes = config.parameter_shapes();
  std::mt19937_64 rng(seed);
  ParamStore<T> params;
  for (const auto& [name, shape] : shapes) {
    const bool is_bias = name.ends_with(".bias");
    if (is_bias) {
      params.add(name, Tensor<T>(shape));
      continue;
    }
    const std::size_t fan_in = shape.rank() == 4 ? 9 * shape[2] : shape[0];
    params.add(name, he_uniform<T>(shape, fan_in, rng));
  }
  return Model<T>(config, std::move(params));
}

template class Model<float>;
template class Model<double>;
template Model<float> build_model<float>(const ModelConfig&, std::uint64_t);
template Model<double> build_model<double>(const ModelConfig&, std::uint64_t);

}  // namespace coat
