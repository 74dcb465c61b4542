#include "coat/nn/layers.hpp"

#include <cmath>

namespace coat::nn {

void AttentionConfig::validate() const {
  if (heads == 0) throw ConfigError("attention needs at least one head");
  if (channels % heads != 0)
    throw ConfigError("attention: " + std::to_string(channels) + " channels not divisible by " +
                      std::to_string(heads) + " heads");
  if ((channels / heads) % 3 != 0)
    throw ConfigError("attention: per-head width " + std::to_string(channels / heads) + " not divisible by 3");
}

void PosEncConfig::validate() const {
  if (depth == 0 || depth % 4 != 0)
    throw ConfigError("positional encoding depth must be a positive multiple of 4, got " + std::to_string(depth));
}

double positional_frequency(std::size_t p, std::size_t depth) {
  return 1.0 / std::pow(10000.0, 4.0 * static_cast<double>(p) / static_cast<double>(depth));
}

template <typename T>
Tensor<T> positional_encoding(std::size_t height, std::size_t width, const PosEncConfig& config) {
  config.validate();
  const std::size_t d = config.depth;
  const std::size_t half = d / 2;
  Tensor<T> e = Tensor<T>::grid(height, width, d);
  for (std::size_t p = 0; p < d / 4; ++p) {
    const double theta = positional_frequency(p, d);
    for (std::size_t u = 0; u < height; ++u)
      for (std::size_t v = 0; v < width; ++v) {
        const double ru = theta * static_cast<double>(u);
        const double cv = theta * static_cast<double>(v);
        e.at(u, v, 2 * p) = static_cast<T>(std::sin(ru));
        e.at(u, v, 2 * p + 1) = static_cast<T>(std::cos(ru));
        e.at(u, v, half + 2 * p) = static_cast<T>(std::sin(cv));
        e.at(u, v, half + 2 * p + 1) = static_cast<T>(std::cos(cv));
      }
  }
  return e;
}

template <typename T>
Var self_attention(Tape<T>& tape, Var z, const AttentionConfig& config) {
  config.validate();
  const auto& zv = tape.value(z);
  if (zv.rank() != 3 || zv.channels() != config.channels)
    throw ConfigError("self_attention: configured for " + std::to_string(config.channels) + " channels, got " +
                      zv.shape().str());
  return ops::self_attention(tape, z, config.heads);
}

void CoAtBlockSpec::validate() const {
  if (in_channels == 0 || filters == 0) throw ConfigError("CoAt block " + prefix + ": channel counts must be positive");
  AttentionConfig{attention_heads, filters}.validate();
  posenc.validate();
}

template <typename T>
Var conv_relu_skip(Tape<T>& tape, Var z, const std::string& kernel_name, const std::string& bias_name) {
  Var c = ops::relu(tape, ops::conv2d_same(tape, z, tape.param(kernel_name), tape.param(bias_name)));
  if (tape.value(c).channels() == tape.value(z).channels()) c = ops::add(tape, z, c);
  return c;
}

template <typename T>
Var coat_block(Tape<T>& tape, Var z, const CoAtBlockSpec& spec) {
  spec.validate();
  const auto& zv = tape.value(z);
  if (zv.rank() != 3 || zv.channels() != spec.in_channels)
    throw ConfigError("CoAt block " + spec.prefix + ": expects " + std::to_string(spec.in_channels) +
                      " input channels, got " + zv.shape().str());
  const std::size_t h = zv.height(), w = zv.width();
  Var c = conv_relu_skip(tape, z, spec.kernel_name(), spec.bias_name());
  Var a = self_attention(tape, c, AttentionConfig{spec.attention_heads, spec.filters});
  Var e = tape.constant(positional_encoding<T>(h, w, spec.posenc));
  return ops::concat_channels(tape, a, e);
}

#define COAT_INSTANTIATE_LAYERS(T)                                                                   \
  template Tensor<T> positional_encoding<T>(std::size_t, std::size_t, const PosEncConfig&);         \
  template Var self_attention<T>(Tape<T>&, Var, const AttentionConfig&);                             \
  template Var conv_relu_skip<T>(Tape<T>&, Var, const std::string&, const std::string&);             \
  template Var coat_block<T>(Tape<T>&, Var, const CoAtBlockSpec&);

COAT_INSTANTIATE_LAYERS(float)
COAT_INSTANTIATE_LAYERS(double)

#undef COAT_INSTANTIATE_LAYERS

}  // namespace coat::nn
