#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coat/domains/grid.hpp"
#include "coat/tensor/tensor.hpp"

namespace coat {

enum class DomainTag { sokoban, maze, floortile };

std::string to_string(DomainTag tag);
DomainTag parse_domain_tag(const std::string& text);

template <typename State>
struct Successor {
  int action;
  State state;
};

/// Generator provenance carried in the instance header.
struct InstanceMeta {
  std::map<std::string, std::string> fields;
  bool operator==(const InstanceMeta&) const = default;
};

template <typename D>
struct DomainInstance {
  typename D::World world;
  typename D::State initial;
  InstanceMeta meta;
  bool operator==(const DomainInstance&) const = default;
};

/// Encoded (state, goal) pair: h x w x (2 * state channels) plus the agent
/// cells used by the model's flatten.
struct EncodedPair {
  Tensor<float> tensor;
  std::vector<GridPos> agents;
};

}  // namespace coat
