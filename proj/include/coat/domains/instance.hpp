#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "coat/domains/floortile.hpp"
#include "coat/domains/maze.hpp"
#include "coat/domains/sokoban.hpp"

namespace coat {

inline constexpr int kInstanceFormatVersion = 1;

using Instance = std::variant<SokobanInstance, MazeInstance, FloorTileInstance>;

DomainTag domain_of(const Instance& instance);
const InstanceMeta& meta_of(const Instance& instance);
InstanceMeta& meta_of(Instance& instance);

/// Calls `fn.template operator()<D>(typed_instance)`-style visitors with the
/// domain type recovered: fn(D{}, inst).
template <typename Fn>
decltype(auto) visit_instance(const Instance& instance, Fn&& fn) {
  return std::visit(
      [&](const auto& inst) -> decltype(auto) {
        using Inst = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<Inst, SokobanInstance>)
          return fn(Sokoban{}, inst);
        else if constexpr (std::is_same_v<Inst, MazeInstance>)
          return fn(Maze{}, inst);
        else
          return fn(FloorTile{}, inst);
      },
      instance);
}

/// State channels followed by goal channels; agents taken from `state`.
template <typename D>
EncodedPair encode_pair(const typename D::World& world, const typename D::State& state) {
  const auto& g = world.geometry;
  EncodedPair out{Tensor<float>::grid(static_cast<std::size_t>(g.height), static_cast<std::size_t>(g.width),
                                      2 * D::state_channels),
                  D::agents(world, state)};
  D::encode(world, state, out.tensor, 0);
  D::encode(world, D::goal_state(world), out.tensor, D::state_channels);
  return out;
}

template <typename D>
std::size_t input_channels() {
  return 2 * D::state_channels;
}

std::size_t input_channels(DomainTag tag);
std::size_t action_count(DomainTag tag);
std::size_t agent_count(DomainTag tag);

/// Validates the instance; throws ContractError.
void validate_instance(const Instance& instance);

/// `quarter_turns` clockwise quarter turns of every positional field.
template <typename D>
DomainInstance<D> rotate_instance(const DomainInstance<D>& inst, int quarter_turns) {
  if (quarter_turns < 0 || quarter_turns > 3) throw ContractError("rotate: quarter turns must be in 0..3");
  return {D::rotate(inst.world, quarter_turns), D::rotate(inst.world, inst.initial, quarter_turns), inst.meta};
}
Instance rotate_instance(const Instance& instance, int quarter_turns);

/// Text form: header "domain=<tag> h=<n> w=<n> format=1 [key=value ...]"
/// followed by one row per line.
std::string serialize_instance(const Instance& instance);
/// Throws ParseError with 1-based line/column.
Instance parse_instance(std::string_view text);

}  // namespace coat
