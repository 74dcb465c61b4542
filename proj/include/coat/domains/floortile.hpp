#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "coat/domains/common.hpp"

namespace coat {

enum class TileColor : std::uint8_t { none = 0, white = 1, black = 2 };

struct FloorTileWorld {
  GridGeometry geometry;
  // Required colour per cell; none = cell outside the goal subset.
  std::vector<TileColor> goal;
  bool operator==(const FloorTileWorld&) const = default;
};

struct FloorTileState {
  std::vector<TileColor> colors;
  int agent1 = -1;  // paints white; -1 only in goal encodings
  int agent2 = -1;  // paints black
  bool operator==(const FloorTileState&) const = default;
};

/// Floor-Tile with two agents acting in turn. Per agent: 4 moves onto an
/// uncoloured, unoccupied orthogonal cell and 4 paints of an uncoloured,
/// unoccupied orthogonal cell with the agent's fixed colour. Action index =
/// agent * 8 + (paint ? 4 : 0) + direction.
struct FloorTile {
  using World = FloorTileWorld;
  using State = FloorTileState;
  static constexpr DomainTag tag = DomainTag::floortile;
  static constexpr std::size_t action_count = 16;
  // agent1, agent2, black, white
  static constexpr std::size_t state_channels = 4;
  static constexpr std::size_t agent_count = 2;

  static std::string_view action_name(int action);
  static std::optional<int> parse_action(std::string_view name);

  static std::optional<State> apply(const World& world, const State& state, int action);
  static void successors(const World& world, const State& state, std::vector<Successor<State>>& out);
  static bool is_goal(const World& world, const State& state);

  /// Goal colouring, agents unspecified.
  static State goal_state(const World& world);
  static void encode(const World& world, const State& state, Tensor<float>& out, std::size_t channel_offset);
  static std::vector<GridPos> agents(const World& world, const State& state);
  static void validate(const World& world, const State& state);

  static World rotate(const World& world, int quarter_turns);
  static State rotate(const World& world, const State& state, int quarter_turns);
};

std::size_t hash_value(const FloorTileState& s);

using FloorTileInstance = DomainInstance<FloorTile>;

}  // namespace coat
