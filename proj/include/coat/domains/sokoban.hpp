#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "coat/domains/common.hpp"

namespace coat {

struct SokobanWorld {
  GridGeometry geometry;
  std::vector<std::uint8_t> walls;  // per cell, 1 = wall
  std::vector<int> targets;         // sorted cell indices

  bool wall(int cell) const { return walls[cell] != 0; }
  bool target(int cell) const;
  bool operator==(const SokobanWorld&) const = default;
};

struct SokobanState {
  int agent = -1;          // -1 only in goal encodings, where the agent is unspecified
  std::vector<int> boxes;  // sorted cell indices

  bool box(int cell) const;
  bool operator==(const SokobanState&) const = default;
};

/// Sokoban: 4 moves and 4 pushes. Actions 0..3 move up/down/left/right onto
/// a free cell; 4..7 push the adjacent box one cell further in that direction.
struct Sokoban {
  using World = SokobanWorld;
  using State = SokobanState;
  static constexpr DomainTag tag = DomainTag::sokoban;
  static constexpr std::size_t action_count = 8;
  // wall, empty, box, agent, box-target
  static constexpr std::size_t state_channels = 5;
  static constexpr std::size_t agent_count = 1;

  static std::string_view action_name(int action);
  static std::optional<int> parse_action(std::string_view name);

  /// a(s), or nullopt when the action is inapplicable.
  static std::optional<State> apply(const World& world, const State& state, int action);
  static void successors(const World& world, const State& state, std::vector<Successor<State>>& out);
  static bool is_goal(const World& world, const State& state);

  /// Boxes on the targets, agent unspecified.
  static State goal_state(const World& world);
  static void encode(const World& world, const State& state, Tensor<float>& out, std::size_t channel_offset);
  static std::vector<GridPos> agents(const World& world, const State& state);

  /// Throws ContractError when the pair violates the domain invariants.
  static void validate(const World& world, const State& state);

  static World rotate(const World& world, int quarter_turns);
  static State rotate(const World& world, const State& state, int quarter_turns);
};

std::size_t hash_value(const SokobanState& s);

using SokobanInstance = DomainInstance<Sokoban>;

}  // namespace coat
