#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "coat/domains/common.hpp"

namespace coat {

inline constexpr std::size_t kMaxTeleportPairs = 4;

struct MazeWorld {
  GridGeometry geometry;
  std::vector<std::uint8_t> walls;
  int goal = -1;
  // Pad pairs; pair i is drawn with digit i+1 and owns teleport channel i.
  // A pair whose first cell is -1 is unused; pairs list the lower cell first.
  std::array<std::pair<int, int>, kMaxTeleportPairs> teleports{
      {{-1, -1}, {-1, -1}, {-1, -1}, {-1, -1}}};

  bool wall(int cell) const { return walls[cell] != 0; }
  /// Paired pad of `cell`, or -1.
  int partner(int cell) const;
  /// Teleport pair index of `cell`, or -1.
  int pad_pair(int cell) const;
  std::size_t pair_count() const;
  bool operator==(const MazeWorld&) const = default;
};

struct MazeState {
  int agent = -1;
  bool operator==(const MazeState&) const = default;
};

/// Maze with teleports: 4 unit-cost moves. Stepping onto a pad moves the
/// agent to the paired pad as part of the same action.
struct Maze {
  using World = MazeWorld;
  using State = MazeState;
  static constexpr DomainTag tag = DomainTag::maze;
  static constexpr std::size_t action_count = 4;
  // agent, wall, floor, goal, teleport pairs 1-4
  static constexpr std::size_t state_channels = 8;
  static constexpr std::size_t agent_count = 1;

  static std::string_view action_name(int action);
  static std::optional<int> parse_action(std::string_view name);

  static std::optional<State> apply(const World& world, const State& state, int action);
  static void successors(const World& world, const State& state, std::vector<Successor<State>>& out);
  static bool is_goal(const World& world, const State& state);

  static State goal_state(const World& world);
  static void encode(const World& world, const State& state, Tensor<float>& out, std::size_t channel_offset);
  static std::vector<GridPos> agents(const World& world, const State& state);
  static void validate(const World& world, const State& state);

  static World rotate(const World& world, int quarter_turns);
  static State rotate(const World& world, const State& state, int quarter_turns);
};

std::size_t hash_value(const MazeState& s);

using MazeInstance = DomainInstance<Maze>;

}  // namespace coat
