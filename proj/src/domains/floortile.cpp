#include "coat/domains/floortile.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace coat {

namespace {

enum Channel : std::size_t { kAgent1 = 0, kAgent2 = 1, kBlack = 2, kWhite = 3 };

const std::array<std::string, 16>& action_names() {
  static const std::array<std::string, 16> names = [] {
    std::array<std::string, 16> n;
    for (int agent = 0; agent < 2; ++agent)
      for (int paint = 0; paint < 2; ++paint)
        for (Dir d : kDirs)
          n[agent * 8 + paint * 4 + static_cast<int>(d)] =
              std::string(agent == 0 ? "a1-" : "a2-") + (paint ? "paint-" : "") + std::string(dir_name(d));
    return n;
  }();
  return names;
}

}  // namespace

std::string_view FloorTile::action_name(int action) { return action_names().at(action); }

std::optional<int> FloorTile::parse_action(std::string_view name) {
  const auto& names = action_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<FloorTileState> FloorTile::apply(const World& world, const State& state, int action) {
  if (action < 0 || action >= static_cast<int>(action_count)) return std::nullopt;
  const bool second = action >= 8;
  const bool paint = (action % 8) >= 4;
  const Dir dir = kDirs[action % 4];
  const int self = second ? state.agent2 : state.agent1;
  const int other = second ? state.agent1 : state.agent2;
  const auto next = world.geometry.step(self, dir);
  if (!next || *next == other || state.colors[*next] != TileColor::none) return std::nullopt;
  State s = state;
  if (paint)
    s.colors[*next] = second ? TileColor::black : TileColor::white;
  else
    (second ? s.agent2 : s.agent1) = *next;
  return s;
}

void FloorTile::successors(const World& world, const State& state, std::vector<Successor<State>>& out) {
  out.clear();
  for (int a = 0; a < static_cast<int>(action_count); ++a)
    if (auto s = apply(world, state, a)) out.push_back({a, std::move(*s)});
}

bool FloorTile::is_goal(const World& world, const State& state) {
  for (std::size_t i = 0; i < world.goal.size(); ++i)
    if (world.goal[i] != TileColor::none && state.colors[i] != world.goal[i]) return false;
  return true;
}

FloorTileState FloorTile::goal_state(const World& world) { return State{world.goal, -1, -1}; }

void FloorTile::encode(const World& world, const State& state, Tensor<float>& out, std::size_t off) {
  const auto& g = world.geometry;
  for (int cell = 0; cell < g.cells(); ++cell) {
    const auto r = static_cast<std::size_t>(g.row(cell));
    const auto c = static_cast<std::size_t>(g.col(cell));
    if (cell == state.agent1) out.at(r, c, off + kAgent1) = 1.0f;
    if (cell == state.agent2) out.at(r, c, off + kAgent2) = 1.0f;
    if (state.colors[cell] == TileColor::black) out.at(r, c, off + kBlack) = 1.0f;
    if (state.colors[cell] == TileColor::white) out.at(r, c, off + kWhite) = 1.0f;
  }
}

std::vector<GridPos> FloorTile::agents(const World& world, const State& state) {
  return {world.geometry.pos(state.agent1), world.geometry.pos(state.agent2)};
}

void FloorTile::validate(const World& world, const State& state) {
  const auto& g = world.geometry;
  if (g.height <= 0 || g.width <= 0) throw ContractError("floortile: empty grid");
  const auto cells = static_cast<std::size_t>(g.cells());
  if (world.goal.size() != cells || state.colors.size() != cells) throw ContractError("floortile: layer size");
  for (int a : {state.agent1, state.agent2})
    if (a < 0 || a >= g.cells()) throw ContractError("floortile: agent outside the grid");
  if (state.agent1 == state.agent2) throw ContractError("floortile: agents must stand on distinct cells");
  if (state.colors[state.agent1] != TileColor::none || state.colors[state.agent2] != TileColor::none)
    throw ContractError("floortile: agents must stand on uncoloured tiles");
}

FloorTileWorld FloorTile::rotate(const World& world, int q) {
  World out;
  out.geometry = world.geometry.rotated(q);
  out.goal.assign(world.goal.size(), TileColor::none);
  for (int cell = 0; cell < world.geometry.cells(); ++cell)
    out.goal[world.geometry.rotate_cell(cell, q)] = world.goal[cell];
  return out;
}

FloorTileState FloorTile::rotate(const World& world, const State& state, int q) {
  State out;
  out.colors.assign(state.colors.size(), TileColor::none);
  for (int cell = 0; cell < world.geometry.cells(); ++cell)
    out.colors[world.geometry.rotate_cell(cell, q)] = state.colors[cell];
  out.agent1 = state.agent1 < 0 ? -1 : world.geometry.rotate_cell(state.agent1, q);
  out.agent2 = state.agent2 < 0 ? -1 : world.geometry.rotate_cell(state.agent2, q);
  return out;
}

std::size_t hash_value(const FloorTileState& s) {
  std::size_t h = hash_combine(static_cast<std::size_t>(s.agent1), static_cast<std::size_t>(s.agent2));
  // Two bits per cell, packed 32 cells to a word.
  std::size_t word = 0;
  for (std::size_t i = 0; i < s.colors.size(); ++i) {
    word = (word << 2) | static_cast<std::size_t>(s.colors[i]);
    if (i % 32 == 31) {
      h = hash_combine(h, word);
      word = 0;
    }
  }
  return hash_combine(h, word);
}

}  // namespace coat
