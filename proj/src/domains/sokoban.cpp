#include "coat/domains/sokoban.hpp"

#include <algorithm>
#include <array>

namespace coat {

namespace {

constexpr std::array<std::string_view, 8> kActionNames{"up",      "down",      "left",      "right",
                                                       "push-up", "push-down", "push-left", "push-right"};

enum Channel : std::size_t { kWall = 0, kEmpty = 1, kBox = 2, kAgent = 3, kTarget = 4 };

}  // namespace

bool SokobanWorld::target(int cell) const { return std::binary_search(targets.begin(), targets.end(), cell); }

bool SokobanState::box(int cell) const { return std::binary_search(boxes.begin(), boxes.end(), cell); }

std::string_view Sokoban::action_name(int action) { return kActionNames.at(action); }

std::optional<int> Sokoban::parse_action(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i)
    if (kActionNames[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<SokobanState> Sokoban::apply(const World& world, const State& state, int action) {
  if (action < 0 || action >= static_cast<int>(action_count)) return std::nullopt;
  const Dir dir = kDirs[action % 4];
  const bool push = action >= 4;
  const auto next = world.geometry.step(state.agent, dir);
  if (!next || world.wall(*next)) return std::nullopt;
  const bool box_ahead = state.box(*next);
  if (!push) {
    if (box_ahead) return std::nullopt;
    State s = state;
    s.agent = *next;
    return s;
  }
  if (!box_ahead) return std::nullopt;
  const auto beyond = world.geometry.step(*next, dir);
  if (!beyond || world.wall(*beyond) || state.box(*beyond)) return std::nullopt;
  State s = state;
  s.agent = *next;
  auto it = std::lower_bound(s.boxes.begin(), s.boxes.end(), *next);
  s.boxes.erase(it);
  s.boxes.insert(std::lower_bound(s.boxes.begin(), s.boxes.end(), *beyond), *beyond);
  return s;
}

void Sokoban::successors(const World& world, const State& state, std::vector<Successor<State>>& out) {
  out.clear();
  for (int a = 0; a < static_cast<int>(action_count); ++a)
    if (auto s = apply(world, state, a)) out.push_back({a, std::move(*s)});
}

bool Sokoban::is_goal(const World& world, const State& state) {
  return std::all_of(world.targets.begin(), world.targets.end(), [&](int t) { return state.box(t); });
}

SokobanState Sokoban::goal_state(const World& world) { return State{-1, world.targets}; }

void Sokoban::encode(const World& world, const State& state, Tensor<float>& out, std::size_t off) {
  const auto& g = world.geometry;
  for (int cell = 0; cell < g.cells(); ++cell) {
    const auto r = static_cast<std::size_t>(g.row(cell));
    const auto c = static_cast<std::size_t>(g.col(cell));
    std::size_t ch = kEmpty;
    if (world.wall(cell))
      ch = kWall;
    else if (state.box(cell))
      ch = kBox;
    else if (cell == state.agent)
      ch = kAgent;
    out.at(r, c, off + ch) = 1.0f;
    if (world.target(cell)) out.at(r, c, off + kTarget) = 1.0f;
  }
}

std::vector<GridPos> Sokoban::agents(const World& world, const State& state) {
  return {world.geometry.pos(state.agent)};
}

void Sokoban::validate(const World& world, const State& state) {
  const auto& g = world.geometry;
  if (g.height <= 0 || g.width <= 0) throw ContractError("sokoban: empty grid");
  if (world.walls.size() != static_cast<std::size_t>(g.cells())) throw ContractError("sokoban: wall mask size");
  auto on_floor = [&](int cell) { return cell >= 0 && cell < g.cells() && !world.wall(cell); };
  if (!on_floor(state.agent)) throw ContractError("sokoban: agent must stand on a floor cell");
  if (!std::is_sorted(state.boxes.begin(), state.boxes.end()) ||
      std::adjacent_find(state.boxes.begin(), state.boxes.end()) != state.boxes.end())
    throw ContractError("sokoban: boxes must be distinct and sorted");
  if (!std::is_sorted(world.targets.begin(), world.targets.end()) ||
      std::adjacent_find(world.targets.begin(), world.targets.end()) != world.targets.end())
    throw ContractError("sokoban: targets must be distinct and sorted");
  for (int b : state.boxes)
    if (!on_floor(b)) throw ContractError("sokoban: box on a wall or outside the grid");
  for (int t : world.targets)
    if (!on_floor(t)) throw ContractError("sokoban: target on a wall or outside the grid");
  if (state.boxes.size() != world.targets.size()) throw ContractError("sokoban: box and target counts differ");
  if (state.box(state.agent)) throw ContractError("sokoban: agent stands on a box");
}

SokobanWorld Sokoban::rotate(const World& world, int q) {
  World out;
  out.geometry = world.geometry.rotated(q);
  out.walls.assign(world.walls.size(), 0);
  for (int cell = 0; cell < world.geometry.cells(); ++cell)
    out.walls[world.geometry.rotate_cell(cell, q)] = world.walls[cell];
  for (int t : world.targets) out.targets.push_back(world.geometry.rotate_cell(t, q));
  std::sort(out.targets.begin(), out.targets.end());
  return out;
}

SokobanState Sokoban::rotate(const World& world, const State& state, int q) {
  State out;
  out.agent = state.agent < 0 ? -1 : world.geometry.rotate_cell(state.agent, q);
  for (int b : state.boxes) out.boxes.push_back(world.geometry.rotate_cell(b, q));
  std::sort(out.boxes.begin(), out.boxes.end());
  return out;
}

std::size_t hash_value(const SokobanState& s) {
  std::size_t h = static_cast<std::size_t>(s.agent);
  for (int b : s.boxes) h = hash_combine(h, static_cast<std::size_t>(b));
  return h;
}

}  // namespace coat
