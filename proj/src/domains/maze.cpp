#include "coat/domains/maze.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace coat {

namespace {

enum Channel : std::size_t { kAgent = 0, kWall = 1, kFloor = 2, kGoal = 3, kTeleport = 4 };

}  // namespace

int MazeWorld::partner(int cell) const {
  for (const auto& [a, b] : teleports) {
    if (a < 0) continue;
    if (cell == a) return b;
    if (cell == b) return a;
  }
  return -1;
}

int MazeWorld::pad_pair(int cell) const {
  for (std::size_t i = 0; i < teleports.size(); ++i)
    if (teleports[i].first >= 0 && (teleports[i].first == cell || teleports[i].second == cell))
      return static_cast<int>(i);
  return -1;
}

std::size_t MazeWorld::pair_count() const {
  return static_cast<std::size_t>(
      std::count_if(teleports.begin(), teleports.end(), [](const auto& p) { return p.first >= 0; }));
}

std::string_view Maze::action_name(int action) { return dir_name(kDirs.at(action)); }

std::optional<int> Maze::parse_action(std::string_view name) {
  for (Dir d : kDirs)
    if (dir_name(d) == name) return static_cast<int>(d);
  return std::nullopt;
}

std::optional<MazeState> Maze::apply(const World& world, const State& state, int action) {
  if (action < 0 || action >= static_cast<int>(action_count)) return std::nullopt;
  const auto next = world.geometry.step(state.agent, kDirs[action]);
  if (!next || world.wall(*next)) return std::nullopt;
  const int other = world.partner(*next);
  return State{other >= 0 ? other : *next};
}

void Maze::successors(const World& world, const State& state, std::vector<Successor<State>>& out) {
  out.clear();
  for (int a = 0; a < static_cast<int>(action_count); ++a)
    if (auto s = apply(world, state, a)) out.push_back({a, *s});
}

bool Maze::is_goal(const World& world, const State& state) { return state.agent == world.goal; }

MazeState Maze::goal_state(const World& world) { return State{world.goal}; }

void Maze::encode(const World& world, const State& state, Tensor<float>& out, std::size_t off) {
  const auto& g = world.geometry;
  for (int cell = 0; cell < g.cells(); ++cell) {
    const auto r = static_cast<std::size_t>(g.row(cell));
    const auto c = static_cast<std::size_t>(g.col(cell));
    out.at(r, c, off + (world.wall(cell) ? kWall : kFloor)) = 1.0f;
    if (cell == state.agent) out.at(r, c, off + kAgent) = 1.0f;
    if (cell == world.goal) out.at(r, c, off + kGoal) = 1.0f;
    if (const int pair = world.pad_pair(cell); pair >= 0) out.at(r, c, off + kTeleport + pair) = 1.0f;
  }
}

std::vector<GridPos> Maze::agents(const World& world, const State& state) { return {world.geometry.pos(state.agent)}; }

void Maze::validate(const World& world, const State& state) {
  const auto& g = world.geometry;
  if (g.height <= 0 || g.width <= 0) throw ContractError("maze: empty grid");
  if (world.walls.size() != static_cast<std::size_t>(g.cells())) throw ContractError("maze: wall mask size");
  auto on_floor = [&](int cell) { return cell >= 0 && cell < g.cells() && !world.wall(cell); };
  if (!on_floor(state.agent)) throw ContractError("maze: agent must stand on a floor cell");
  if (!on_floor(world.goal)) throw ContractError("maze: goal must be a floor cell");
  std::set<int> pads;
  for (const auto& [a, b] : world.teleports) {
    if (a < 0 && b < 0) continue;
    if (!on_floor(a) || !on_floor(b)) throw ContractError("maze: teleport pads must be floor cells");
    if (a > b) throw ContractError("maze: a teleport pair lists its lower cell first");
    if (!pads.insert(a).second || !pads.insert(b).second) throw ContractError("maze: teleport pads must be distinct");
  }
  if (pads.contains(world.goal)) throw ContractError("maze: the goal cannot be a teleport pad");
}

MazeWorld Maze::rotate(const World& world, int q) {
  World out;
  out.geometry = world.geometry.rotated(q);
  out.walls.assign(world.walls.size(), 0);
  for (int cell = 0; cell < world.geometry.cells(); ++cell)
    out.walls[world.geometry.rotate_cell(cell, q)] = world.walls[cell];
  out.goal = world.geometry.rotate_cell(world.goal, q);
  for (std::size_t i = 0; i < world.teleports.size(); ++i) {
    const auto [a, b] = world.teleports[i];
    if (a >= 0) out.teleports[i] = std::minmax(world.geometry.rotate_cell(a, q), world.geometry.rotate_cell(b, q));
  }
  return out;
}

MazeState Maze::rotate(const World& world, const State& state, int q) {
  return State{state.agent < 0 ? -1 : world.geometry.rotate_cell(state.agent, q)};
}

std::size_t hash_value(const MazeState& s) { return std::hash<int>{}(s.agent); }

}  // namespace coat
