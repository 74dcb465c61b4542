#include "coat/search/oracle.hpp"

#include <queue>

namespace coat {

namespace {

constexpr int kUnreached = -1;

// Multi-source BFS over floor cells from `sources`.
std::vector<int> grid_bfs(const GridGeometry& g, const std::vector<std::uint8_t>& walls, const std::vector<int>& sources) {
  std::vector<int> dist(static_cast<std::size_t>(g.cells()), kUnreached);
  std::queue<int> frontier;
  for (int s : sources) {
    dist[s] = 0;
    frontier.push(s);
  }
  while (!frontier.empty()) {
    const int cell = frontier.front();
    frontier.pop();
    for (Dir d : kDirs) {
      const auto next = g.step(cell, d);
      if (!next || walls[*next] || dist[*next] != kUnreached) continue;
      dist[*next] = dist[cell] + 1;
      frontier.push(*next);
    }
  }
  return dist;
}

}  // namespace

SokobanOracleHeuristic::SokobanOracleHeuristic(const SokobanWorld& world)
    : target_distance_(grid_bfs(world.geometry, world.walls, world.targets)) {}

double SokobanOracleHeuristic::operator()(const SokobanState& state) const {
  double total = 0.0;
  for (int b : state.boxes) {
    if (target_distance_[b] == kUnreached) return kInfiniteCost;
    total += target_distance_[b];
  }
  return total;
}

MazeOracleHeuristic::MazeOracleHeuristic(const MazeWorld& world) {
  const auto& g = world.geometry;
  // Reverse edges of the move relation, teleports included.
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(g.cells()));
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (world.wall(cell)) continue;
    for (int a = 0; a < static_cast<int>(Maze::action_count); ++a)
      if (const auto next = Maze::apply(world, MazeState{cell}, a)) preds[next->agent].push_back(cell);
  }
  distance_.assign(static_cast<std::size_t>(g.cells()), kUnreached);
  std::queue<int> frontier;
  distance_[world.goal] = 0;
  frontier.push(world.goal);
  while (!frontier.empty()) {
    const int cell = frontier.front();
    frontier.pop();
    for (int p : preds[cell]) {
      if (distance_[p] != kUnreached) continue;
      distance_[p] = distance_[cell] + 1;
      frontier.push(p);
    }
  }
}

double MazeOracleHeuristic::operator()(const MazeState& state) const {
  const int d = distance_[state.agent];
  return d == kUnreached ? kInfiniteCost : d;
}

double FloorTileOracleHeuristic::operator()(const FloorTileState& state) const {
  const auto& world = *world_;
  const auto& g = world.geometry;
  const auto& goal = world.goal;
  double missing = 0.0;
  int free_rest = 0;  // uncoloured cells outside the goal: where the agents must end up
  for (std::size_t i = 0; i < goal.size(); ++i) {
    if (goal[i] == TileColor::none) {
      free_rest += state.colors[i] == TileColor::none;
      continue;
    }
    if (state.colors[i] == goal[i]) continue;
    if (state.colors[i] != TileColor::none) return kInfiniteCost;
    missing += 1.0;
  }
  if (free_rest < 2) return kInfiniteCost;
  if (missing == 0.0) return 0.0;

  // Cells each agent can still stand on (the other agent may move away, so
  // it is not an obstacle here).
  auto reach = [&](int from) {
    std::vector<std::uint8_t> seen(goal.size(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const int cell = stack.back();
      stack.pop_back();
      for (Dir d : kDirs) {
        const auto n = g.step(cell, d);
        if (n && !seen[*n] && state.colors[*n] == TileColor::none) {
          seen[*n] = 1;
          stack.push_back(*n);
        }
      }
    }
    return seen;
  };
  const auto r1 = reach(state.agent1);
  const auto r2 = reach(state.agent2);
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (goal[cell] == TileColor::none || state.colors[cell] != TileColor::none) continue;
    const auto& r = goal[cell] == TileColor::white ? r1 : r2;
    bool paintable = false;
    for (Dir d : kDirs) {
      const auto n = g.step(cell, d);
      if (n && r[*n]) paintable = true;
    }
    if (!paintable) return kInfiniteCost;
  }
  return missing;
}

}  // namespace coat
