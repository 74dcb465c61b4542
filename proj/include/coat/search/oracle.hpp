#pragma once

#include <limits>
#include <vector>

#include "coat/search/astar.hpp"

namespace coat {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// Sum over boxes of the wall-respecting distance to the nearest target,
/// ignoring other boxes and the agent.
class SokobanOracleHeuristic {
 public:
  explicit SokobanOracleHeuristic(const SokobanWorld& world);
  double operator()(const SokobanState& state) const;

 private:
  std::vector<int> target_distance_;
};

/// Exact distance to the goal in the teleport-augmented grid graph,
/// precomputed by backward breadth-first search.
class MazeOracleHeuristic {
 public:
  explicit MazeOracleHeuristic(const MazeWorld& world);
  double operator()(const MazeState& state) const;
  const std::vector<int>& distances() const { return distance_; }

 private:
  std::vector<int> distance_;
};

/// Number of goal cells not yet carrying their goal colour; a goal cell
/// painted the wrong colour can never be fixed, so that state is pruned.
class FloorTileOracleHeuristic {
 public:
  explicit FloorTileOracleHeuristic(const FloorTileWorld& world) : world_(&world) {}
  double operator()(const FloorTileState& state) const;

 private:
  const FloorTileWorld* world_;
};

template <typename D>
struct OracleHeuristicFor;
template <>
struct OracleHeuristicFor<Sokoban> {
  using type = SokobanOracleHeuristic;
};
template <>
struct OracleHeuristicFor<Maze> {
  using type = MazeOracleHeuristic;
};
template <>
struct OracleHeuristicFor<FloorTile> {
  using type = FloorTileOracleHeuristic;
};

template <typename D>
using OracleHeuristic = typename OracleHeuristicFor<D>::type;

/// Oracle budget: generous, but bounded so oversized requests fail loudly.
inline SearchBudget oracle_budget() { return {3'000'000, 300.0}; }

template <typename D>
SearchResult<D> oracle_search(const typename D::World& world, const typename D::State& initial,
                              const SearchBudget& budget = oracle_budget()) {
  const OracleHeuristic<D> h(world);
  return astar<D>(world, initial, h, budget);
}

/// Optimal plan; throws OracleError when the budget runs out or the
/// instance has no solution.
template <typename D>
Plan<D> oracle_solve(const typename D::World& world, const typename D::State& initial,
                     const SearchBudget& budget = oracle_budget()) {
  auto result = oracle_search<D>(world, initial, budget);
  if (result.solved()) return std::move(*result.plan);
  if (result.stats.space_exhausted) throw OracleError("instance has no solution");
  throw OracleError("oracle gave up after " + std::to_string(result.stats.expanded) +
                    " expansions (" + to_string(result.outcome) + "); use a smaller size or fewer boxes");
}

}  // namespace coat
