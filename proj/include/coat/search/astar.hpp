#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "coat/domains/instance.hpp"
#include "coat/error.hpp"

namespace coat {

struct SearchBudget {
  std::size_t max_expansions = 200'000;
  double max_seconds = 60.0;

  static SearchBudget desk() { return {}; }
  /// The ten-minute-per-instance setting.
  static SearchBudget ten_minutes() { return {std::numeric_limits<std::size_t>::max(), 600.0}; }
  static SearchBudget expansions(std::size_t n) { return {n, std::numeric_limits<double>::infinity()}; }

  void validate() const {
    if (max_expansions == std::numeric_limits<std::size_t>::max() && !std::isfinite(max_seconds))
      throw ConfigError("search budget needs a finite expansion or time bound");
    if (!(max_seconds > 0.0)) throw ConfigError("search time bound must be positive");
  }
};

enum class SearchOutcome { solved, exhausted, timed_out };

inline std::string to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::solved:
      return "solved";
    case SearchOutcome::exhausted:
      return "exhausted";
    case SearchOutcome::timed_out:
      return "timed_out";
  }
  return "?";
}

template <typename D>
struct Plan {
  std::vector<int> actions;
  std::vector<typename D::State> states;  // s_0 .. s_l

  std::size_t length() const { return actions.size(); }
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  std::size_t max_open = 0;
  double elapsed_ms = 0.0;
  /// Open list ran dry (as opposed to hitting the expansion bound).
  bool space_exhausted = false;
};

template <typename D>
struct SearchResult {
  SearchOutcome outcome = SearchOutcome::exhausted;
  std::optional<Plan<D>> plan;
  SearchStats stats;

  bool solved() const { return outcome == SearchOutcome::solved; }
};

template <typename D>
struct StateHash {
  std::size_t operator()(const typename D::State& s) const { return hash_value(s); }
};

/// Best-first search on f = g + h with unit costs. Ties go to lower h, then to
/// the earlier insertion. Closed states are never reopened. h is evaluated once
/// per distinct state; an infinite h prunes the state.
template <typename D, typename Heuristic>
SearchResult<D> astar(const typename D::World& world, const typename D::State& initial, Heuristic&& heuristic,
                      const SearchBudget& budget) {
  using State = typename D::State;
  using Clock = std::chrono::steady_clock;
  budget.validate();
  const auto start = Clock::now();

  struct Node {
    State state;
    std::uint32_t g;
    double h;
    std::uint32_t parent;
    int action;
    bool closed;
  };
  struct Entry {
    double f;
    double h;
    std::uint64_t seq;
    std::uint32_t node;
    std::uint32_t g;
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.h != b.h) return a.h > b.h;
      return a.seq > b.seq;
    }
  };
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  SearchResult<D> result;
  auto& stats = result.stats;
  std::deque<Node> nodes;
  std::unordered_map<State, std::uint32_t, StateHash<D>> index;
  std::priority_queue<Entry, std::vector<Entry>, Worse> open;
  std::uint64_t seq = 0;

  auto finish = [&](SearchOutcome outcome) {
    result.outcome = outcome;
    stats.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return result;
  };

  const double h0 = static_cast<double>(heuristic(initial));
  if (!std::isfinite(h0)) {
    stats.space_exhausted = true;
    return finish(SearchOutcome::exhausted);
  }
  nodes.push_back({initial, 0, h0, kNone, -1, false});
  index.emplace(initial, 0);
  open.push({h0, h0, seq++, 0, 0});
  stats.generated = 1;
  stats.max_open = 1;

  std::vector<Successor<State>> succ;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    Node& node = nodes[top.node];
    if (node.closed || top.g != node.g) continue;  // stale entry

    if (D::is_goal(world, node.state)) {
      Plan<D> plan;
      for (std::uint32_t id = top.node; id != kNone; id = nodes[id].parent) {
        plan.states.push_back(nodes[id].state);
        if (nodes[id].parent != kNone) plan.actions.push_back(nodes[id].action);
      }
      std::reverse(plan.states.begin(), plan.states.end());
      std::reverse(plan.actions.begin(), plan.actions.end());
      result.plan = std::move(plan);
      return finish(SearchOutcome::solved);
    }
    if (stats.expanded >= budget.max_expansions) return finish(SearchOutcome::exhausted);
    if ((stats.expanded & 63) == 0 && std::isfinite(budget.max_seconds) &&
        std::chrono::duration<double>(Clock::now() - start).count() > budget.max_seconds)
      return finish(SearchOutcome::timed_out);

    node.closed = true;
    ++stats.expanded;
    const std::uint32_t g = node.g + 1;
    const std::uint32_t parent = top.node;
    D::successors(world, node.state, succ);
    for (auto& [action, state] : succ) {
      auto it = index.find(state);
      std::uint32_t id;
      if (it == index.end()) {
        const double h = static_cast<double>(heuristic(state));
        ++stats.generated;
        id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({state, g, h, parent, action, false});
        index.emplace(std::move(state), id);
        if (!std::isfinite(h)) {
          nodes[id].closed = true;
          continue;
        }
      } else {
        id = it->second;
        Node& known = nodes[id];
        if (known.closed || g >= known.g) continue;
        known.g = g;
        known.parent = parent;
        known.action = action;
        ++stats.generated;
      }
      open.push({g + nodes[id].h, nodes[id].h, seq++, id, g});
      stats.max_open = std::max(stats.max_open, open.size());
    }
  }
  stats.space_exhausted = true;
  return finish(SearchOutcome::exhausted);
}

template <typename D>
SearchResult<D> astar_blind(const typename D::World& world, const typename D::State& initial,
                            const SearchBudget& budget) {
  return astar<D>(world, initial, [](const typename D::State&) { return 0.0; }, budget);
}

struct PlanCheck {
  bool valid = false;
  /// First inapplicable action, or the plan length when only the goal test fails.
  std::size_t failure_index = 0;
};

template <typename D>
PlanCheck validate_plan(const typename D::World& world, const typename D::State& initial,
                        const std::vector<int>& actions) {
  typename D::State s = initial;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto next = D::apply(world, s, actions[i]);
    if (!next) return {false, i};
    s = std::move(*next);
  }
  if (!D::is_goal(world, s)) return {false, actions.size()};
  return {true, actions.size()};
}

/// Re-derives the state sequence; throws ContractError on an invalid plan.
template <typename D>
Plan<D> replay_plan(const typename D::World& world, const typename D::State& initial, const std::vector<int>& actions) {
  const auto check = validate_plan<D>(world, initial, actions);
  if (!check.valid) throw ContractError("plan invalid at index " + std::to_string(check.failure_index));
  Plan<D> plan{actions, {initial}};
  for (int a : actions) plan.states.push_back(*D::apply(world, plan.states.back(), a));
  return plan;
}

}  // namespace coat
