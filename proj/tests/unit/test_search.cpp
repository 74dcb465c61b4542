#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "coat/domains/generate.hpp"
#include "coat/search/oracle.hpp"
#include "support/rule_oracles.hpp"

using namespace coat;

namespace {

template <typename Inst>
Inst parse_as(const std::string& text) {
  return std::get<Inst>(parse_instance(text));
}

GeneratorParams params(DomainTag tag, int h, int w, int boxes = 2, int pairs = 2) {
  auto p = GeneratorParams::for_domain(tag, h, w);
  p.boxes = boxes;
  p.teleport_pairs = pairs;
  return p;
}

const SearchBudget kGenerous{2'000'000, 120.0};

}  // namespace

TEST_CASE("3x3 open maze, corner to corner, blind search finds length 4") {
  const auto inst = parse_as<MazeInstance>(
      "domain=maze h=3 w=3 format=1\n"
      "S..\n"
      "...\n"
      "..G\n");
  const auto res = astar_blind<Maze>(inst.world, inst.initial, kGenerous);
  REQUIRE(res.solved());
  CHECK(res.plan->length() == 4);
  CHECK(res.plan->states.size() == 5);
}

TEST_CASE("a teleport shortcut beats the long corridor") {
  const auto inst = parse_as<MazeInstance>(
      "domain=maze h=3 w=9 format=1\n"
      "S1.......\n"
      "########.\n"
      "G1.......\n");
  const auto res = astar_blind<Maze>(inst.world, inst.initial, kGenerous);
  REQUIRE(res.solved());
  CHECK(res.plan->length() == 2);
  CHECK(static_cast<long>(res.plan->length()) == oracle::bfs_length<Maze>(inst.world, inst.initial));
  // Without the pads the corridor costs 18.
  auto no_pads = inst;
  no_pads.world.teleports[0] = {-1, -1};
  CHECK(oracle::bfs_length<Maze>(no_pads.world, no_pads.initial) == 18);
  CHECK(astar_blind<Maze>(no_pads.world, no_pads.initial, kGenerous).plan->length() == 18);
}

TEST_CASE("oracle on an instance already at its goal returns the empty plan") {
  const auto sok = parse_as<SokobanInstance>("domain=sokoban h=1 w=3 format=1\n@* \n");
  CHECK(oracle_solve<Sokoban>(sok.world, sok.initial).length() == 0);
  FloorTileInstance tile = parse_as<FloorTileInstance>(
      "domain=floortile h=1 w=3 format=1\n"
      "AwB\n"
      "---goal---\n"
      ".w.\n");
  CHECK(oracle_solve<FloorTile>(tile.world, tile.initial).length() == 0);
}

TEST_CASE("sokoban fixture: two pushes along a clear row") {
  const auto inst = parse_as<SokobanInstance>(
      "domain=sokoban h=3 w=7 format=1\n"
      "#######\n"
      "#@$ . #\n"
      "#######\n");
  const auto plan = oracle_solve<Sokoban>(inst.world, inst.initial);
  CHECK(plan.length() == 2);
  CHECK(plan.actions == std::vector<int>{*Sokoban::parse_action("push-right"), *Sokoban::parse_action("push-right")});
  CHECK(static_cast<long>(plan.length()) == oracle::bfs_length<Sokoban>(inst.world, inst.initial));
  CHECK(validate_plan<Sokoban>(inst.world, inst.initial, plan.actions).valid);

  // Agent starting two cells away needs one approach move first.
  const auto far = parse_as<SokobanInstance>(
      "domain=sokoban h=3 w=8 format=1\n"
      "########\n"
      "#@ $ . #\n"
      "########\n");
  CHECK(oracle_solve<Sokoban>(far.world, far.initial).length() == 3);
}

TEST_CASE("oracle lengths equal breadth-first lengths on random small instances") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto sok = generate_sokoban(params(DomainTag::sokoban, 6, 6, seed % 2 + 1), seed);
    CHECK(static_cast<long>(oracle_solve<Sokoban>(sok.world, sok.initial).length()) ==
          oracle::bfs_length<Sokoban>(sok.world, sok.initial));
    const auto maze = generate_maze(params(DomainTag::maze, 9, 9, 0, static_cast<int>(seed % 5)), seed);
    CHECK(static_cast<long>(oracle_solve<Maze>(maze.world, maze.initial).length()) ==
          oracle::bfs_length<Maze>(maze.world, maze.initial));
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tile = generate_floortile(params(DomainTag::floortile, 3, 3), seed);
    CHECK(static_cast<long>(oracle_solve<FloorTile>(tile.world, tile.initial).length()) ==
          oracle::bfs_length<FloorTile>(tile.world, tile.initial));
  }
}

template <typename D>
void check_heuristic_on_reachable(const DomainInstance<D>& inst) {
  // Admissible (h <= true distance) and consistent (h(s) <= 1 + h(s')) on
  // every reachable state. True distances come from one backward BFS over
  // the enumerated state graph.
  using State = typename D::State;
  const OracleHeuristic<D> h(inst.world);
  std::vector<State> states{inst.initial};
  std::unordered_map<State, std::size_t, StateHash<D>> id{{inst.initial, 0}};
  std::vector<std::vector<std::size_t>> preds(1);
  std::vector<Successor<State>> succ;
  for (std::size_t i = 0; i < states.size(); ++i) {
    D::successors(inst.world, states[i], succ);
    for (auto& e : succ) {
      auto [it, fresh] = id.emplace(e.state, states.size());
      if (fresh) {
        states.push_back(e.state);
        preds.emplace_back();
      }
      preds[it->second].push_back(i);
    }
  }
  std::vector<long> dist(states.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (D::is_goal(inst.world, states[i])) {
      dist[i] = 0;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    for (auto p : preds[i])
      if (dist[p] < 0) {
        dist[p] = dist[i] + 1;
        queue.push_back(p);
      }
  }
  std::size_t violations = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double hs = h(states[i]);
    if (dist[i] >= 0 && hs > static_cast<double>(dist[i])) ++violations;
    if (!std::isfinite(hs)) continue;
    D::successors(inst.world, states[i], succ);
    for (const auto& e : succ)
      if (hs > 1.0 + h(e.state)) ++violations;
  }
  CHECK(states.size() > 1);
  CHECK(violations == 0);
}

TEST_CASE("oracle heuristics are admissible and consistent") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    check_heuristic_on_reachable(generate_sokoban(params(DomainTag::sokoban, 6, 6, 2), seed));
    check_heuristic_on_reachable(generate_maze(params(DomainTag::maze, 9, 9, 0, 4), seed));
    check_heuristic_on_reachable(generate_floortile(params(DomainTag::floortile, 3, 3), seed));
  }
}

TEST_CASE("maze oracle heuristic is the exact distance") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto maze = generate_maze(params(DomainTag::maze, 11, 11, 0, 4), seed);
    const MazeOracleHeuristic h(maze.world);
    for (int cell = 0; cell < maze.world.geometry.cells(); ++cell) {
      if (maze.world.wall(cell)) continue;
      CHECK(h(MazeState{cell}) == static_cast<double>(oracle::bfs_length<Maze>(maze.world, MazeState{cell})));
    }
  }
}

TEST_CASE("admissible heuristic and blind search agree on length; heuristic prunes") {
  std::size_t fewer_or_equal = 0, total = 0;
  auto run = [&](const auto& inst, auto d) {
    using D = decltype(d);
    const auto blind = astar_blind<D>(inst.world, inst.initial, kGenerous);
    const auto informed = oracle_search<D>(inst.world, inst.initial, kGenerous);
    REQUIRE(blind.solved());
    REQUIRE(informed.solved());
    CHECK(blind.plan->length() == informed.plan->length());
    CHECK(validate_plan<D>(inst.world, inst.initial, blind.plan->actions).valid);
    CHECK(validate_plan<D>(inst.world, inst.initial, informed.plan->actions).valid);
    ++total;
    fewer_or_equal += informed.stats.expanded <= blind.stats.expanded;
  };
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    run(generate_sokoban(params(DomainTag::sokoban, 7, 7, seed % 2 + 1), seed), Sokoban{});
    run(generate_maze(params(DomainTag::maze, 10, 10, 0, 4), seed), Maze{});
    run(generate_floortile(params(DomainTag::floortile, 3, 3), seed), FloorTile{});
  }
  CHECK(fewer_or_equal == total);
}

TEST_CASE("validate_plan reports the first bad index") {
  const auto maze = generate_maze(params(DomainTag::maze, 9, 9, 0, 2), 5);
  const auto plan = oracle_solve<Maze>(maze.world, maze.initial);
  REQUIRE(plan.length() > 2);
  CHECK(validate_plan<Maze>(maze.world, maze.initial, plan.actions).valid);

  auto truncated = plan.actions;
  truncated.pop_back();
  const auto t = validate_plan<Maze>(maze.world, maze.initial, truncated);
  CHECK_FALSE(t.valid);
  CHECK(t.failure_index == truncated.size());

  // Agent starts in the top-left corner, so "up" is never applicable there.
  auto broken = plan.actions;
  broken[0] = static_cast<int>(Dir::up);
  const auto b = validate_plan<Maze>(maze.world, maze.initial, broken);
  CHECK_FALSE(b.valid);
  CHECK(b.failure_index == 0);

  CHECK_THROWS_AS(replay_plan<Maze>(maze.world, maze.initial, broken), ContractError);
  CHECK(replay_plan<Maze>(maze.world, maze.initial, plan.actions).states == plan.states);
}

TEST_CASE("budget outcomes") {
  const auto maze = generate_maze(params(DomainTag::maze, 15, 15, 0, 4), 2);
  const auto one = astar_blind<Maze>(maze.world, maze.initial, SearchBudget::expansions(1));
  CHECK(one.outcome == SearchOutcome::exhausted);
  CHECK_FALSE(one.plan);
  CHECK_FALSE(one.stats.space_exhausted);
  CHECK(one.stats.expanded == 1);

  const auto tile = generate_floortile(params(DomainTag::floortile, 3, 4), 1);
  const auto slow = astar_blind<FloorTile>(tile.world, tile.initial, SearchBudget{100'000'000, 1e-4});
  CHECK(slow.outcome == SearchOutcome::timed_out);

  // Walled-off goal: the open list runs dry.
  const auto sealed = parse_as<MazeInstance>("domain=maze h=1 w=3 format=1\nS#G\n");
  const auto none = astar_blind<Maze>(sealed.world, sealed.initial, kGenerous);
  CHECK(none.outcome == SearchOutcome::exhausted);
  CHECK(none.stats.space_exhausted);
  CHECK_THROWS_AS(oracle_solve<Maze>(sealed.world, sealed.initial), OracleError);

  CHECK_THROWS_AS(SearchBudget({std::numeric_limits<std::size_t>::max(), INFINITY}).validate(), ConfigError);
  CHECK_THROWS_AS(SearchBudget({10, 0.0}).validate(), ConfigError);
}

TEST_CASE("search is a pure function of instance, heuristic and budget") {
  const auto sok = generate_sokoban(params(DomainTag::sokoban, 8, 8, 2), 9);
  const auto a = astar_blind<Sokoban>(sok.world, sok.initial, kGenerous);
  const auto b = astar_blind<Sokoban>(sok.world, sok.initial, kGenerous);
  REQUIRE(a.solved());
  CHECK(a.plan->actions == b.plan->actions);
  CHECK(a.stats.expanded == b.stats.expanded);
  CHECK(a.stats.generated == b.stats.generated);
}

TEST_CASE("heuristic is evaluated once per distinct state") {
  const auto maze = generate_maze(params(DomainTag::maze, 11, 11, 0, 4), 4);
  std::size_t calls = 0;
  std::unordered_set<int> distinct;
  const auto res = astar<Maze>(
      maze.world, maze.initial,
      [&](const MazeState& s) {
        ++calls;
        distinct.insert(s.agent);
        return 0.0;
      },
      kGenerous);
  REQUIRE(res.solved());
  CHECK(calls == distinct.size());
}

TEST_CASE("h steers the route; blind ties go to insertion order") {
  // Two routes of equal length; h steers the choice among equal f.
  const auto inst = parse_as<MazeInstance>(
      "domain=maze h=2 w=2 format=1\n"
      "S.\n"
      ".G\n");
  const auto& g = inst.world.geometry;
  const int right = g.index(0, 1), down = g.index(1, 0);
  auto via = [&](int favoured) {
    return astar<Maze>(
        inst.world, inst.initial,
        [&](const MazeState& s) {
          if (s.agent == favoured) return 0.0;
          return s.agent == inst.world.goal ? 0.0 : 1.0;
        },
        kGenerous);
  };
  CHECK(via(right).plan->states[1].agent == right);
  CHECK(via(down).plan->states[1].agent == down);
  // Blind: first generated successor wins (actions are tried up, down, left, right).
  CHECK(astar_blind<Maze>(inst.world, inst.initial, kGenerous).plan->states[1].agent == down);
}
