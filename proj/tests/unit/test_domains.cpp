#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "coat/domains/generate.hpp"
#include "coat/search/oracle.hpp"
#include "support/rule_oracles.hpp"

using namespace coat;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(COAT_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Inst>
Inst parse_as(const std::string& text) {
  return std::get<Inst>(parse_instance(text));
}

const char* kSokoban4 =
    "domain=sokoban h=4 w=4 format=1\n"
    "@   \n"
    " $  \n"
    "  . \n"
    "#   \n";

const char* kMaze4 =
    "domain=maze h=4 w=4 format=1\n"
    "S.#.\n"
    ".1..\n"
    "#..1\n"
    "..#G\n";

const char* kTile3 =
    "domain=floortile h=3 w=3 format=1\n"
    "A..\n"
    "...\n"
    "..B\n"
    "---goal---\n"
    ".bw\n"
    "bwb\n"
    "wb.\n";

// Inverse of the one-hot encoders (reads state channels only).
SokobanState decode_sokoban(const Tensor<float>& t, const GridGeometry& g) {
  SokobanState s;
  for (int cell = 0; cell < g.cells(); ++cell) {
    const auto r = static_cast<std::size_t>(g.row(cell)), c = static_cast<std::size_t>(g.col(cell));
    if (t.at(r, c, 2) == 1.0f) s.boxes.push_back(cell);
    if (t.at(r, c, 3) == 1.0f) s.agent = cell;
  }
  return s;
}

MazeState decode_maze(const Tensor<float>& t, const GridGeometry& g) {
  MazeState s;
  for (int cell = 0; cell < g.cells(); ++cell)
    if (t.at(static_cast<std::size_t>(g.row(cell)), static_cast<std::size_t>(g.col(cell)), 0) == 1.0f) s.agent = cell;
  return s;
}

FloorTileState decode_floortile(const Tensor<float>& t, const GridGeometry& g) {
  FloorTileState s;
  s.colors.assign(static_cast<std::size_t>(g.cells()), TileColor::none);
  for (int cell = 0; cell < g.cells(); ++cell) {
    const auto r = static_cast<std::size_t>(g.row(cell)), c = static_cast<std::size_t>(g.col(cell));
    if (t.at(r, c, 0) == 1.0f) s.agent1 = cell;
    if (t.at(r, c, 1) == 1.0f) s.agent2 = cell;
    if (t.at(r, c, 2) == 1.0f) s.colors[cell] = TileColor::black;
    if (t.at(r, c, 3) == 1.0f) s.colors[cell] = TileColor::white;
  }
  return s;
}

GeneratorParams small(DomainTag tag, int h, int w) {
  auto p = GeneratorParams::for_domain(tag, h, w);
  p.boxes = 1;
  p.teleport_pairs = 1;
  return p;
}

}  // namespace

TEST_CASE("transition oracle: sokoban 4x4 with one box, every reachable state") {
  const auto inst = parse_as<SokobanInstance>(kSokoban4);
  const auto rep = oracle::sokoban_transitions(inst);
  CHECK(rep.states > 50);
  CHECK_MESSAGE(rep.mismatches == 0, rep.first_mismatch);
}

TEST_CASE("transition oracle: 4x4 maze with one teleport pair") {
  const auto inst = parse_as<MazeInstance>(kMaze4);
  const auto rep = oracle::maze_transitions(inst);
  CHECK(rep.states >= 10);
  CHECK_MESSAGE(rep.mismatches == 0, rep.first_mismatch);
}

TEST_CASE("transition oracle: floor-tile 3x3") {
  const auto inst = parse_as<FloorTileInstance>(kTile3);
  const auto rep = oracle::floortile_transitions(inst);
  CHECK(rep.states > 1000);
  CHECK_MESSAGE(rep.mismatches == 0, rep.first_mismatch);
}

TEST_CASE("transition oracle on generated small instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(oracle::sokoban_transitions(generate_sokoban(small(DomainTag::sokoban, 5, 5), seed)).mismatches == 0);
    CHECK(oracle::maze_transitions(generate_maze(small(DomainTag::maze, 7, 7), seed)).mismatches == 0);
    auto p = small(DomainTag::maze, 7, 7);
    p.teleport_pairs = 4;
    CHECK(oracle::maze_transitions(generate_maze(p, seed)).mismatches == 0);
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed)
    CHECK(oracle::floortile_transitions(generate_floortile(small(DomainTag::floortile, 3, 3), seed)).mismatches == 0);
}

TEST_CASE("sokoban: no push into a wall") {
  const auto inst = parse_as<SokobanInstance>(
      "domain=sokoban h=3 w=4 format=1\n"
      "    \n"
      "@$# \n"
      "  . \n");
  CHECK_FALSE(Sokoban::apply(inst.world, inst.initial, *Sokoban::parse_action("push-right")));
  CHECK_FALSE(Sokoban::apply(inst.world, inst.initial, *Sokoban::parse_action("right")));
  CHECK(Sokoban::apply(inst.world, inst.initial, *Sokoban::parse_action("up")));
}

TEST_CASE("sokoban: push moves box and agent one cell") {
  const auto inst = parse_as<SokobanInstance>(
      "domain=sokoban h=1 w=4 format=1\n"
      "@$ .\n");
  const auto s = Sokoban::apply(inst.world, inst.initial, *Sokoban::parse_action("push-right"));
  REQUIRE(s);
  CHECK(s->agent == 1);
  CHECK(s->boxes == std::vector<int>{2});
}

TEST_CASE("maze: stepping onto a pad lands on its partner") {
  const auto inst = parse_as<MazeInstance>(
      "domain=maze h=2 w=5 format=1\n"
      "S1..G\n"
      "###.1\n");
  const auto s = Maze::apply(inst.world, inst.initial, static_cast<int>(Dir::right));
  REQUIRE(s);
  CHECK(s->agent == inst.world.geometry.index(1, 4));
}

TEST_CASE("goal tests") {
  auto sok = parse_as<SokobanInstance>("domain=sokoban h=1 w=4 format=1\n@ * \n");
  CHECK(Sokoban::is_goal(sok.world, sok.initial));

  auto maze = parse_as<MazeInstance>("domain=maze h=1 w=3 format=1\n.SG\n");
  CHECK_FALSE(Maze::is_goal(maze.world, maze.initial));
  CHECK(Maze::is_goal(maze.world, *Maze::apply(maze.world, maze.initial, static_cast<int>(Dir::right))));

  auto tile = parse_as<FloorTileInstance>(kTile3);
  auto done = tile.initial;
  done.colors = tile.world.goal;
  CHECK(FloorTile::is_goal(tile.world, done));
  // One cell of the checkerboard wrong.
  done.colors[1] = TileColor::white;
  CHECK_FALSE(FloorTile::is_goal(tile.world, done));
  CHECK_FALSE(FloorTile::is_goal(tile.world, tile.initial));
}

TEST_CASE("floor-tile: agents only step on uncoloured free cells and paint their own colour") {
  auto tile = parse_as<FloorTileInstance>(
      "domain=floortile h=1 w=4 format=1\n"
      "Ab.B\n"
      "---goal---\n"
      "....\n");
  const auto a1_right = *FloorTile::parse_action("a1-right");
  const auto a1_paint_right = *FloorTile::parse_action("a1-paint-right");
  const auto a2_left = *FloorTile::parse_action("a2-left");
  const auto a2_paint_left = *FloorTile::parse_action("a2-paint-left");
  CHECK_FALSE(FloorTile::apply(tile.world, tile.initial, a1_right));
  CHECK_FALSE(FloorTile::apply(tile.world, tile.initial, a1_paint_right));
  const auto moved = FloorTile::apply(tile.world, tile.initial, a2_left);
  REQUIRE(moved);
  CHECK(moved->agent2 == 2);
  const auto painted = FloorTile::apply(tile.world, tile.initial, a2_paint_left);
  REQUIRE(painted);
  CHECK(painted->colors[2] == TileColor::black);
  CHECK(painted->agent2 == 3);
  // A cell held by the other agent cannot be entered.
  tile.initial.colors[1] = TileColor::none;
  tile.initial.agent2 = 1;
  CHECK_FALSE(FloorTile::apply(tile.world, tile.initial, a1_right));
}

TEST_CASE("action names round-trip") {
  for (int a = 0; a < static_cast<int>(Sokoban::action_count); ++a) CHECK(Sokoban::parse_action(Sokoban::action_name(a)) == a);
  for (int a = 0; a < static_cast<int>(Maze::action_count); ++a) CHECK(Maze::parse_action(Maze::action_name(a)) == a);
  for (int a = 0; a < static_cast<int>(FloorTile::action_count); ++a)
    CHECK(FloorTile::parse_action(FloorTile::action_name(a)) == a);
  CHECK_FALSE(Maze::parse_action("north"));
}

TEST_CASE("input widths") {
  CHECK(input_channels(DomainTag::sokoban) == 10);
  CHECK(input_channels(DomainTag::maze) == 16);
  CHECK(input_channels(DomainTag::floortile) == 8);
}

TEST_CASE("one-hot discipline") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sok = generate_sokoban(GeneratorParams::for_domain(DomainTag::sokoban, 7, 7), seed);
    const auto e = encode_pair<Sokoban>(sok.world, sok.initial);
    const auto& g = sok.world.geometry;
    for (std::size_t r = 0; r < static_cast<std::size_t>(g.height); ++r)
      for (std::size_t c = 0; c < static_cast<std::size_t>(g.width); ++c) {
        CHECK(e.tensor.at(r, c, 0) + e.tensor.at(r, c, 1) + e.tensor.at(r, c, 2) + e.tensor.at(r, c, 3) == 1.0f);
        // Goal half: agent absent, so wall/empty/box alone partition the cell.
        CHECK(e.tensor.at(r, c, 5) + e.tensor.at(r, c, 6) + e.tensor.at(r, c, 7) == 1.0f);
        CHECK(e.tensor.at(r, c, 8) == 0.0f);
        CHECK(e.tensor.at(r, c, 4) == e.tensor.at(r, c, 9));
      }

    auto mp = GeneratorParams::for_domain(DomainTag::maze, 9, 9);
    const auto maze = generate_maze(mp, seed);
    const auto m = encode_pair<Maze>(maze.world, maze.initial);
    float agents = 0.0f, pads = 0.0f;
    for (std::size_t r = 0; r < 9; ++r)
      for (std::size_t c = 0; c < 9; ++c) {
        CHECK(m.tensor.at(r, c, 1) + m.tensor.at(r, c, 2) == 1.0f);
        agents += m.tensor.at(r, c, 0);
        for (std::size_t k = 4; k < 8; ++k) pads += m.tensor.at(r, c, k);
      }
    CHECK(agents == 1.0f);
    CHECK(pads == 8.0f);

    const auto tile = generate_floortile(GeneratorParams::for_domain(DomainTag::floortile, 3, 3), seed);
    const auto t = encode_pair<FloorTile>(tile.world, tile.initial);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(t.tensor.at(r, c, 2) + t.tensor.at(r, c, 3) <= 1.0f);
        CHECK(t.tensor.at(r, c, 6) + t.tensor.at(r, c, 7) <= 1.0f);
      }
    CHECK(t.agents.size() == 2);
  }
}

TEST_CASE("encode then decode recovers the state along whole plans") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sok = generate_sokoban(GeneratorParams::for_domain(DomainTag::sokoban, 6, 6), seed);
    for (const auto& s : oracle_solve<Sokoban>(sok.world, sok.initial).states)
      CHECK(decode_sokoban(encode_pair<Sokoban>(sok.world, s).tensor, sok.world.geometry) == s);

    const auto maze = generate_maze(GeneratorParams::for_domain(DomainTag::maze, 9, 9), seed);
    for (const auto& s : oracle_solve<Maze>(maze.world, maze.initial).states) {
      const auto e = encode_pair<Maze>(maze.world, s);
      CHECK(decode_maze(e.tensor, maze.world.geometry) == s);
      CHECK(e.agents.front() == maze.world.geometry.pos(s.agent));
    }

    const auto tile = generate_floortile(GeneratorParams::for_domain(DomainTag::floortile, 3, 3), seed);
    for (const auto& s : oracle_solve<FloorTile>(tile.world, tile.initial).states)
      CHECK(decode_floortile(encode_pair<FloorTile>(tile.world, s).tensor, tile.world.geometry) == s);
  }
}

TEST_CASE("generation is deterministic per seed") {
  for (auto tag : {DomainTag::sokoban, DomainTag::maze, DomainTag::floortile}) {
    auto p = GeneratorParams::for_domain(tag, tag == DomainTag::floortile ? 3 : 7, tag == DomainTag::floortile ? 3 : 7);
    CHECK(generate_instance(p, 42) == generate_instance(p, 42));
    CHECK(serialize_instance(generate_instance(p, 42)) == serialize_instance(generate_instance(p, 42)));
  }
  auto p = GeneratorParams::for_domain(DomainTag::maze, 11, 11);
  CHECK_FALSE(generate_instance(p, 1) == generate_instance(p, 2));
}

TEST_CASE("generated sokoban 10x10 with 3 boxes is certified solvable") {
  auto p = GeneratorParams::for_domain(DomainTag::sokoban, 10, 10);
  p.boxes = 3;
  const auto inst = generate_sokoban(p, 42);
  CHECK(inst.initial.boxes.size() == 3);
  const auto plan = oracle_solve<Sokoban>(inst.world, inst.initial);
  CHECK(validate_plan<Sokoban>(inst.world, inst.initial, plan.actions).valid);
  CHECK(std::to_string(plan.length()) == inst.meta.fields.at("oracle_length"));
  CHECK_FALSE(Sokoban::is_goal(inst.world, inst.initial));
}

TEST_CASE("generated maze 15x15: four pairs, agent top-left, goal bottom-right") {
  const auto inst = generate_maze(GeneratorParams::for_domain(DomainTag::maze, 15, 15), 42);
  CHECK(inst.world.pair_count() == 4);
  CHECK(inst.initial.agent == 0);
  const auto& g = inst.world.geometry;
  CHECK(g.row(inst.world.goal) >= 12);
  CHECK(g.col(inst.world.goal) >= 12);
  CHECK_NOTHROW(Maze::validate(inst.world, inst.initial));
}

TEST_CASE("generator rejects infeasible parameters") {
  auto p = GeneratorParams::for_domain(DomainTag::sokoban, 4, 4);
  p.boxes = 4;
  CHECK_THROWS_AS(generate_instance(p, 0), ConfigError);
  p = GeneratorParams::for_domain(DomainTag::maze, 3, 3);
  p.teleport_pairs = 4;
  CHECK_THROWS_AS(generate_instance(p, 0), GenerationError);
  p.teleport_pairs = 5;
  CHECK_THROWS_AS(generate_instance(p, 0), ConfigError);
}

TEST_CASE("rotation is a group action") {
  std::vector<Instance> insts{generate_instance(GeneratorParams::for_domain(DomainTag::sokoban, 6, 8), 3),
                              generate_instance(GeneratorParams::for_domain(DomainTag::maze, 7, 10), 3),
                              generate_instance(GeneratorParams::for_domain(DomainTag::floortile, 3, 4), 3)};
  for (const auto& inst : insts) {
    auto four = inst;
    for (int i = 0; i < 4; ++i) four = rotate_instance(four, 1);
    CHECK(four == inst);
    CHECK(rotate_instance(rotate_instance(inst, 1), 1) == rotate_instance(inst, 2));
    CHECK(rotate_instance(rotate_instance(inst, 1), 3) == inst);
    CHECK(rotate_instance(inst, 0) == inst);
    for (int q = 0; q < 4; ++q) CHECK_NOTHROW(validate_instance(rotate_instance(inst, q)));
  }
  CHECK_THROWS_AS(rotate_instance(insts[0], 4), ContractError);
}

TEST_CASE("rotation turns the picture clockwise") {
  const auto inst = parse_instance(
      "domain=maze h=2 w=3 format=1\n"
      "S.#\n"
      "..G\n");
  CHECK(serialize_instance(rotate_instance(inst, 1)) ==
        "domain=maze h=3 w=2 format=1\n"
        ".S\n"
        "..\n"
        "G#\n");
}

TEST_CASE("rotation preserves optimal plan length") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto maze = generate_maze(GeneratorParams::for_domain(DomainTag::maze, 9, 7), seed);
    const auto sok = generate_sokoban(GeneratorParams::for_domain(DomainTag::sokoban, 6, 7), seed);
    for (int q = 1; q < 4; ++q) {
      const auto rm = rotate_instance(maze, q);
      CHECK(oracle_solve<Maze>(rm.world, rm.initial).length() == oracle_solve<Maze>(maze.world, maze.initial).length());
      const auto rs = rotate_instance(sok, q);
      CHECK(oracle_solve<Sokoban>(rs.world, rs.initial).length() ==
            oracle_solve<Sokoban>(sok.world, sok.initial).length());
    }
  }
}

TEST_CASE("maze moves can always be undone") {
  // A plain step has a direct inverse. A step through a pad is undone by the
  // opposite step when the cell behind the partner pad is open, and in any
  // case the source stays reachable from the target.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_maze(GeneratorParams::for_domain(DomainTag::maze, 9, 9), seed);
    const auto& w = inst.world;
    for (int cell = 0; cell < w.geometry.cells(); ++cell) {
      if (w.wall(cell)) continue;
      for (Dir d : kDirs) {
        const auto next = Maze::apply(w, MazeState{cell}, static_cast<int>(d));
        if (!next) continue;
        const auto stepped = w.geometry.step(cell, d);
        if (w.partner(*stepped) < 0 && w.partner(cell) < 0) {
          const auto back = Maze::apply(w, *next, static_cast<int>(opposite(d)));
          REQUIRE(back);
          CHECK(back->agent == cell);
        }
        MazeWorld reversed = w;
        reversed.goal = cell;
        CHECK_NOTHROW(oracle_solve<Maze>(reversed, *next));
      }
    }
  }
}

TEST_CASE("instance text round-trips") {
  std::vector<Instance> insts;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    insts.push_back(generate_instance(GeneratorParams::for_domain(DomainTag::sokoban, 7, 9), seed));
    insts.push_back(generate_instance(GeneratorParams::for_domain(DomainTag::maze, 11, 8), seed));
    insts.push_back(generate_instance(GeneratorParams::for_domain(DomainTag::floortile, 3, 4), seed));
  }
  for (const auto& inst : insts) {
    const auto text = serialize_instance(inst);
    CHECK(parse_instance(text) == inst);
    CHECK(serialize_instance(parse_instance(text)) == text);
  }
}

TEST_CASE("sokoban composite glyphs") {
  const auto inst = parse_as<SokobanInstance>(read_fixture("sokoban_glyphs.txt"));
  const auto& g = inst.world.geometry;
  CHECK(inst.initial.agent == g.index(1, 1));
  CHECK(inst.world.target(g.index(1, 1)));  // '+'
  CHECK(inst.initial.box(g.index(2, 2)));   // '*'
  CHECK(inst.world.target(g.index(2, 2)));
  CHECK(inst.initial.boxes == std::vector<int>{g.index(1, 2), g.index(2, 2), g.index(3, 3)});
  CHECK(inst.world.targets == std::vector<int>{g.index(1, 1), g.index(2, 2), g.index(3, 4)});
  CHECK(inst.meta.fields.at("name") == "glyphs");
  CHECK(serialize_instance(inst) == read_fixture("sokoban_glyphs.txt"));
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_instance(read_fixture("maze_unbalanced.txt"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 3);
    CHECK(std::string(e.what()).find("'3'") != std::string::npos);
  }
  auto expect = [](const std::string& text, int line, int column) {
    try {
      parse_instance(text);
      FAIL("expected a parse error for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line == line);
      CHECK(e.column == column);
    }
  };
  expect("domain=maze h=1 w=3 format=1\nSxG\n", 2, 2);
  expect("domain=maze h=1 w=3 format=2\nS.G\n", 1, 28);
  expect("domain=maze h=1 w=3\nS.G\n", 1, 1);
  expect("domain=chess h=1 w=3 format=1\nS.G\n", 1, 8);
  expect("domain=maze h=2 w=3 format=1\nS.G\n", 3, 1);
  expect("domain=maze h=1 w=3 format=1\nS.G.\n", 2, 4);
  expect("domain=maze h=1 w=3 format=1\nS.G\nextra\n", 3, 1);
  expect("domain=sokoban h=1 w=4 format=1\n@$$.\n", 2, 1);
  expect("domain=floortile h=1 w=3 format=1\nA.B\n", 3, 1);
  expect("", 1, 1);
}
