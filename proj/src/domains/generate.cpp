#include "coat/domains/generate.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "coat/error.hpp"
#include "coat/search/oracle.hpp"

namespace coat {

void GeneratorParams::validate() const {
  if (height < 2 || width < 2) throw ConfigError("generator: grid must be at least 2x2");
  if (max_attempts < 1) throw ConfigError("generator: max_attempts must be positive");
  switch (domain) {
    case DomainTag::sokoban:
      if (height < 4 || width < 4) throw ConfigError("generator: sokoban needs at least 4x4 (border walls)");
      if (boxes < 1) throw ConfigError("generator: sokoban needs at least one box");
      if (boxes + 1 > (height - 2) * (width - 2)) throw ConfigError("generator: too many boxes for the room");
      if (pull_steps < 1) throw ConfigError("generator: pull_steps must be positive");
      if (wall_density < 0.0 || wall_density > 0.5) throw ConfigError("generator: wall_density must be in [0, 0.5]");
      break;
    case DomainTag::maze:
      if (teleport_pairs < 0 || teleport_pairs > static_cast<int>(kMaxTeleportPairs))
        throw ConfigError("generator: teleport_pairs must be in 0..4");
      if (height < 3 || width < 3) throw ConfigError("generator: maze needs at least 3x3");
      break;
    case DomainTag::floortile:
      break;
  }
}

GeneratorParams GeneratorParams::for_domain(DomainTag tag, int height, int width) {
  GeneratorParams p;
  p.domain = tag;
  p.height = height;
  p.width = width;
  return p;
}

namespace {

template <typename D>
std::size_t certify(const typename D::World& world, const typename D::State& initial) {
  return oracle_solve<D>(world, initial).length();
}

bool connected(const GridGeometry& g, const std::vector<std::uint8_t>& walls) {
  int first = -1, floor = 0;
  for (int c = 0; c < g.cells(); ++c)
    if (!walls[c]) {
      ++floor;
      if (first < 0) first = c;
    }
  if (first < 0) return false;
  std::vector<std::uint8_t> seen(walls.size(), 0);
  std::queue<int> q;
  q.push(first);
  seen[first] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int cell = q.front();
    q.pop();
    for (Dir d : kDirs) {
      const auto n = g.step(cell, d);
      if (n && !walls[*n] && !seen[*n]) {
        seen[*n] = 1;
        ++reached;
        q.push(*n);
      }
    }
  }
  return reached == floor;
}

// ------------------------------------------------------------------ sokoban

std::optional<SokobanInstance> try_sokoban(const GeneratorParams& p, std::mt19937_64& rng) {
  SokobanInstance inst;
  auto& world = inst.world;
  const GridGeometry g{p.height, p.width};
  world.geometry = g;
  world.walls.assign(static_cast<std::size_t>(g.cells()), 1);
  std::vector<int> interior;
  for (int r = 1; r + 1 < g.height; ++r)
    for (int c = 1; c + 1 < g.width; ++c) {
      world.walls[g.index(r, c)] = 0;
      interior.push_back(g.index(r, c));
    }
  // Sprinkle interior walls that keep the room connected.
  const auto extra = static_cast<std::size_t>(p.wall_density * static_cast<double>(interior.size()));
  shuffle_in_place(interior, rng);
  std::size_t placed = 0;
  for (int cell : interior) {
    if (placed == extra) break;
    world.walls[cell] = 1;
    if (connected(g, world.walls))
      ++placed;
    else
      world.walls[cell] = 0;
  }
  std::vector<int> floor;
  for (int cell = 0; cell < g.cells(); ++cell)
    if (!world.walls[cell]) floor.push_back(cell);
  if (static_cast<int>(floor.size()) < p.boxes + 1) return std::nullopt;
  shuffle_in_place(floor, rng);
  world.targets.assign(floor.begin(), floor.begin() + p.boxes);
  std::sort(world.targets.begin(), world.targets.end());

  // Reverse play from the solved layout: the agent walks, and may drag the
  // box behind it along. Each pull undoes a push, so the start we keep can
  // always be pushed back to the targets.
  SokobanState s{floor[static_cast<std::size_t>(p.boxes)], world.targets};
  SokobanState best = s;
  double best_score = 0.0;
  const SokobanOracleHeuristic displacement(world);
  for (int step = 0; step < p.pull_steps; ++step) {
    const Dir d = kDirs[draw_index(rng, 4)];
    const auto next = g.step(s.agent, d);
    if (!next || world.wall(*next) || s.box(*next)) continue;
    const auto behind = g.step(s.agent, opposite(d));
    const bool pull = behind && s.box(*behind) && draw_index(rng, 4) != 0;
    if (pull) {
      auto it = std::lower_bound(s.boxes.begin(), s.boxes.end(), *behind);
      s.boxes.erase(it);
      s.boxes.insert(std::lower_bound(s.boxes.begin(), s.boxes.end(), s.agent), s.agent);
    }
    s.agent = *next;
    if (const double sc = displacement(s); sc > best_score) {
      best = s;
      best_score = sc;
    }
  }
  if (best_score == 0.0) return std::nullopt;
  inst.initial = best;
  return inst;
}

// --------------------------------------------------------------------- maze

MazeInstance make_maze(const GeneratorParams& p, std::mt19937_64& rng) {
  MazeInstance inst;
  auto& world = inst.world;
  const GridGeometry g{p.height, p.width};
  world.geometry = g;
  world.walls.assign(static_cast<std::size_t>(g.cells()), 1);

  // Perfect maze by depth-first carving over the even-coordinate lattice.
  std::vector<int> stack{0};
  world.walls[0] = 0;
  while (!stack.empty()) {
    const int cell = stack.back();
    std::vector<Dir> options;
    for (Dir d : kDirs) {
      const auto mid = g.step(cell, d);
      if (!mid) continue;
      const auto next = g.step(*mid, d);
      if (next && world.walls[*next]) options.push_back(d);
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const Dir d = options[draw_index(rng, options.size())];
    const int mid = *g.step(cell, d);
    const int next = *g.step(mid, d);
    world.walls[mid] = 0;
    world.walls[next] = 0;
    stack.push_back(next);
  }

  // Knock out walls that separate two floor cells on a straight line.
  std::vector<int> breakable;
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (!world.walls[cell]) continue;
    const auto u = g.step(cell, Dir::up), dn = g.step(cell, Dir::down);
    const auto l = g.step(cell, Dir::left), rt = g.step(cell, Dir::right);
    const bool vertical = u && dn && !world.walls[*u] && !world.walls[*dn];
    const bool horizontal = l && rt && !world.walls[*l] && !world.walls[*rt];
    if (vertical || horizontal) breakable.push_back(cell);
  }
  shuffle_in_place(breakable, rng);
  const int openings = p.extra_openings >= 0 ? p.extra_openings : g.cells() / 10;
  for (int i = 0; i < openings && i < static_cast<int>(breakable.size()); ++i) world.walls[breakable[i]] = 0;

  // Start in the top-left corner, goal at the floor cell furthest down-right.
  inst.initial.agent = 0;
  int goal = 0;
  for (int cell = 0; cell < g.cells(); ++cell)
    if (!world.walls[cell] && g.row(cell) + g.col(cell) >= g.row(goal) + g.col(goal)) goal = cell;
  world.goal = goal;

  std::vector<int> free;
  for (int cell = 0; cell < g.cells(); ++cell)
    if (!world.walls[cell] && cell != inst.initial.agent && cell != goal) free.push_back(cell);
  if (static_cast<int>(free.size()) < 2 * p.teleport_pairs) throw GenerationError("maze: not enough floor cells for teleport pads");
  shuffle_in_place(free, rng);
  for (int i = 0; i < p.teleport_pairs; ++i)
    world.teleports[static_cast<std::size_t>(i)] = std::minmax(free[static_cast<std::size_t>(2 * i)],
                                                               free[static_cast<std::size_t>(2 * i + 1)]);
  return inst;
}

// --------------------------------------------------------------- floor-tile

FloorTileInstance make_floortile(const GeneratorParams& p, std::mt19937_64& rng) {
  FloorTileInstance inst;
  const GridGeometry g{p.height, p.width};
  inst.world.geometry = g;
  const auto cells = static_cast<std::size_t>(g.cells());
  const int a1 = static_cast<int>(draw_index(rng, cells));
  int a2 = static_cast<int>(draw_index(rng, cells - 1));
  if (a2 >= a1) ++a2;
  // Checkerboard over every cell except where the agents start (and finish).
  inst.world.goal.assign(cells, TileColor::none);
  for (int cell = 0; cell < g.cells(); ++cell)
    if (cell != a1 && cell != a2)
      inst.world.goal[cell] = (g.row(cell) + g.col(cell)) % 2 == 0 ? TileColor::white : TileColor::black;
  inst.initial = {std::vector<TileColor>(cells, TileColor::none), a1, a2};
  return inst;
}

std::string size_string(const GeneratorParams& p) { return std::to_string(p.height) + "x" + std::to_string(p.width); }

template <typename D, typename Make>
DomainInstance<D> generate_certified(const GeneratorParams& p, std::uint64_t seed, Make&& make) {
  p.validate();
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    std::optional<DomainInstance<D>> inst = make(rng);
    if (!inst) continue;
    D::validate(inst->world, inst->initial);
    std::size_t length = 0;
    try {
      length = certify<D>(inst->world, inst->initial);
    } catch (const OracleError&) {
      continue;
    }
    inst->meta.fields["seed"] = std::to_string(seed);
    inst->meta.fields["size"] = size_string(p);
    inst->meta.fields["oracle_length"] = std::to_string(length);
    return std::move(*inst);
  }
  throw GenerationError(to_string(p.domain) + " generator: no certified instance after " +
                        std::to_string(p.max_attempts) + " attempts (seed " + std::to_string(seed) + ")");
}

}  // namespace

SokobanInstance generate_sokoban(const GeneratorParams& params, std::uint64_t seed) {
  auto p = params;
  p.domain = DomainTag::sokoban;
  auto inst = generate_certified<Sokoban>(p, seed, [&](std::mt19937_64& rng) { return try_sokoban(p, rng); });
  inst.meta.fields["boxes"] = std::to_string(p.boxes);
  return inst;
}

MazeInstance generate_maze(const GeneratorParams& params, std::uint64_t seed) {
  auto p = params;
  p.domain = DomainTag::maze;
  auto inst = generate_certified<Maze>(p, seed, [&](std::mt19937_64& rng) {
    return std::optional<MazeInstance>(make_maze(p, rng));
  });
  inst.meta.fields["pairs"] = std::to_string(p.teleport_pairs);
  return inst;
}

FloorTileInstance generate_floortile(const GeneratorParams& params, std::uint64_t seed) {
  auto p = params;
  p.domain = DomainTag::floortile;
  return generate_certified<FloorTile>(p, seed, [&](std::mt19937_64& rng) {
    return std::optional<FloorTileInstance>(make_floortile(p, rng));
  });
}

Instance generate_instance(const GeneratorParams& params, std::uint64_t seed) {
  switch (params.domain) {
    case DomainTag::sokoban:
      return generate_sokoban(params, seed);
    case DomainTag::maze:
      return generate_maze(params, seed);
    case DomainTag::floortile:
      return generate_floortile(params, seed);
  }
  throw GenerationError("unknown domain");
}

}  // namespace coat
