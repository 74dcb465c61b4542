#include "coat/bench/pddl.hpp"

#include <sstream>

namespace coat {

namespace {

std::string cell_name(const GridGeometry& g, int cell) {
  return "c" + std::to_string(g.row(cell)) + "_" + std::to_string(g.col(cell));
}

template <typename Open>
std::string objects(const GridGeometry& g, Open&& open, const std::string& extra = {}) {
  std::ostringstream out;
  out << "  (:objects\n   ";
  int on_line = 0;
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (!open(cell)) continue;
    if (on_line++ == 8) {
      out << "\n   ";
      on_line = 1;
    }
    out << ' ' << cell_name(g, cell);
  }
  out << " - cell\n    up down left right - dir\n" << extra << "  )\n";
  return out.str();
}

template <typename Open>
std::string adjacency(const GridGeometry& g, Open&& open) {
  std::string out;
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (!open(cell)) continue;
    for (Dir d : kDirs) {
      const auto next = g.step(cell, d);
      if (next && open(*next))
        out += "    (adj " + cell_name(g, cell) + " " + cell_name(g, *next) + " " + std::string(dir_name(d)) + ")\n";
    }
  }
  return out;
}

std::string header(const std::string& name, const std::string& domain, const InstanceMeta& meta) {
  std::string out = "; coat-pddl version=1\n(define (problem " + name + ")\n  (:domain " + domain + ")\n";
  for (const auto& [k, v] : meta.fields) out += "  ; " + k + "=" + v + "\n";
  return out;
}

const char* kSokobanDomain = R"(; coat-pddl version=1
(define (domain sokoban-grid)
  (:requirements :strips :typing)
  (:types cell dir)
  (:predicates (agent-at ?c - cell) (box-at ?c - cell) (clear ?c - cell) (adj ?a - cell ?b - cell ?d - dir))
  (:action move
    :parameters (?from - cell ?to - cell ?d - dir)
    :precondition (and (agent-at ?from) (adj ?from ?to ?d) (clear ?to))
    :effect (and (agent-at ?to) (not (agent-at ?from))))
  (:action push
    :parameters (?from - cell ?box - cell ?to - cell ?d - dir)
    :precondition (and (agent-at ?from) (adj ?from ?box ?d) (adj ?box ?to ?d) (box-at ?box) (clear ?to))
    :effect (and (agent-at ?box) (not (agent-at ?from)) (box-at ?to) (not (box-at ?box)) (clear ?box) (not (clear ?to))))
)
)";

const char* kMazeDomain = R"(; coat-pddl version=1
(define (domain maze-teleport)
  (:requirements :strips :typing)
  (:types cell dir)
  (:predicates (at ?c - cell) (adj ?a - cell ?b - cell ?d - dir) (plain ?c - cell) (teleport ?pad - cell ?exit - cell))
  (:action move
    :parameters (?from - cell ?to - cell ?d - dir)
    :precondition (and (at ?from) (adj ?from ?to ?d) (plain ?to))
    :effect (and (at ?to) (not (at ?from))))
  (:action move-teleport
    :parameters (?from - cell ?pad - cell ?exit - cell ?d - dir)
    :precondition (and (at ?from) (adj ?from ?pad ?d) (teleport ?pad ?exit))
    :effect (and (not (at ?from)) (at ?exit)))
)
)";

const char* kFloorTileDomain = R"(; coat-pddl version=1
(define (domain floor-tile-grid)
  (:requirements :strips :typing)
  (:types cell dir robot color)
  (:predicates (robot-at ?r - robot ?c - cell) (clear ?c - cell) (painted ?c - cell ?k - color)
               (paints ?r - robot ?k - color) (adj ?a - cell ?b - cell ?d - dir))
  (:action move
    :parameters (?r - robot ?from - cell ?to - cell ?d - dir)
    :precondition (and (robot-at ?r ?from) (adj ?from ?to ?d) (clear ?to))
    :effect (and (robot-at ?r ?to) (not (robot-at ?r ?from)) (clear ?from) (not (clear ?to))))
  (:action paint
    :parameters (?r - robot ?at - cell ?to - cell ?d - dir ?k - color)
    :precondition (and (robot-at ?r ?at) (adj ?at ?to ?d) (clear ?to) (paints ?r ?k))
    :effect (and (painted ?to ?k) (not (clear ?to))))
)
)";

std::string color_name(TileColor c) { return c == TileColor::white ? "white" : "black"; }

PddlExport sokoban(const SokobanInstance& inst) {
  const auto& w = inst.world;
  const auto& g = w.geometry;
  auto open = [&](int cell) { return !w.wall(cell); };
  std::string p = header("sokoban-" + std::to_string(g.height) + "x" + std::to_string(g.width), "sokoban-grid", inst.meta);
  p += objects(g, open);
  p += "  (:init\n    (agent-at " + cell_name(g, inst.initial.agent) + ")\n";
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (!open(cell)) continue;
    if (inst.initial.box(cell)) p += "    (box-at " + cell_name(g, cell) + ")\n";
    else p += "    (clear " + cell_name(g, cell) + ")\n";
  }
  p += adjacency(g, open) + "  )\n  (:goal (and";
  for (int t : w.targets) p += " (box-at " + cell_name(g, t) + ")";
  p += "))\n)\n";
  return {kSokobanDomain, p};
}

PddlExport maze(const MazeInstance& inst) {
  const auto& w = inst.world;
  const auto& g = w.geometry;
  auto open = [&](int cell) { return !w.wall(cell); };
  std::string p = header("maze-" + std::to_string(g.height) + "x" + std::to_string(g.width), "maze-teleport", inst.meta);
  p += objects(g, open);
  p += "  (:init\n    (at " + cell_name(g, inst.initial.agent) + ")\n";
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (!open(cell)) continue;
    const int other = w.partner(cell);
    if (other < 0) p += "    (plain " + cell_name(g, cell) + ")\n";
    else p += "    (teleport " + cell_name(g, cell) + " " + cell_name(g, other) + ")\n";
  }
  p += adjacency(g, open) + "  )\n  (:goal (at " + cell_name(g, w.goal) + "))\n)\n";
  return {kMazeDomain, p};
}

PddlExport floortile(const FloorTileInstance& inst) {
  const auto& w = inst.world;
  const auto& s = inst.initial;
  const auto& g = w.geometry;
  auto open = [](int) { return true; };
  std::string p = header("floor-tile-" + std::to_string(g.height) + "x" + std::to_string(g.width), "floor-tile-grid", inst.meta);
  p += objects(g, open, "    r1 r2 - robot\n    white black - color\n");
  p += "  (:init\n    (robot-at r1 " + cell_name(g, s.agent1) + ")\n    (robot-at r2 " + cell_name(g, s.agent2) +
       ")\n    (paints r1 white)\n    (paints r2 black)\n";
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (s.colors[cell] != TileColor::none) p += "    (painted " + cell_name(g, cell) + " " + color_name(s.colors[cell]) + ")\n";
    else if (cell != s.agent1 && cell != s.agent2) p += "    (clear " + cell_name(g, cell) + ")\n";
  }
  p += adjacency(g, open) + "  )\n  (:goal (and";
  for (int cell = 0; cell < g.cells(); ++cell)
    if (w.goal[cell] != TileColor::none) p += " (painted " + cell_name(g, cell) + " " + color_name(w.goal[cell]) + ")";
  p += "))\n)\n";
  return {kFloorTileDomain, p};
}

}  // namespace

PddlExport export_pddl(const Instance& instance) {
  validate_instance(instance);
  return std::visit(
      [](const auto& inst) -> PddlExport {
        using I = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<I, SokobanInstance>) return sokoban(inst);
        else if constexpr (std::is_same_v<I, MazeInstance>) return maze(inst);
        else return floortile(inst);
      },
      instance);
}

}  // namespace coat
