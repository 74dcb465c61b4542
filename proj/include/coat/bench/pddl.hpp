#pragma once

#include <string>

#include "coat/domains/instance.hpp"

namespace coat {

/// Typed STRIPS domain and problem. Objects are the non-wall cells
/// ("c<row>_<col>") and the four directions; the mapping per domain:
///   sokoban:    agent-at, box-at, clear (= no box), adj; move, push
///   maze:       at, adj, plain (= floor without pad), teleport; move,
///               move-teleport (lands on the partner pad)
///   floor-tile: robot-at, clear (= uncoloured and unoccupied), painted,
///               paints, adj; move, paint (r1 paints white, r2 black)
/// Action names relate to ours as move ?d -> "<d>", push ?d -> "push-<d>",
/// paint by r1 ?d -> "a1-paint-<d>" and so on.
struct PddlExport {
  std::string domain;
  std::string problem;
};

PddlExport export_pddl(const Instance& instance);

}  // namespace coat
