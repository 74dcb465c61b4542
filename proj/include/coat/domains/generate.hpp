#pragma once

#include <cstdint>
#include <random>

#include "coat/domains/instance.hpp"
#include "coat/random.hpp"

namespace coat {

struct GeneratorParams {
  DomainTag domain = DomainTag::maze;
  int height = 6;
  int width = 6;
  /// Sokoban.
  int boxes = 2;
  int pull_steps = 1000;
  /// Fraction of interior cells turned into extra walls.
  double wall_density = 0.1;
  /// Maze.
  int teleport_pairs = 4;
  /// Walls knocked out after carving; -1 = one per ten cells.
  int extra_openings = -1;
  /// Retries before a GenerationError.
  int max_attempts = 200;

  void validate() const;
  static GeneratorParams for_domain(DomainTag tag, int height, int width);
};

/// Deterministic per (params, seed); the result is oracle-certified and its
/// optimal length is recorded in meta field "oracle_length".
Instance generate_instance(const GeneratorParams& params, std::uint64_t seed);

SokobanInstance generate_sokoban(const GeneratorParams& params, std::uint64_t seed);
MazeInstance generate_maze(const GeneratorParams& params, std::uint64_t seed);
FloorTileInstance generate_floortile(const GeneratorParams& params, std::uint64_t seed);

}  // namespace coat
