#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "coat/tensor/ops.hpp"

namespace coat {

enum class Dir : std::uint8_t { up = 0, down = 1, left = 2, right = 3 };

inline constexpr std::array<Dir, 4> kDirs{Dir::up, Dir::down, Dir::left, Dir::right};

inline constexpr std::string_view dir_name(Dir d) {
  constexpr std::array<std::string_view, 4> names{"up", "down", "left", "right"};
  return names[static_cast<int>(d)];
}

inline constexpr Dir opposite(Dir d) {
  constexpr std::array<Dir, 4> opp{Dir::down, Dir::up, Dir::right, Dir::left};
  return opp[static_cast<int>(d)];
}

/// Cell indexing for an h x w grid; cells are row-major integers.
struct GridGeometry {
  int height = 0;
  int width = 0;

  int cells() const { return height * width; }
  int index(int r, int c) const { return r * width + c; }
  int row(int cell) const { return cell / width; }
  int col(int cell) const { return cell % width; }
  bool inside(int r, int c) const { return r >= 0 && c >= 0 && r < height && c < width; }

  std::optional<int> step(int cell, Dir d) const {
    constexpr std::array<int, 4> dr{-1, 1, 0, 0};
    constexpr std::array<int, 4> dc{0, 0, -1, 1};
    const int r = row(cell) + dr[static_cast<int>(d)];
    const int c = col(cell) + dc[static_cast<int>(d)];
    if (!inside(r, c)) return std::nullopt;
    return index(r, c);
  }

  GridPos pos(int cell) const {
    return GridPos{static_cast<std::size_t>(row(cell)), static_cast<std::size_t>(col(cell))};
  }

  /// Geometry after `quarter_turns` clockwise quarter turns.
  GridGeometry rotated(int quarter_turns) const {
    return (quarter_turns & 1) ? GridGeometry{width, height} : *this;
  }

  /// Where `cell` lands after `quarter_turns` clockwise quarter turns.
  int rotate_cell(int cell, int quarter_turns) const {
    int r = row(cell), c = col(cell);
    int h = height, w = width;
    for (int i = 0; i < (quarter_turns & 3); ++i) {
      const int nr = c;
      const int nc = h - 1 - r;
      r = nr;
      c = nc;
      std::swap(h, w);
    }
    return r * w + c;
  }

  bool operator==(const GridGeometry&) const = default;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace coat
