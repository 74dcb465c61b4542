#pragma once

// Independent rule checkers written straight from the game rules on character
// grids. They share nothing with the library beyond the action names.

#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <string>
#include <vector>

#include "coat/domains/instance.hpp"
#include "coat/search/astar.hpp"

namespace oracle {

using Rows = std::vector<std::string>;

inline const int kDr[4] = {-1, 1, 0, 0};
inline const int kDc[4] = {0, 0, -1, 1};
inline const char* kDirWord[4] = {"up", "down", "left", "right"};

inline bool in(const Rows& g, int r, int c) {
  return r >= 0 && c >= 0 && r < static_cast<int>(g.size()) && c < static_cast<int>(g[0].size());
}

// ---- sokoban: '#', ' ', '$', '@' (targets ignored: they never affect moves)
inline std::map<std::string, Rows> sokoban_moves(const Rows& g) {
  std::map<std::string, Rows> out;
  int ar = -1, ac = -1;
  for (int r = 0; r < static_cast<int>(g.size()); ++r)
    for (int c = 0; c < static_cast<int>(g[r].size()); ++c)
      if (g[r][c] == '@') ar = r, ac = c;
  for (int d = 0; d < 4; ++d) {
    const int r1 = ar + kDr[d], c1 = ac + kDc[d];
    if (!in(g, r1, c1)) continue;
    if (g[r1][c1] == ' ') {
      Rows n = g;
      n[ar][ac] = ' ';
      n[r1][c1] = '@';
      out[kDirWord[d]] = n;
    } else if (g[r1][c1] == '$') {
      const int r2 = r1 + kDr[d], c2 = c1 + kDc[d];
      if (in(g, r2, c2) && g[r2][c2] == ' ') {
        Rows n = g;
        n[ar][ac] = ' ';
        n[r1][c1] = '@';
        n[r2][c2] = '$';
        out[std::string("push-") + kDirWord[d]] = n;
      }
    }
  }
  return out;
}

inline Rows sokoban_rows(const coat::SokobanWorld& w, const coat::SokobanState& s) {
  const auto& g = w.geometry;
  Rows rows(static_cast<std::size_t>(g.height), std::string(static_cast<std::size_t>(g.width), ' '));
  for (int cell = 0; cell < g.cells(); ++cell) {
    char ch = ' ';
    if (w.walls[cell]) ch = '#';
    for (int b : s.boxes)
      if (b == cell) ch = '$';
    if (s.agent == cell) ch = '@';
    rows[g.row(cell)][g.col(cell)] = ch;
  }
  return rows;
}

// ---- maze: '#', '.', '@', digits for pads. The agent may stand on a pad,
// so the agent is kept apart from the board.
struct MazeBoard {
  Rows board;  // no agent glyph
  int r = 0, c = 0;
};

inline std::map<std::string, std::pair<int, int>> maze_moves(const MazeBoard& m) {
  std::map<std::string, std::pair<int, int>> out;
  for (int d = 0; d < 4; ++d) {
    int r = m.r + kDr[d], c = m.c + kDc[d];
    if (!in(m.board, r, c) || m.board[r][c] == '#') continue;
    const char ch = m.board[r][c];
    if (ch >= '1' && ch <= '4') {
      for (int rr = 0; rr < static_cast<int>(m.board.size()); ++rr)
        for (int cc = 0; cc < static_cast<int>(m.board[rr].size()); ++cc)
          if (m.board[rr][cc] == ch && (rr != r || cc != c)) {
            r = rr;
            c = cc;
            goto done;
          }
    done:;
    }
    out[kDirWord[d]] = {r, c};
  }
  return out;
}

inline MazeBoard maze_board(const coat::MazeWorld& w, const coat::MazeState& s) {
  const auto& g = w.geometry;
  MazeBoard m;
  m.board.assign(static_cast<std::size_t>(g.height), std::string(static_cast<std::size_t>(g.width), '.'));
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (w.walls[cell]) m.board[g.row(cell)][g.col(cell)] = '#';
  }
  for (std::size_t i = 0; i < w.teleports.size(); ++i) {
    const auto [a, b] = w.teleports[i];
    if (a < 0) continue;
    m.board[g.row(a)][g.col(a)] = static_cast<char>('1' + i);
    m.board[g.row(b)][g.col(b)] = static_cast<char>('1' + i);
  }
  m.r = g.row(s.agent);
  m.c = g.col(s.agent);
  return m;
}

// ---- floor-tile: colours '.', 'w', 'b'; agents as coordinates.
struct TileBoard {
  Rows colors;
  int r1, c1, r2, c2;
  bool operator<(const TileBoard& o) const {
    return std::tie(colors, r1, c1, r2, c2) < std::tie(o.colors, o.r1, o.c1, o.r2, o.c2);
  }
  bool operator==(const TileBoard& o) const {
    return std::tie(colors, r1, c1, r2, c2) == std::tie(o.colors, o.r1, o.c1, o.r2, o.c2);
  }
};

inline std::map<std::string, TileBoard> tile_moves(const TileBoard& t) {
  std::map<std::string, TileBoard> out;
  for (int agent = 0; agent < 2; ++agent) {
    const int r = agent == 0 ? t.r1 : t.r2, c = agent == 0 ? t.c1 : t.c2;
    const int orr = agent == 0 ? t.r2 : t.r1, oc = agent == 0 ? t.c2 : t.c1;
    const std::string who = agent == 0 ? "a1-" : "a2-";
    for (int d = 0; d < 4; ++d) {
      const int nr = r + kDr[d], nc = c + kDc[d];
      if (!in(t.colors, nr, nc) || t.colors[nr][nc] != '.' || (nr == orr && nc == oc)) continue;
      TileBoard moved = t;
      (agent == 0 ? moved.r1 : moved.r2) = nr;
      (agent == 0 ? moved.c1 : moved.c2) = nc;
      out[who + kDirWord[d]] = moved;
      TileBoard painted = t;
      painted.colors[nr][nc] = agent == 0 ? 'w' : 'b';
      out[who + "paint-" + kDirWord[d]] = painted;
    }
  }
  return out;
}

inline TileBoard tile_board(const coat::FloorTileWorld& w, const coat::FloorTileState& s) {
  const auto& g = w.geometry;
  TileBoard t;
  t.colors.assign(static_cast<std::size_t>(g.height), std::string(static_cast<std::size_t>(g.width), '.'));
  for (int cell = 0; cell < g.cells(); ++cell) {
    if (s.colors[cell] == coat::TileColor::white) t.colors[g.row(cell)][g.col(cell)] = 'w';
    if (s.colors[cell] == coat::TileColor::black) t.colors[g.row(cell)][g.col(cell)] = 'b';
  }
  t.r1 = g.row(s.agent1);
  t.c1 = g.col(s.agent1);
  t.r2 = g.row(s.agent2);
  t.c2 = g.col(s.agent2);
  return t;
}

/// Outcome of comparing the library's successor function with a rule
/// checker over every state reachable from the instance's start.
struct TransitionReport {
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

template <typename D, typename Project, typename Rules>
TransitionReport compare_transitions(const coat::DomainInstance<D>& inst, Project&& project, Rules&& rules,
                                     std::size_t limit = 2'000'000) {
  using State = typename D::State;
  TransitionReport rep;
  std::unordered_map<State, char, coat::StateHash<D>> seen;
  std::deque<State> queue{inst.initial};
  seen.emplace(inst.initial, 1);
  std::vector<coat::Successor<State>> succ;
  while (!queue.empty() && rep.states < limit) {
    const State s = queue.front();
    queue.pop_front();
    ++rep.states;
    D::successors(inst.world, s, succ);
    std::map<std::string, decltype(project(inst.world, s))> mine;
    for (const auto& e : succ) mine.emplace(std::string(D::action_name(e.action)), project(inst.world, e.state));
    const auto theirs = rules(project(inst.world, s));
    rep.edges += succ.size();
    if (mine != theirs) {
      if (rep.mismatches++ == 0) {
        rep.first_mismatch = "state #" + std::to_string(rep.states) + ": library gives " +
                             std::to_string(mine.size()) + " successors, rules give " + std::to_string(theirs.size());
      }
    }
    for (const auto& e : succ)
      if (seen.emplace(e.state, 1).second) queue.push_back(e.state);
  }
  return rep;
}

inline TransitionReport sokoban_transitions(const coat::SokobanInstance& inst) {
  return compare_transitions(inst, sokoban_rows, sokoban_moves);
}

inline TransitionReport maze_transitions(const coat::MazeInstance& inst) {
  return compare_transitions(
      inst, [](const coat::MazeWorld& w, const coat::MazeState& s) { return std::pair<int, int>{w.geometry.row(s.agent), w.geometry.col(s.agent)}; },
      [&](std::pair<int, int> pos) {
        auto board = maze_board(inst.world, inst.initial);
        board.r = pos.first;
        board.c = pos.second;
        return maze_moves(board);
      });
}

inline TransitionReport floortile_transitions(const coat::FloorTileInstance& inst) {
  return compare_transitions(inst, tile_board, tile_moves);
}

/// Plain breadth-first search for the optimal plan length (-1 if none).
template <typename D>
long bfs_length(const typename D::World& world, const typename D::State& initial, std::size_t limit = 5'000'000) {
  using State = typename D::State;
  std::unordered_map<State, long, coat::StateHash<D>> depth;
  std::deque<State> queue{initial};
  depth.emplace(initial, 0);
  std::vector<coat::Successor<State>> succ;
  while (!queue.empty() && depth.size() < limit) {
    State s = queue.front();
    queue.pop_front();
    const long d = depth.at(s);
    if (D::is_goal(world, s)) return d;
    D::successors(world, s, succ);
    for (auto& e : succ)
      if (depth.emplace(e.state, d + 1).second) queue.push_back(std::move(e.state));
  }
  return -1;
}

}  // namespace oracle
