#include "coat/domains/instance.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "coat/error.hpp"

namespace coat {

std::string to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::sokoban:
      return "sokoban";
    case DomainTag::maze:
      return "maze";
    case DomainTag::floortile:
      return "floortile";
  }
  return "?";
}

DomainTag parse_domain_tag(const std::string& text) {
  if (text == "sokoban") return DomainTag::sokoban;
  if (text == "maze") return DomainTag::maze;
  if (text == "floortile" || text == "floor-tile") return DomainTag::floortile;
  throw UsageError("unknown domain '" + text + "' (expected sokoban, maze or floortile)");
}

DomainTag domain_of(const Instance& instance) {
  return visit_instance(instance, [](auto d, const auto&) { return decltype(d)::tag; });
}

const InstanceMeta& meta_of(const Instance& instance) {
  return std::visit([](const auto& inst) -> const InstanceMeta& { return inst.meta; }, instance);
}

InstanceMeta& meta_of(Instance& instance) {
  return std::visit([](auto& inst) -> InstanceMeta& { return inst.meta; }, instance);
}

std::size_t input_channels(DomainTag tag) {
  switch (tag) {
    case DomainTag::sokoban:
      return input_channels<Sokoban>();
    case DomainTag::maze:
      return input_channels<Maze>();
    case DomainTag::floortile:
      return input_channels<FloorTile>();
  }
  return 0;
}

std::size_t action_count(DomainTag tag) {
  switch (tag) {
    case DomainTag::sokoban:
      return Sokoban::action_count;
    case DomainTag::maze:
      return Maze::action_count;
    case DomainTag::floortile:
      return FloorTile::action_count;
  }
  return 0;
}

std::size_t agent_count(DomainTag tag) {
  switch (tag) {
    case DomainTag::sokoban:
      return Sokoban::agent_count;
    case DomainTag::maze:
      return Maze::agent_count;
    case DomainTag::floortile:
      return FloorTile::agent_count;
  }
  return 0;
}

void validate_instance(const Instance& instance) {
  visit_instance(instance, [](auto d, const auto& inst) { decltype(d)::validate(inst.world, inst.initial); });
}

Instance rotate_instance(const Instance& instance, int quarter_turns) {
  return visit_instance(instance, [&](auto, const auto& inst) -> Instance { return rotate_instance(inst, quarter_turns); });
}

// ---------------------------------------------------------------- serialize

namespace {

std::string header(DomainTag tag, const GridGeometry& g, const InstanceMeta& meta) {
  std::ostringstream out;
  out << "domain=" << to_string(tag) << " h=" << g.height << " w=" << g.width << " format=" << kInstanceFormatVersion;
  for (const auto& [k, v] : meta.fields) out << ' ' << k << '=' << v;
  out << '\n';
  return out.str();
}

std::string rows(const GridGeometry& g, auto glyph) {
  std::string out;
  out.reserve(static_cast<std::size_t>(g.cells() + g.height));
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) out.push_back(glyph(g.index(r, c)));
    out.push_back('\n');
  }
  return out;
}

std::string serialize(const SokobanInstance& inst) {
  Sokoban::validate(inst.world, inst.initial);
  const auto& w = inst.world;
  const auto& s = inst.initial;
  return header(Sokoban::tag, w.geometry, inst.meta) + rows(w.geometry, [&](int cell) {
           if (w.wall(cell)) return '#';
           const bool t = w.target(cell);
           if (s.box(cell)) return t ? '*' : '$';
           if (cell == s.agent) return t ? '+' : '@';
           return t ? '.' : ' ';
         });
}

std::string serialize(const MazeInstance& inst) {
  Maze::validate(inst.world, inst.initial);
  const auto& w = inst.world;
  if (w.pad_pair(inst.initial.agent) >= 0 || inst.initial.agent == w.goal)
    throw ContractError("maze: an initial agent on a pad or the goal has no text form");
  return header(Maze::tag, w.geometry, inst.meta) + rows(w.geometry, [&](int cell) {
           if (w.wall(cell)) return '#';
           if (cell == inst.initial.agent) return 'S';
           if (cell == w.goal) return 'G';
           if (const int p = w.pad_pair(cell); p >= 0) return static_cast<char>('1' + p);
           return '.';
         });
}

char color_glyph(TileColor c) {
  switch (c) {
    case TileColor::white:
      return 'w';
    case TileColor::black:
      return 'b';
    default:
      return '.';
  }
}

std::string serialize(const FloorTileInstance& inst) {
  FloorTile::validate(inst.world, inst.initial);
  const auto& s = inst.initial;
  const auto& g = inst.world.geometry;
  return header(FloorTile::tag, g, inst.meta) + rows(g, [&](int cell) {
           if (cell == s.agent1) return 'A';
           if (cell == s.agent2) return 'B';
           return color_glyph(s.colors[cell]);
         }) +
         "---goal---\n" + rows(g, [&](int cell) { return color_glyph(inst.world.goal[cell]); });
}

}  // namespace

std::string serialize_instance(const Instance& instance) {
  return std::visit([](const auto& inst) { return serialize(inst); }, instance);
}

// -------------------------------------------------------------------- parse

namespace {

struct Line {
  std::string_view text;
  int number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 1;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, number++});
    start = end + 1;
  }
  return lines;
}

int parse_int(std::string_view v, int line, int column) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw ParseError("expected an integer, got '" + std::string(v) + "'", line, column);
  return out;
}

struct Header {
  DomainTag tag{};
  GridGeometry geometry;
  InstanceMeta meta;
};

Header parse_header(const Line& line) {
  Header h;
  bool have_domain = false, have_h = false, have_w = false, have_format = false;
  std::size_t pos = 0;
  const auto text = line.text;
  while (pos < text.size()) {
    if (text[pos] == ' ') {
      ++pos;
      continue;
    }
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(pos, end - pos);
    const int column = static_cast<int>(pos) + 1;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ParseError("expected key=value, got '" + std::string(token) + "'", line.number, column);
    const std::string key(token.substr(0, eq));
    const auto value = token.substr(eq + 1);
    const int vcol = column + static_cast<int>(eq) + 1;
    if (key == "domain") {
      try {
        h.tag = parse_domain_tag(std::string(value));
      } catch (const UsageError& e) {
        throw ParseError(e.what(), line.number, vcol);
      }
      have_domain = true;
    } else if (key == "h") {
      h.geometry.height = parse_int(value, line.number, vcol);
      have_h = true;
    } else if (key == "w") {
      h.geometry.width = parse_int(value, line.number, vcol);
      have_w = true;
    } else if (key == "format") {
      if (parse_int(value, line.number, vcol) != kInstanceFormatVersion)
        throw ParseError("unsupported instance format version " + std::string(value), line.number, vcol);
      have_format = true;
    } else {
      if (!h.meta.fields.emplace(key, std::string(value)).second)
        throw ParseError("duplicate header key '" + key + "'", line.number, column);
    }
    pos = end;
  }
  if (!have_domain || !have_h || !have_w || !have_format)
    throw ParseError("header needs domain=, h=, w= and format=", line.number, 1);
  if (h.geometry.height <= 0 || h.geometry.width <= 0) throw ParseError("grid dimensions must be positive", line.number, 1);
  return h;
}

// Calls glyph(cell, ch, line, column) for every cell of the `first`-th .. grid rows.
// Short rows are padded with `pad` (trailing blanks are easy to lose).
template <typename Fn>
void scan_grid(const std::vector<Line>& lines, std::size_t first, const GridGeometry& g, char pad, Fn&& glyph) {
  if (lines.size() < first + static_cast<std::size_t>(g.height)) {
    const int last = lines.empty() ? 1 : lines.back().number + 1;
    throw ParseError("expected " + std::to_string(g.height) + " grid rows", last, 1);
  }
  for (int r = 0; r < g.height; ++r) {
    const auto& line = lines[first + static_cast<std::size_t>(r)];
    if (static_cast<int>(line.text.size()) > g.width)
      throw ParseError("row longer than w=" + std::to_string(g.width), line.number, g.width + 1);
    for (int c = 0; c < g.width; ++c) {
      const char ch = c < static_cast<int>(line.text.size()) ? line.text[static_cast<std::size_t>(c)] : pad;
      glyph(g.index(r, c), ch, line.number, c + 1);
    }
  }
}

void expect_end(const std::vector<Line>& lines, std::size_t next) {
  for (std::size_t i = next; i < lines.size(); ++i)
    if (!lines[i].text.empty()) throw ParseError("unexpected trailing content", lines[i].number, 1);
}

void check(const std::vector<Line>& lines, auto&& validate) {
  try {
    validate();
  } catch (const ContractError& e) {
    throw ParseError(e.what(), lines.size() > 1 ? lines[1].number : 1, 1);
  }
}

SokobanInstance parse_sokoban(const std::vector<Line>& lines, const Header& h) {
  SokobanInstance inst;
  auto& w = inst.world;
  w.geometry = h.geometry;
  w.walls.assign(static_cast<std::size_t>(h.geometry.cells()), 0);
  inst.meta = h.meta;
  int agent_line = 0, agent_col = 0;
  scan_grid(lines, 1, h.geometry, ' ', [&](int cell, char ch, int ln, int col) {
    switch (ch) {
      case '#':
        w.walls[cell] = 1;
        break;
      case ' ':
        break;
      case '$':
        inst.initial.boxes.push_back(cell);
        break;
      case '.':
        w.targets.push_back(cell);
        break;
      case '*':
        inst.initial.boxes.push_back(cell);
        w.targets.push_back(cell);
        break;
      case '@':
      case '+':
        if (inst.initial.agent >= 0) throw ParseError("second agent (first at line " + std::to_string(agent_line) + ", column " + std::to_string(agent_col) + ")", ln, col);
        inst.initial.agent = cell;
        agent_line = ln;
        agent_col = col;
        if (ch == '+') w.targets.push_back(cell);
        break;
      default:
        throw ParseError(std::string("unknown sokoban glyph '") + ch + "'", ln, col);
    }
  });
  if (inst.initial.agent < 0) throw ParseError("no agent ('@' or '+')", lines[0].number, 1);
  expect_end(lines, 1 + static_cast<std::size_t>(h.geometry.height));
  check(lines, [&] { Sokoban::validate(inst.world, inst.initial); });
  return inst;
}

MazeInstance parse_maze(const std::vector<Line>& lines, const Header& h) {
  MazeInstance inst;
  auto& w = inst.world;
  w.geometry = h.geometry;
  w.walls.assign(static_cast<std::size_t>(h.geometry.cells()), 0);
  inst.meta = h.meta;
  std::array<int, kMaxTeleportPairs> seen{};
  std::array<std::pair<int, int>, kMaxTeleportPairs> where{};
  scan_grid(lines, 1, h.geometry, '\0', [&](int cell, char ch, int ln, int col) {
    switch (ch) {
      case '#':
        w.walls[cell] = 1;
        break;
      case '.':
        break;
      case 'S':
        if (inst.initial.agent >= 0) throw ParseError("second agent 'S'", ln, col);
        inst.initial.agent = cell;
        break;
      case 'G':
        if (w.goal >= 0) throw ParseError("second goal 'G'", ln, col);
        w.goal = cell;
        break;
      case '1':
      case '2':
      case '3':
      case '4': {
        const auto p = static_cast<std::size_t>(ch - '1');
        if (++seen[p] > 2) throw ParseError(std::string("teleport digit '") + ch + "' appears more than twice", ln, col);
        if (seen[p] == 1) {
          w.teleports[p].first = cell;
          where[p] = {ln, col};
        } else {
          w.teleports[p].second = cell;
        }
        break;
      }
      case '\0':
        throw ParseError("row shorter than w=" + std::to_string(h.geometry.width), ln, col);
      default:
        throw ParseError(std::string("unknown maze glyph '") + ch + "'", ln, col);
    }
  });
  for (std::size_t p = 0; p < kMaxTeleportPairs; ++p)
    if (seen[p] == 1)
      throw ParseError("teleport digit '" + std::to_string(p + 1) + "' appears once; pads come in pairs", where[p].first,
                       where[p].second);
  if (inst.initial.agent < 0) throw ParseError("no agent 'S'", lines[0].number, 1);
  if (w.goal < 0) throw ParseError("no goal 'G'", lines[0].number, 1);
  expect_end(lines, 1 + static_cast<std::size_t>(h.geometry.height));
  check(lines, [&] { Maze::validate(inst.world, inst.initial); });
  return inst;
}

FloorTileInstance parse_floortile(const std::vector<Line>& lines, const Header& h) {
  FloorTileInstance inst;
  const auto cells = static_cast<std::size_t>(h.geometry.cells());
  inst.world.geometry = h.geometry;
  inst.world.goal.assign(cells, TileColor::none);
  inst.initial.colors.assign(cells, TileColor::none);
  inst.meta = h.meta;
  auto color = [](char ch, int ln, int col) {
    switch (ch) {
      case '.':
        return TileColor::none;
      case 'w':
        return TileColor::white;
      case 'b':
        return TileColor::black;
      case '\0':
        throw ParseError("row too short", ln, col);
      default:
        throw ParseError(std::string("unknown floor-tile glyph '") + ch + "'", ln, col);
    }
  };
  scan_grid(lines, 1, h.geometry, '\0', [&](int cell, char ch, int ln, int col) {
    if (ch == 'A' || ch == 'B') {
      int& slot = ch == 'A' ? inst.initial.agent1 : inst.initial.agent2;
      if (slot >= 0) throw ParseError(std::string("second agent '") + ch + "'", ln, col);
      slot = cell;
      return;
    }
    inst.initial.colors[cell] = color(ch, ln, col);
  });
  const std::size_t sep = 1 + static_cast<std::size_t>(h.geometry.height);
  if (sep >= lines.size() || lines[sep].text != "---goal---")
    throw ParseError("expected '---goal---' separator", sep < lines.size() ? lines[sep].number : lines.back().number + 1, 1);
  scan_grid(lines, sep + 1, h.geometry, '\0',
            [&](int cell, char ch, int ln, int col) { inst.world.goal[cell] = color(ch, ln, col); });
  if (inst.initial.agent1 < 0 || inst.initial.agent2 < 0) throw ParseError("both agents 'A' and 'B' required", lines[0].number, 1);
  expect_end(lines, sep + 1 + static_cast<std::size_t>(h.geometry.height));
  check(lines, [&] { FloorTile::validate(inst.world, inst.initial); });
  return inst;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty instance text", 1, 1);
  const Header h = parse_header(lines[0]);
  switch (h.tag) {
    case DomainTag::sokoban:
      return parse_sokoban(lines, h);
    case DomainTag::maze:
      return parse_maze(lines, h);
    case DomainTag::floortile:
      return parse_floortile(lines, h);
  }
  throw ParseError("unreachable", 1, 1);
}

}  // namespace coat
