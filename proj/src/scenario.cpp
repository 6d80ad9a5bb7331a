#include "wayfield/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>

namespace wayfield {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool is_comment_or_blank(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

const char* to_string(MarkerKind kind) {
  switch (kind) {
    case MarkerKind::Obstacle: return "obstacle";
    case MarkerKind::StartArea: return "start-area";
    case MarkerKind::Opening: return "opening";
    case MarkerKind::FinalDestination: return "final-destination";
    case MarkerKind::RegionType: return "region-type";
  }
  return "?";
}

ParseError::ParseError(const std::string& message, int line_, int column_)
    : std::runtime_error(message + " (line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ")"),
      line(line_),
      column(column_) {}

void Scenario::rebuild_derived() {
  walkable = Grid<uint8_t>(geometry.width, geometry.height, 1);
  for (const Marker& m : markers) {
    if (m.kind != MarkerKind::Obstacle) continue;
    for (Cell c : m.cells) {
      if (walkable.in_bounds(c)) walkable.at(c) = 0;
    }
  }
}

const Marker* Scenario::find(MarkerKind kind, const std::string& id) const {
  for (const Marker& m : markers) {
    if (m.kind == kind && m.id == id) return &m;
  }
  return nullptr;
}

std::vector<const Marker*> Scenario::of_kind(MarkerKind kind) const {
  std::vector<const Marker*> out;
  for (const Marker& m : markers) {
    if (m.kind == kind) out.push_back(&m);
  }
  return out;
}

std::vector<std::string> Scenario::ids_of_kind(MarkerKind kind) const {
  std::vector<std::string> out;
  for (const Marker& m : markers) {
    if (m.kind == kind) out.push_back(m.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Scenario::start_inflow(const Marker& start) const {
  auto it = start.attributes.find("inflow");
  if (it == start.attributes.end()) return 0.0;
  return std::stod(it->second);
}

bool step_allowed(const Scenario& s, Cell from, Cell to) {
  if (!s.is_walkable(from) || !s.is_walkable(to)) return false;
  const Cell d{to.x - from.x, to.y - from.y};
  if (std::abs(d.x) > 1 || std::abs(d.y) > 1 || (d.x == 0 && d.y == 0)) return false;
  if (is_diagonal(d)) {
    const bool side_a = s.is_walkable({from.x + d.x, from.y});
    const bool side_b = s.is_walkable({from.x, from.y + d.y});
    if (!side_a && !side_b) return false;
  }
  return true;
}

Scenario parse_scenario(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  size_t i = 0;
  auto line_no = [&]() { return static_cast<int>(i + 1); };

  // Preamble: comments and blank lines are allowed before [grid].
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  if (i >= lines.size() || trim(lines[i]) != "[grid]") {
    throw ParseError("expected [grid] section", line_no(), 1);
  }
  ++i;

  std::vector<std::string> rows;
  while (i < lines.size()) {
    const std::string t = trim(lines[i]);
    if (t == "[legend]" || t.empty()) break;
    rows.push_back(t);
    ++i;
  }
  if (rows.empty()) throw ParseError("empty grid", line_no(), 1);

  const int width = static_cast<int>(rows.front().size());
  const int height = static_cast<int>(rows.size());
  const int grid_first_line = line_no() - height;

  std::map<char, std::vector<Cell>> symbol_cells;
  for (int y = 0; y < height; ++y) {
    const std::string& row = rows[static_cast<size_t>(y)];
    if (static_cast<int>(row.size()) != width) {
      throw ParseError("grid row width mismatch (expected " + std::to_string(width) + " cells, got " +
                           std::to_string(row.size()) + ")",
                       grid_first_line + y, static_cast<int>(row.size()) + 1);
    }
    for (int x = 0; x < width; ++x) {
      const char ch = row[static_cast<size_t>(x)];
      if (ch == '.') continue;
      const bool known = ch == '#' || ch == 'S' || (ch >= '0' && ch <= '9') ||
                         (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
      if (!known) {
        throw ParseError(std::string("unknown legend symbol '") + ch + "'", grid_first_line + y, x + 1);
      }
      symbol_cells[ch].push_back({x, y});
    }
  }

  Scenario s;
  s.geometry = GridGeometry{width, height, kCellSize};
  for (auto& [symbol, cells] : symbol_cells) {
    Marker m;
    m.id = std::string(1, symbol);
    if (symbol == '#') {
      m.kind = MarkerKind::Obstacle;
    } else if (symbol == 'S') {
      m.kind = MarkerKind::StartArea;
    } else if (symbol >= '0' && symbol <= '9') {
      m.kind = MarkerKind::FinalDestination;
    } else if (symbol >= 'a' && symbol <= 'z') {
      m.kind = MarkerKind::Opening;
    } else {
      m.kind = MarkerKind::RegionType;
    }
    std::sort(cells.begin(), cells.end(), [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
    m.cells = std::move(cells);
    s.markers.push_back(std::move(m));
  }
  std::sort(s.markers.begin(), s.markers.end(), [](const Marker& a, const Marker& b) {
    return std::tie(a.kind, a.id) < std::tie(b.kind, b.id);
  });

  // Legend: attribute assignments "id.attr = value".
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  if (i < lines.size() && trim(lines[i]) != "[legend]") {
    throw ParseError("expected [legend] section", line_no(), 1);
  }
  if (i < lines.size()) {
    ++i;
    std::set<std::string> seen;
    for (; i < lines.size(); ++i) {
      if (is_comment_or_blank(lines[i])) continue;
      const std::string t = trim(lines[i]);
      const size_t eq = t.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no(), 1);
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      const size_t dot = key.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 >= key.size()) {
        throw ParseError("unknown key '" + key + "' (expected <marker-id>.<attribute>)", line_no(), 1);
      }
      if (!seen.insert(key).second) throw ParseError("duplicate legend key '" + key + "'", line_no(), 1);
      const std::string id = key.substr(0, dot);
      const std::string attr = key.substr(dot + 1);

      Marker* target = nullptr;
      for (Marker& m : s.markers) {
        if (m.id == id && m.kind != MarkerKind::Obstacle) target = &m;
      }
      if (target == nullptr) throw ParseError("unknown key '" + key + "' (no marker with id '" + id + "')",
                                              line_no(), 1);
      const bool start_attr = target->kind == MarkerKind::StartArea &&
                              (attr == "inflow" || attr == "destination");
      if (!start_attr) {
        throw ParseError("unknown key '" + key + "'", line_no(), 1);
      }
      if (attr == "inflow") {
        size_t pos = 0;
        double v = 0.0;
        try {
          v = std::stod(value, &pos);
        } catch (const std::exception&) {
          throw ParseError("invalid inflow value '" + value + "'", line_no(), 1);
        }
        if (pos != value.size() || !(v >= 0.0)) {
          throw ParseError("invalid inflow value '" + value + "'", line_no(), 1);
        }
      } else if (attr == "destination") {
        if (s.find(MarkerKind::FinalDestination, value) == nullptr) {
          throw ParseError("unknown destination '" + value + "' in legend", line_no(), 1);
        }
      }
      target->attributes[attr] = value;
    }
  }

  s.rebuild_derived();
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  Grid<char> canvas(s.geometry.width, s.geometry.height, '.');
  for (const Marker& m : s.markers) {
    const char symbol = m.kind == MarkerKind::Obstacle ? '#' : m.id.front();
    for (Cell c : m.cells) {
      if (canvas.in_bounds(c)) canvas.at(c) = symbol;
    }
  }
  std::ostringstream out;
  out << "[grid]\n";
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) out << canvas.at({x, y});
    out << '\n';
  }
  out << "[legend]\n";
  for (const Marker& m : s.markers) {
    for (const auto& [attr, value] : m.attributes) {
      out << m.id << '.' << attr << " = " << value << '\n';
    }
  }
  return out.str();
}

namespace {

// 4-connected components of (walkable minus opening cells); -1 elsewhere.
Grid<int32_t> region_components(const Scenario& s) {
  Grid<int32_t> region(s.geometry.width, s.geometry.height, -1);
  Grid<uint8_t> eligible(s.geometry.width, s.geometry.height, 0);
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      eligible.at({x, y}) = s.is_walkable({x, y}) ? 1 : 0;
    }
  }
  for (const Marker& m : s.markers) {
    if (m.kind != MarkerKind::Opening) continue;
    for (Cell c : m.cells) {
      if (eligible.in_bounds(c)) eligible.at(c) = 0;
    }
  }
  int32_t next = 0;
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      const Cell seed{x, y};
      if (!eligible.at(seed) || region.at(seed) != -1) continue;
      std::deque<Cell> queue{seed};
      region.at(seed) = next;
      while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        const Cell n4[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
        for (Cell n : n4) {
          if (region.in_bounds(n) && eligible.at(n) && region.at(n) == -1) {
            region.at(n) = next;
            queue.push_back(n);
          }
        }
      }
      ++next;
    }
  }
  return region;
}

Grid<uint8_t> reachable_from(const Scenario& s, const std::vector<Cell>& sources) {
  Grid<uint8_t> seen(s.geometry.width, s.geometry.height, 0);
  std::deque<Cell> queue;
  for (Cell c : sources) {
    if (s.is_walkable(c) && !seen.at(c)) {
      seen.at(c) = 1;
      queue.push_back(c);
    }
  }
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (Cell d : kNeighborOffsets) {
      const Cell n{c.x + d.x, c.y + d.y};
      if (!seen.in_bounds(n) || seen.at(n) || !step_allowed(s, c, n)) continue;
      seen.at(n) = 1;
      queue.push_back(n);
    }
  }
  return seen;
}

}  // namespace

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto report = [&](const std::string& code, const std::string& detail) {
    out.push_back(Violation{code, detail});
  };

  if (s.geometry.width < 1 || s.geometry.height < 1) {
    report("empty grid", "grid must be at least 1x1");
    return out;
  }
  if (s.geometry.cell_size != kCellSize) {
    report("bad cell size", "cell_size must be exactly 0.4 m");
  }

  std::set<std::pair<MarkerKind, std::string>> ids;
  for (const Marker& m : s.markers) {
    if (!ids.insert({m.kind, m.id}).second) {
      report("duplicate marker id", std::string(to_string(m.kind)) + " '" + m.id + "'");
    }
    if (m.cells.empty()) {
      report("empty marker", std::string(to_string(m.kind)) + " '" + m.id + "' has no cells");
    }
    for (Cell c : m.cells) {
      if (!s.walkable.in_bounds(c)) {
        report("cell out of bounds", std::string(to_string(m.kind)) + " '" + m.id + "'");
        break;
      }
    }
  }
  for (const Marker& m : s.markers) {
    if (m.kind == MarkerKind::Opening && s.find(MarkerKind::FinalDestination, m.id) != nullptr) {
      report("ambiguous target id", "opening and destination share id '" + m.id + "'");
    }
  }

  const auto starts = s.of_kind(MarkerKind::StartArea);
  const auto dests = s.of_kind(MarkerKind::FinalDestination);
  const auto openings = s.of_kind(MarkerKind::Opening);
  if (starts.empty()) report("no start area", "at least one start area is required");
  if (dests.empty()) report("no final destination", "at least one final destination is required");

  // Overlap checks against the obstacle set and between start areas/openings.
  Grid<uint8_t> opening_mask(s.geometry.width, s.geometry.height, 0);
  for (const Marker* o : openings) {
    for (Cell c : o->cells) {
      if (opening_mask.in_bounds(c)) opening_mask.at(c) = 1;
    }
  }
  for (const Marker& m : s.markers) {
    if (m.kind == MarkerKind::Obstacle) continue;
    for (Cell c : m.cells) {
      if (!s.walkable.in_bounds(c)) continue;
      if (!s.walkable.at(c)) {
        report(m.kind == MarkerKind::Opening ? "opening/obstacle overlap" : "obstacle overlap",
               std::string(to_string(m.kind)) + " '" + m.id + "' covers an obstacle cell");
        break;
      }
    }
  }
  for (const Marker* st : starts) {
    for (Cell c : st->cells) {
      if (opening_mask.in_bounds(c) && opening_mask.at(c)) {
        report("start/opening overlap", "start area '" + st->id + "' covers an opening cell");
        break;
      }
    }
  }
  for (const Marker* d : dests) {
    for (Cell c : d->cells) {
      if (opening_mask.in_bounds(c) && opening_mask.at(c)) {
        report("destination/opening overlap", "destination '" + d->id + "' covers an opening cell");
        break;
      }
    }
  }

  // Openings must be 4-connected within their own cell set.
  for (const Marker* o : openings) {
    if (o->cells.empty()) continue;
    std::set<Cell> remaining(o->cells.begin(), o->cells.end());
    std::deque<Cell> queue{*remaining.begin()};
    std::set<Cell> seen{*remaining.begin()};
    while (!queue.empty()) {
      const Cell c = queue.front();
      queue.pop_front();
      const Cell n4[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
      for (Cell n : n4) {
        if (remaining.count(n) && !seen.count(n)) {
          seen.insert(n);
          queue.push_back(n);
        }
      }
    }
    if (seen.size() != remaining.size()) {
      report("opening not connected", "opening '" + o->id + "' cells are not edge-connected");
    }
  }

  // Each destination must sit inside a single region.
  const Grid<int32_t> region = region_components(s);
  for (const Marker* d : dests) {
    std::set<int32_t> touched;
    for (Cell c : d->cells) {
      if (region.in_bounds(c)) touched.insert(region.at(c));
    }
    touched.erase(-1);
    if (touched.size() > 1) {
      report("destination spans regions", "destination '" + d->id + "' cells lie in multiple regions");
    }
  }

  // Every destination reachable from every start area through walkable cells.
  for (const Marker* st : starts) {
    if (st->cells.empty()) continue;
    const Grid<uint8_t> seen = reachable_from(s, st->cells);
    for (const Marker* d : dests) {
      bool reached = false;
      for (Cell c : d->cells) {
        if (seen.in_bounds(c) && seen.at(c)) {
          reached = true;
          break;
        }
      }
      if (!reached) {
        report("unreachable destination",
               "destination '" + d->id + "' cannot be reached from start area '" + st->id + "'");
      }
    }
  }

  return out;
}

}  // namespace wayfield
