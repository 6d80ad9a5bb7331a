#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wayfield/geometry.hpp"

namespace wayfield {

enum class MarkerKind { Obstacle, StartArea, Opening, FinalDestination, RegionType };

const char* to_string(MarkerKind kind);

/// One annotated element of the environment. For scenarios read from text the
/// id is the single grid symbol that drew the marker ('#' for obstacles).
struct Marker {
  MarkerKind kind = MarkerKind::Obstacle;
  std::string id;
  std::vector<Cell> cells;  // sorted by (y, x)
  std::map<std::string, std::string> attributes;

  friend bool operator==(const Marker&, const Marker&) = default;
};

struct GridGeometry {
  int width = 0;
  int height = 0;
  double cell_size = kCellSize;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line = 0;
  int column = 0;
};

/// A validation finding. Violations are data, not failures; an empty list
/// means the scenario is usable.
struct Violation {
  std::string code;
  std::string detail;
};

/// The annotated environment on a grid of 0.4 m cells. Immutable after
/// construction in normal use and safe to share read-only; tests that build
/// scenarios programmatically mutate `markers` and call rebuild_derived().
struct Scenario {
  GridGeometry geometry;
  std::vector<Marker> markers;
  Grid<uint8_t> walkable;  // derived: true iff no obstacle marker covers the cell

  void rebuild_derived();

  bool is_walkable(Cell c) const { return walkable.in_bounds(c) && walkable.at(c) != 0; }
  const Marker* find(MarkerKind kind, const std::string& id) const;
  std::vector<const Marker*> of_kind(MarkerKind kind) const;
  std::vector<std::string> ids_of_kind(MarkerKind kind) const;  // sorted
  /// Inflow of a start area in persons/second (attribute "inflow", default 0).
  double start_inflow(const Marker& start) const;
};

/// Legality of a single move between adjacent cells: both walkable, and a
/// diagonal step is rejected when both shared orthogonal neighbors are
/// blocked (no cutting obstacle corners).
bool step_allowed(const Scenario& s, Cell from, Cell to);

Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);
std::vector<Violation> validate_scenario(const Scenario& s);

}  // namespace wayfield
