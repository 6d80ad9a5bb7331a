#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wayfield/fields.hpp"
#include "wayfield/scenario.hpp"

namespace wayfield {

struct Region {
  int id = -1;
  std::vector<Cell> cells;      // sorted by (y, x)
  std::string type_label;       // region-type marker covering the region, if any
};

struct OpeningEdge {
  std::string id;
  std::array<int, 2> regions{-1, -1};  // endpoint regions; -1 when degenerate
  double width_m = 0.0;                // 0.4 * number of cells
  Cell representative;                 // centroid snapped to the nearest member cell
  std::vector<Cell> cells;

  bool valid() const { return regions[0] >= 0 && regions[1] >= 0; }
  int other_side(int region) const {
    return regions[0] == region ? regions[1] : regions[0];
  }
};

/// Graph abstraction of the walkable space: regions (4-connected components
/// of walkable minus opening cells) as nodes, openings as edges.
struct CognitiveMap {
  std::vector<Region> regions;
  std::vector<OpeningEdge> openings;
  std::map<std::string, int> destination_region;  // destination id -> region id
  Grid<int32_t> region_of;                        // -1 on obstacle/opening cells
  Grid<int32_t> opening_at;                       // index into `openings`, -1 elsewhere
  std::vector<std::vector<int>> region_openings;  // region id -> opening indexes, sorted by id

  int opening_index(const std::string& id) const;
};

/// Topology problems ("opening adjacent to != 2 regions" and similar) are
/// appended to `violations` when provided; degenerate openings keep their
/// entry but carry no usable edge.
CognitiveMap build_cognitive_map(const Scenario& s, std::vector<Violation>* violations = nullptr);

/// One plausible route stored in the paths tree: the openings to cross in
/// order, the region the route departs from through the first opening, and
/// the free-flow travel time at the tree's reference speed.
struct PathRecord {
  std::vector<std::string> openings;
  int origin_region = -1;
  double distance_m = 0.0;
  double tt = 0.0;  // seconds = distance_m / speed_ref
};

/// Plausible paths to one destination from every opening. A stored path
/// never re-enters a region it left, and per (opening, origin region) only
/// paths within plausibility_factor of the fastest are retained.
struct PathsTree {
  std::string destination;
  double speed_ref = 1.0;
  std::map<std::string, std::vector<PathRecord>> entries;  // first opening -> records
};

PathsTree build_paths_tree(const CognitiveMap& cm, const FieldSet& fields, const std::string& end,
                           double speed_ref, double plausibility_factor);

/// A route option as seen by an agent: opening sequence plus the destination
/// id, free-flow travel time, and the next intermediate target.
struct PathOption {
  std::vector<std::string> nodes;  // openings in crossing order, then the destination id
  double tt = 0.0;
  std::string first_opening;

  friend bool operator==(const PathOption&, const PathOption&) = default;
};

/// Stored options departing from `region`, ordered by first opening. Empty
/// when the destination lies in `region` (the agent heads straight to it).
std::vector<PathOption> paths(const PathsTree& tree, int region, const CognitiveMap& cm);

}  // namespace wayfield
