#include "wayfield/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace wayfield {

int CognitiveMap::opening_index(const std::string& id) const {
  for (size_t i = 0; i < openings.size(); ++i) {
    if (openings[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

CognitiveMap build_cognitive_map(const Scenario& s, std::vector<Violation>* violations) {
  CognitiveMap cm;
  cm.region_of = Grid<int32_t>(s.geometry.width, s.geometry.height, -1);
  cm.opening_at = Grid<int32_t>(s.geometry.width, s.geometry.height, -1);

  const auto opening_markers = s.of_kind(MarkerKind::Opening);

  Grid<uint8_t> region_eligible(s.geometry.width, s.geometry.height, 0);
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      region_eligible.at({x, y}) = s.is_walkable({x, y}) ? 1 : 0;
    }
  }
  for (const Marker* o : opening_markers) {
    for (Cell c : o->cells) {
      if (region_eligible.in_bounds(c)) region_eligible.at(c) = 0;
    }
  }

  // Regions: 4-connected flood fill in scan order gives stable ids.
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      const Cell seed{x, y};
      if (!region_eligible.at(seed) || cm.region_of.at(seed) != -1) continue;
      Region region;
      region.id = static_cast<int>(cm.regions.size());
      std::deque<Cell> queue{seed};
      cm.region_of.at(seed) = region.id;
      while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        region.cells.push_back(c);
        const Cell n4[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
        for (Cell n : n4) {
          if (cm.region_of.in_bounds(n) && region_eligible.at(n) && cm.region_of.at(n) == -1) {
            cm.region_of.at(n) = region.id;
            queue.push_back(n);
          }
        }
      }
      std::sort(region.cells.begin(), region.cells.end(),
                [](Cell a, Cell b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
      cm.regions.push_back(std::move(region));
    }
  }

  // Region-type labels: first marker (by id) whose cells intersect the region.
  for (const Marker* t : s.of_kind(MarkerKind::RegionType)) {
    for (Cell c : t->cells) {
      if (!cm.region_of.in_bounds(c)) continue;
      const int32_t r = cm.region_of.at(c);
      if (r >= 0 && cm.regions[static_cast<size_t>(r)].type_label.empty()) {
        cm.regions[static_cast<size_t>(r)].type_label = t->id;
      }
    }
  }

  // Openings become edges between the regions 4-adjacent to their cell sets.
  for (const Marker* o : opening_markers) {
    OpeningEdge edge;
    edge.id = o->id;
    edge.cells = o->cells;
    edge.width_m = kCellSize * static_cast<double>(o->cells.size());

    double cx = 0.0, cy = 0.0;
    for (Cell c : edge.cells) {
      cx += c.x;
      cy += c.y;
    }
    cx /= static_cast<double>(edge.cells.size());
    cy /= static_cast<double>(edge.cells.size());
    Cell best = edge.cells.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (Cell c : edge.cells) {  // cells sorted by (y, x): ties resolve deterministically
      const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    edge.representative = best;

    std::set<int32_t> adjacent;
    for (Cell c : edge.cells) {
      const Cell n4[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
      for (Cell n : n4) {
        if (cm.region_of.in_bounds(n) && cm.region_of.at(n) >= 0) adjacent.insert(cm.region_of.at(n));
      }
    }
    if (adjacent.size() == 2) {
      auto it = adjacent.begin();
      edge.regions[0] = *it++;
      edge.regions[1] = *it;
    } else if (violations != nullptr) {
      violations->push_back(Violation{
          "opening adjacency",
          "opening '" + o->id + "' is adjacent to " + std::to_string(adjacent.size()) +
              " regions (expected 2)"});
    }

    const int index = static_cast<int>(cm.openings.size());
    for (Cell c : edge.cells) {
      if (cm.opening_at.in_bounds(c)) cm.opening_at.at(c) = index;
    }
    cm.openings.push_back(std::move(edge));
  }

  cm.region_openings.assign(cm.regions.size(), {});
  for (size_t i = 0; i < cm.openings.size(); ++i) {
    const OpeningEdge& e = cm.openings[i];
    if (!e.valid()) continue;
    cm.region_openings[static_cast<size_t>(e.regions[0])].push_back(static_cast<int>(i));
    cm.region_openings[static_cast<size_t>(e.regions[1])].push_back(static_cast<int>(i));
  }
  for (auto& list : cm.region_openings) {
    std::sort(list.begin(), list.end(),
              [&](int a, int b) { return cm.openings[static_cast<size_t>(a)].id < cm.openings[static_cast<size_t>(b)].id; });
  }

  for (const Marker* d : s.of_kind(MarkerKind::FinalDestination)) {
    int region = -1;
    for (Cell c : d->cells) {
      if (cm.region_of.in_bounds(c) && cm.region_of.at(c) >= 0) {
        region = cm.region_of.at(c);
        break;
      }
    }
    if (region >= 0) {
      cm.destination_region[d->id] = region;
    } else if (violations != nullptr) {
      violations->push_back(
          Violation{"destination region", "destination '" + d->id + "' lies in no region"});
    }
  }

  return cm;
}

namespace {

struct TreeBuilder {
  const CognitiveMap& cm;
  const FieldSet& fields;
  const std::string& end;
  int end_region;
  std::vector<PathRecord> records;

  void enumerate(int opening_index, int origin_region) {
    const OpeningEdge& first = cm.openings[static_cast<size_t>(opening_index)];
    const int entered = first.other_side(origin_region);
    if (entered < 0) return;
    std::set<int> visited{origin_region, entered};
    std::vector<std::string> sequence{first.id};
    walk(opening_index, entered, visited, sequence, 0.0, origin_region);
  }

  void walk(int last_opening, int region, std::set<int>& visited, std::vector<std::string>& sequence,
            double distance, int origin_region) {
    const Cell rep = cm.openings[static_cast<size_t>(last_opening)].representative;
    if (region == end_region) {
      const double leg = fields.path_field(end).values.at(rep);
      if (leg != FloorField::kUnreachable) {
        PathRecord record;
        record.openings = sequence;
        record.origin_region = origin_region;
        record.distance_m = distance + leg;
        records.push_back(std::move(record));
      }
      return;  // leaving the destination's region can never lead back
    }
    for (int next : cm.region_openings[static_cast<size_t>(region)]) {
      if (next == last_opening) continue;
      const OpeningEdge& edge = cm.openings[static_cast<size_t>(next)];
      const int entered = edge.other_side(region);
      if (entered < 0 || visited.count(entered)) continue;
      const double leg = fields.path_field(edge.id).values.at(rep);
      if (leg == FloorField::kUnreachable) continue;
      visited.insert(entered);
      sequence.push_back(edge.id);
      walk(next, entered, visited, sequence, distance + leg, origin_region);
      sequence.pop_back();
      visited.erase(entered);
    }
  }
};

}  // namespace

PathsTree build_paths_tree(const CognitiveMap& cm, const FieldSet& fields, const std::string& end,
                           double speed_ref, double plausibility_factor) {
  if (cm.destination_region.find(end) == cm.destination_region.end()) {
    throw std::invalid_argument("build_paths_tree: unknown destination '" + end + "'");
  }
  if (!(speed_ref > 0.0)) throw std::invalid_argument("build_paths_tree: speed_ref must be positive");
  if (plausibility_factor < 1.0) {
    throw std::invalid_argument("build_paths_tree: plausibility_factor must be >= 1");
  }

  PathsTree tree;
  tree.destination = end;
  tree.speed_ref = speed_ref;

  TreeBuilder builder{cm, fields, end, cm.destination_region.at(end), {}};
  for (size_t i = 0; i < cm.openings.size(); ++i) {
    const OpeningEdge& edge = cm.openings[i];
    if (!edge.valid()) continue;
    builder.enumerate(static_cast<int>(i), edge.regions[0]);
    builder.enumerate(static_cast<int>(i), edge.regions[1]);
  }

  for (PathRecord& r : builder.records) {
    r.tt = r.distance_m / speed_ref;
    tree.entries[r.openings.front()].push_back(std::move(r));
  }

  // Retention: per (first opening, origin region), keep paths within
  // plausibility_factor of the minimum travel time.
  for (auto& [opening, records] : tree.entries) {
    std::map<int, double> min_tt;
    for (const PathRecord& r : records) {
      auto it = min_tt.find(r.origin_region);
      if (it == min_tt.end() || r.tt < it->second) min_tt[r.origin_region] = r.tt;
    }
    std::erase_if(records, [&](const PathRecord& r) {
      return r.tt > plausibility_factor * min_tt.at(r.origin_region) + 1e-9;
    });
    std::sort(records.begin(), records.end(), [](const PathRecord& a, const PathRecord& b) {
      return std::tie(a.origin_region, a.tt, a.openings) < std::tie(b.origin_region, b.tt, b.openings);
    });
  }
  std::erase_if(tree.entries, [](const auto& kv) { return kv.second.empty(); });

  return tree;
}

std::vector<PathOption> paths(const PathsTree& tree, int region, const CognitiveMap& cm) {
  if (region < 0 || region >= static_cast<int>(cm.regions.size())) {
    throw std::invalid_argument("paths: unknown region " + std::to_string(region));
  }
  auto dest_it = cm.destination_region.find(tree.destination);
  if (dest_it != cm.destination_region.end() && dest_it->second == region) {
    return {};  // the agent heads directly to the final destination
  }
  std::vector<PathOption> out;
  for (int idx : cm.region_openings[static_cast<size_t>(region)]) {
    const OpeningEdge& edge = cm.openings[static_cast<size_t>(idx)];
    auto it = tree.entries.find(edge.id);
    if (it == tree.entries.end()) continue;
    for (const PathRecord& r : it->second) {
      if (r.origin_region != region) continue;
      PathOption option;
      option.nodes = r.openings;
      option.nodes.push_back(tree.destination);
      option.tt = r.tt;
      option.first_opening = r.openings.front();
      out.push_back(std::move(option));
    }
  }
  return out;
}

}  // namespace wayfield
