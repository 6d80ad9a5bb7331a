#include "wayfield/fields.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace wayfield {

namespace {

using QueueItem = std::pair<double, size_t>;  // (distance, cell index)
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

void relax_all(Grid<double>& dist, MinQueue& queue, const Scenario& s, bool walkable_only) {
  while (!queue.empty()) {
    const auto [d, idx] = queue.top();
    queue.pop();
    const Cell c = dist.cell(idx);
    if (d > dist.at(c)) continue;
    for (Cell off : kNeighborOffsets) {
      const Cell n{c.x + off.x, c.y + off.y};
      if (!dist.in_bounds(n)) continue;
      if (walkable_only && !step_allowed(s, c, n)) continue;
      const double nd = d + (is_diagonal(off) ? kDiagonalStep : kCellSize);
      if (nd < dist.at(n)) {
        dist.at(n) = nd;
        queue.push({nd, dist.index(n)});
      }
    }
  }
}

}  // namespace

FloorField spread_path_field(const Scenario& s, std::span<const Cell> target_cells,
                             const std::string& target_id) {
  if (target_cells.empty()) {
    throw std::invalid_argument("spread_path_field: empty target set for '" + target_id + "'");
  }
  Grid<double> dist(s.geometry.width, s.geometry.height, FloorField::kUnreachable);
  MinQueue queue;
  for (Cell c : target_cells) {
    if (!dist.in_bounds(c) || !s.is_walkable(c)) {
      throw std::invalid_argument("spread_path_field: target cell not walkable for '" + target_id + "'");
    }
    dist.at(c) = 0.0;
    queue.push({0.0, dist.index(c)});
  }
  relax_all(dist, queue, s, /*walkable_only=*/true);
  return FloorField{target_id, FieldKind::Path, std::move(dist)};
}

FloorField spread_obstacle_field(const Scenario& s) {
  Grid<double> dist(s.geometry.width, s.geometry.height, FloorField::kUnreachable);
  MinQueue queue;
  auto seed = [&](Cell c, double d) {
    if (d < dist.at(c)) {
      dist.at(c) = d;
      queue.push({d, dist.index(c)});
    }
  };
  for (int y = 0; y < s.geometry.height; ++y) {
    for (int x = 0; x < s.geometry.width; ++x) {
      const Cell c{x, y};
      if (!s.is_walkable(c)) seed(c, 0.0);
    }
  }
  // Boundary ring counts as obstacle: every border cell is one step from it.
  for (int x = 0; x < s.geometry.width; ++x) {
    seed({x, 0}, kCellSize);
    seed({x, s.geometry.height - 1}, kCellSize);
  }
  for (int y = 0; y < s.geometry.height; ++y) {
    seed({0, y}, kCellSize);
    seed({s.geometry.width - 1, y}, kCellSize);
  }
  relax_all(dist, queue, s, /*walkable_only=*/false);
  return FloorField{"#", FieldKind::Obstacle, std::move(dist)};
}

FloorField update_proxemic_field(const Scenario& s, std::span<const Cell> agent_positions,
                                 double radius_cells) {
  Grid<double> values(s.geometry.width, s.geometry.height, 0.0);
  const int r = static_cast<int>(std::ceil(radius_cells));
  for (Cell pos : agent_positions) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const Cell c{pos.x + dx, pos.y + dy};
        if (!values.in_bounds(c)) continue;
        const double d = cell_distance(pos, c);
        if (d <= radius_cells) values.at(c) += 1.0 / (1.0 + d);
      }
    }
  }
  return FloorField{"proxemic", FieldKind::Proxemic, std::move(values)};
}

void ChoiceField::diffuse(const Scenario& s, Cell origin, uint64_t source_agent,
                          const std::string& opening, double rho_c) {
  if (s.find(MarkerKind::Opening, opening) == nullptr) {
    throw std::invalid_argument("ChoiceField::diffuse: unknown opening id '" + opening + "'");
  }
  const int r = static_cast<int>(std::ceil(rho_c));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const Cell c{origin.x + dx, origin.y + dy};
      if (!cells_.in_bounds(c) || !s.is_walkable(c)) continue;
      const double d = cell_distance(origin, c);
      if (d > rho_c) continue;
      const double diff = (c == origin) ? 1.0 : 1.0 / d;
      auto& entries = cells_.at(c);
      auto it = std::find_if(entries.begin(), entries.end(), [&](const ChoiceEntry& e) {
        return e.source == source_agent && e.opening == opening;
      });
      if (it != entries.end()) {
        it->diff = diff;
        it->age = 0;
      } else {
        entries.push_back(ChoiceEntry{opening, diff, 0, source_agent});
      }
    }
  }
}

void ChoiceField::decay(int64_t tau_c) {
  for (auto& entries : cells_.data()) {
    if (entries.empty()) continue;
    for (auto& e : entries) ++e.age;
    std::erase_if(entries, [&](const ChoiceEntry& e) { return e.age >= tau_c; });
  }
}

std::map<std::string, double> ChoiceField::summed(Cell c) const {
  std::map<std::string, double> out;
  for (const ChoiceEntry& e : cells_.at(c)) out[e.opening] += e.diff;
  return out;
}

void ChoiceField::clear() {
  for (auto& entries : cells_.data()) entries.clear();
}

const FloorField& FieldSet::path_field(const std::string& target_id) const {
  auto it = path.find(target_id);
  if (it == path.end()) {
    throw std::out_of_range("FieldSet: no path field for target '" + target_id + "'");
  }
  return it->second;
}

}  // namespace wayfield
