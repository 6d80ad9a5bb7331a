#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wayfield/scenario.hpp"

namespace wayfield {

enum class FieldKind { Path, Obstacle, Proxemic };

/// Per-cell scalar potential in meters (path/obstacle fields) or presence
/// units (proxemic field).
///
/// Path fields hold the length of the shortest 8-connected walkable path to
/// the nearest target cell (orthogonal step 0.4 m, diagonal 0.4*sqrt(2) m,
/// no corner cutting), infinity where no path exists. The obstacle field
/// holds the distance to the nearest obstacle or grid-boundary cell, with the
/// boundary treated as an obstacle ring. Fields are immutable once spread.
struct FloorField {
  std::string target_id;
  FieldKind kind = FieldKind::Path;
  Grid<double> values;

  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();
  bool reachable(Cell c) const { return values.at(c) != kUnreachable; }
};

FloorField spread_path_field(const Scenario& s, std::span<const Cell> target_cells,
                             const std::string& target_id);
FloorField spread_obstacle_field(const Scenario& s);

/// Rebuilt every step: values[c] = sum over agents within `radius_cells`
/// (Euclidean, in cells) of 1/(1 + dist).
FloorField update_proxemic_field(const Scenario& s, std::span<const Cell> agent_positions,
                                 double radius_cells);

struct ChoiceEntry {
  std::string opening;
  double diff = 0.0;
  int64_t age = 0;
  uint64_t source = 0;  // diffusing agent, so its own re-spread replaces rather than stacks
};

/// Grid of recent congestion-triggered plan changes. A diffusion writes
/// (opening, diff) entries in a radial disc around the agent; entries live
/// for tau_c steps and values from distinct agents for the same opening sum.
class ChoiceField {
 public:
  ChoiceField() = default;
  ChoiceField(int width, int height) : cells_(width, height) {}

  /// Writes diff = 1 at the origin and 1/dist elsewhere, on walkable cells
  /// with Euclidean distance <= rho_c. Walls do not occlude the disc. An
  /// existing entry from the same agent for the same opening is replaced.
  void diffuse(const Scenario& s, Cell origin, uint64_t source_agent, const std::string& opening,
               double rho_c);

  /// Ages every entry by one step and discards entries reaching tau_c.
  void decay(int64_t tau_c);

  const std::vector<ChoiceEntry>& entries(Cell c) const { return cells_.at(c); }
  /// Per-opening sums of diff values at one cell.
  std::map<std::string, double> summed(Cell c) const;

  void clear();
  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }

 private:
  Grid<std::vector<ChoiceEntry>> cells_;
};

/// The static fields of a world: one path field per opening and destination,
/// plus the obstacle field. Shareable read-only.
struct FieldSet {
  std::map<std::string, FloorField> path;
  FloorField obstacle;

  const FloorField& path_field(const std::string& target_id) const;
};

}  // namespace wayfield
