#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wayfield/fields.hpp"
#include "wayfield/rng.hpp"
#include "wayfield/topology.hpp"

namespace wayfield {

inline constexpr int64_t kFreeCell = -1;

struct AgentState {
  uint64_t id = 0;
  Cell pos;
  double speed = 0.0;        // desired speed Speed_d, m/s
  std::string end;           // final destination id
  int region = -1;
  PathOption option;         // empty in direct mode
  bool direct = false;       // region holds the destination, tactical layer bypassed
  bool has_plan = false;
  std::string dest;          // current intermediate target (opening id) or `end`
  int64_t last_decision_step = 0;
  int64_t inertia_window = 0;
  int64_t spread_until = 0;  // exclusive step bound for ChoiceField re-spreading
  std::string spread_opening;
  bool entered_new_region = false;
};

/// Model parameters. The tactical weights and windows drive the route choice
/// model; k_pf/k_obs/k_prox parameterize the floor-field walker at the
/// operational level (k_pf = inf selects deterministic greedy descent).
/// Defaults are uncalibrated working values.
struct ModelParams {
  double kappa_tt = 100.0;
  double kappa_q = 20.0;
  double kappa_f = 5.0;
  double gamma_m = 4.0;             // congestion perception threshold on path-field values
  double rho_c = 5.0;               // ChoiceField diffusion radius, cells
  int64_t tau_c = 20;               // ChoiceField entry lifetime, steps
  int64_t tau_a = 10;               // re-spread duration after a plan change, steps
  int64_t tau_short = 10;
  int64_t tau_long = 60;
  double speed_ref = 4.0 / 3.0;     // population desired speed, used for tree construction
  double plausibility_factor = 3.0;
  double k_pf = 3.0;
  double k_obs = 0.2;
  double k_prox = 1.0;
  double proxemic_radius = 5.0;     // cells

  bool greedy_descent() const { return std::isinf(k_pf); }
};

struct MoveContext {
  const Scenario* scenario = nullptr;
  const FloorField* path = nullptr;      // field of the agent's current target
  const FloorField* obstacle = nullptr;
  const FloorField* proxemic = nullptr;
  const Grid<int64_t>* occupancy = nullptr;  // agent id per cell, kFreeCell when empty
};

/// Candidate next cells (the Moore neighborhood plus staying put) with their
/// selection probabilities: softmax of
///   -k_pf * PF(c) + k_obs * OF(c) - k_prox * ProxF(c)
/// over free walkable cells reachable under the corner rule. Cells where the
/// path field is unreachable get probability 0; if nothing remains the agent
/// stays in place with probability 1.
std::vector<std::pair<Cell, double>> move_distribution(const MoveContext& ctx, Cell pos,
                                                       const ModelParams& params);

Cell step_move(const MoveContext& ctx, Cell pos, const ModelParams& params, Rng& rng);

struct MoveProposal {
  uint64_t agent_id = 0;
  Cell target;
};

/// Parallel-update conflict resolution: when several agents propose the same
/// cell one uniform winner moves and the rest stay. Returns one flag per
/// proposal. Deterministic given the random stream; groups are processed in
/// cell order and proposers ranked by agent id.
std::vector<char> resolve_conflicts(std::span<const MoveProposal> proposals,
                                    const GridGeometry& geometry, Rng& rng);

}  // namespace wayfield
