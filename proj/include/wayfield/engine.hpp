#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wayfield/fields.hpp"
#include "wayfield/operational.hpp"
#include "wayfield/rng.hpp"
#include "wayfield/route_choice.hpp"
#include "wayfield/scenario.hpp"
#include "wayfield/topology.hpp"

namespace wayfield {

inline constexpr double kTimeStepSeconds = 0.3;  // one cell per step at 4/3 m/s

struct SpawnConfig {
  std::string start_id;
  double rate = 0.0;  // persons/second
  double speed = 4.0 / 3.0;
  std::string destination;
  int64_t backlog = 0;   // arrivals deferred because the start area was full
  double credit = 0.0;   // fractional accumulator for deterministic arrivals
};

struct EngineConfig {
  double agent_speed = 4.0 / 3.0;     // desired speed of spawned agents
  bool deterministic_arrivals = false;  // constant rate instead of Poisson
};

struct RunStats {
  int64_t spawned = 0;
  int64_t despawned = 0;
  int64_t reevaluations = 0;
  int64_t choice_changes = 0;
  std::map<std::string, int64_t> crossings;  // opening id -> target crossings
};

class InitError : public std::runtime_error {
 public:
  InitError(const std::string& message, std::vector<Violation> violations);
  std::vector<Violation> violations;
};

/// The full simulation state. Advanced single-writer by tick(); everything is
/// open data so diagnostics and tests can inspect or assemble worlds freely.
struct WorldState {
  Scenario scenario;
  ModelParams params;
  EngineConfig engine_config;
  CognitiveMap cmap;
  FieldSet fields;
  std::map<std::string, PathsTree> trees;  // per destination id
  ChoiceField choice_field;
  FloorField proxemic;
  Grid<int64_t> occupancy;  // agent id per cell, kFreeCell when empty
  std::vector<AgentState> agents;
  std::vector<SpawnConfig> spawns;
  std::map<std::string, Grid<uint8_t>> end_cells;  // absorbing masks per destination
  Rng rng;
  int64_t step = 0;
  uint64_t next_agent_id = 1;
  RunStats stats;
  int64_t step_reevaluations = 0;
  int64_t step_changes = 0;

  DecisionView view_for(const std::string& end) const;
};

/// Validates the scenario, spreads every static field, builds the cognitive
/// map and one paths tree per destination. Throws InitError when validation
/// or topology reports violations.
WorldState init_world(Scenario scenario, const ModelParams& params, uint64_t seed,
                      const EngineConfig& engine_config = {});

/// One step of the agent lifecycle, in order: ChoiceField decay, inflow
/// generation, tactical phase per agent in a fresh random order (perception,
/// conditional re-evaluation and choice, ChoiceField spreading), movement
/// proposals with conflict resolution, proxemic field rebuild, despawning on
/// destination cells.
void tick(WorldState& w);

using SnapshotHook = std::function<void(const WorldState&)>;

/// Ticks n_steps times, invoking `hook` whenever the step counter matches an
/// entry of snapshot_steps (step 0 fires before the first tick). When `log`
/// is set, writes one line per step: step, #agents, #re-evaluations,
/// #choice-changes.
void run(WorldState& w, int64_t n_steps, std::span<const int64_t> snapshot_steps,
         const SnapshotHook& hook, std::ostream* log = nullptr);

/// Places an agent directly (testing and tooling); returns its id.
uint64_t inject_agent(WorldState& w, Cell pos, double speed, const std::string& end);

}  // namespace wayfield
