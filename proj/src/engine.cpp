#include "wayfield/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace wayfield {

InitError::InitError(const std::string& message, std::vector<Violation> violations_)
    : std::runtime_error(message), violations(std::move(violations_)) {}

DecisionView WorldState::view_for(const std::string& end) const {
  DecisionView view;
  view.scenario = &scenario;
  view.cmap = &cmap;
  view.tree = &trees.at(end);
  view.fields = &fields;
  view.choice_field = &choice_field;
  view.agents = agents;
  view.params = &params;
  return view;
}

namespace {

std::string violations_message(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "scenario rejected with " << violations.size() << " violation(s):";
  for (const Violation& v : violations) out << "\n  [" << v.code << "] " << v.detail;
  return out.str();
}

AgentState make_agent(WorldState& w, Cell pos, double speed, const std::string& end) {
  AgentState a;
  a.id = w.next_agent_id++;
  a.pos = pos;
  a.speed = speed;
  a.end = end;
  a.region = w.cmap.region_of.at(pos);
  a.dest = end;
  return a;
}

void evaluate_agent(WorldState& w, AgentState& a, Reevaluate reason) {
  const std::string old_first = (a.has_plan && !a.direct) ? a.dest : std::string{};
  const DecisionView view = w.view_for(a.end);

  bool changed = true;
  const auto dest_region = w.cmap.destination_region.find(a.end);
  if (dest_region != w.cmap.destination_region.end() && dest_region->second == a.region) {
    // Tactical layer bypassed: head straight for the destination.
    a.direct = true;
    a.option = PathOption{};
    a.dest = a.end;
    changed = !old_first.empty();
  } else {
    ChoiceDistribution base = evaluate_options(view, a.region, a.pos, a.speed, a.id);
    if (base.options.empty()) {
      // No stored route from here (the destination is unreachable); fall back
      // to descending the destination field directly.
      a.direct = true;
      a.option = PathOption{};
      a.dest = a.end;
      changed = false;
    } else {
      const Evaluation ev = choose_path(view, std::move(base), a.pos, w.rng);
      const ScoredOption& picked = ev.dist.options[static_cast<size_t>(ev.chosen)];
      a.direct = false;
      a.option = picked.option;
      a.dest = picked.option.first_opening;
      changed = a.dest != old_first;
    }
  }

  a.has_plan = true;
  a.entered_new_region = false;
  a.inertia_window = next_inertia_window(reason, changed, w.params);
  a.last_decision_step = w.step;
  ++w.stats.reevaluations;
  ++w.step_reevaluations;

  // Only congestion-triggered plan changes propagate through the ChoiceField.
  if (reason == Reevaluate::Congestion && changed && !a.direct) {
    a.spread_until = w.step + w.params.tau_a;
    a.spread_opening = a.dest;
    ++w.stats.choice_changes;
    ++w.step_changes;
  }
}

void tactical_phase(WorldState& w, AgentState& a) {
  // Localization: standing on a region cell that differs from the stored
  // region means the agent drifted across a boundary.
  const int32_t cell_region = w.cmap.region_of.at(a.pos);
  if (cell_region >= 0 && cell_region != a.region) {
    a.region = cell_region;
    a.entered_new_region = true;
  }

  if (!a.has_plan) {
    evaluate_agent(w, a, Reevaluate::NewRegion);
  } else {
    const auto [needed, reason] = should_reevaluate(a, w.view_for(a.end), w.step);
    if (needed) evaluate_agent(w, a, reason);
  }

  // Re-spread while the window is open and the advertised opening is still
  // the agent's target; moving on to another target ends the influence.
  if (w.step < a.spread_until && !a.spread_opening.empty() && a.dest == a.spread_opening) {
    w.choice_field.diffuse(w.scenario, a.pos, a.id, a.spread_opening, w.params.rho_c);
  }
}

void spawn_phase(WorldState& w) {
  for (SpawnConfig& sc : w.spawns) {
    if (sc.rate > 0.0) {
      const double mean = sc.rate * kTimeStepSeconds;
      if (w.engine_config.deterministic_arrivals) {
        sc.credit += mean;
        const double whole = std::floor(sc.credit);
        sc.backlog += static_cast<int64_t>(whole);
        sc.credit -= whole;
      } else {
        sc.backlog += w.rng.poisson(mean);
      }
    }
    if (sc.backlog == 0) continue;

    const Marker* start = w.scenario.find(MarkerKind::StartArea, sc.start_id);
    std::vector<Cell> free;
    for (Cell c : start->cells) {
      if (w.occupancy.at(c) == kFreeCell) free.push_back(c);
    }
    while (sc.backlog > 0 && !free.empty()) {
      const size_t pick = static_cast<size_t>(w.rng.below(free.size()));
      const Cell cell = free[pick];
      free.erase(free.begin() + static_cast<int64_t>(pick));
      AgentState agent = make_agent(w, cell, sc.speed, sc.destination);
      w.occupancy.at(cell) = static_cast<int64_t>(agent.id);
      w.agents.push_back(std::move(agent));
      ++w.stats.spawned;
      --sc.backlog;
    }
  }
}

void movement_phase(WorldState& w, std::span<const size_t> order) {
  std::vector<MoveProposal> proposals;
  std::vector<size_t> proposer;  // agent index per proposal
  proposals.reserve(w.agents.size());

  for (size_t idx : order) {
    AgentState& a = w.agents[idx];
    Cell target = a.pos;
    const double gate = a.speed * kTimeStepSeconds / kCellSize;
    const bool fires = gate >= 1.0 || w.rng.uniform() < gate;
    if (fires) {
      MoveContext ctx;
      ctx.scenario = &w.scenario;
      ctx.path = &w.fields.path_field(a.dest);
      ctx.obstacle = &w.fields.obstacle;
      ctx.proxemic = &w.proxemic;
      ctx.occupancy = &w.occupancy;
      target = step_move(ctx, a.pos, w.params, w.rng);
    }
    proposals.push_back(MoveProposal{a.id, target});
    proposer.push_back(idx);
  }

  const std::vector<char> accepted = resolve_conflicts(proposals, w.scenario.geometry, w.rng);

  for (size_t p = 0; p < proposals.size(); ++p) {
    if (!accepted[p]) continue;
    AgentState& a = w.agents[proposer[p]];
    const Cell target = proposals[p].target;
    if (target == a.pos) continue;
    w.occupancy.at(a.pos) = kFreeCell;
    w.occupancy.at(target) = static_cast<int64_t>(a.id);
    a.pos = target;

    // Region bookkeeping. Reaching the current target opening counts as
    // crossing into the region on its far side; stepping onto a region cell
    // re-localizes directly.
    const int32_t opening = w.cmap.opening_at.at(target);
    if (opening >= 0) {
      const OpeningEdge& edge = w.cmap.openings[static_cast<size_t>(opening)];
      if (!a.direct && edge.id == a.dest && edge.valid()) {
        const int other = edge.other_side(a.region);
        if (other >= 0 && other != a.region) {
          a.region = other;
          a.entered_new_region = true;
          ++w.stats.crossings[edge.id];
        }
      }
    } else {
      const int32_t cell_region = w.cmap.region_of.at(target);
      if (cell_region >= 0 && cell_region != a.region) {
        a.region = cell_region;
        a.entered_new_region = true;
      }
    }
  }
}

void despawn_phase(WorldState& w) {
  std::erase_if(w.agents, [&](const AgentState& a) {
    const auto it = w.end_cells.find(a.end);
    if (it == w.end_cells.end() || !it->second.at(a.pos)) return false;
    w.occupancy.at(a.pos) = kFreeCell;
    ++w.stats.despawned;
    return true;
  });
}

}  // namespace

WorldState init_world(Scenario scenario, const ModelParams& params, uint64_t seed,
                      const EngineConfig& engine_config) {
  std::vector<Violation> violations = validate_scenario(scenario);
  WorldState w;
  w.scenario = std::move(scenario);
  w.params = params;
  w.engine_config = engine_config;
  w.rng = Rng(seed);

  if (violations.empty()) {
    w.cmap = build_cognitive_map(w.scenario, &violations);
  }
  if (!violations.empty()) {
    throw InitError(violations_message(violations), std::move(violations));
  }

  for (const Marker* o : w.scenario.of_kind(MarkerKind::Opening)) {
    w.fields.path.emplace(o->id, spread_path_field(w.scenario, o->cells, o->id));
  }
  for (const Marker* d : w.scenario.of_kind(MarkerKind::FinalDestination)) {
    w.fields.path.emplace(d->id, spread_path_field(w.scenario, d->cells, d->id));

    Grid<uint8_t> mask(w.scenario.geometry.width, w.scenario.geometry.height, 0);
    for (Cell c : d->cells) mask.at(c) = 1;
    w.end_cells.emplace(d->id, std::move(mask));
  }
  w.fields.obstacle = spread_obstacle_field(w.scenario);

  for (const Marker* d : w.scenario.of_kind(MarkerKind::FinalDestination)) {
    w.trees.emplace(d->id, build_paths_tree(w.cmap, w.fields, d->id, params.speed_ref,
                                            params.plausibility_factor));
  }

  w.choice_field = ChoiceField(w.scenario.geometry.width, w.scenario.geometry.height);
  w.proxemic = update_proxemic_field(w.scenario, {}, params.proxemic_radius);
  w.occupancy = Grid<int64_t>(w.scenario.geometry.width, w.scenario.geometry.height, kFreeCell);

  const std::vector<std::string> dests = w.scenario.ids_of_kind(MarkerKind::FinalDestination);
  for (const Marker* s : w.scenario.of_kind(MarkerKind::StartArea)) {
    SpawnConfig sc;
    sc.start_id = s->id;
    sc.rate = w.scenario.start_inflow(*s);
    sc.speed = engine_config.agent_speed;
    auto it = s->attributes.find("destination");
    sc.destination = it != s->attributes.end() ? it->second : dests.front();
    w.spawns.push_back(std::move(sc));
  }
  std::sort(w.spawns.begin(), w.spawns.end(),
            [](const SpawnConfig& a, const SpawnConfig& b) { return a.start_id < b.start_id; });

  return w;
}

void tick(WorldState& w) {
  w.step_reevaluations = 0;
  w.step_changes = 0;

  w.choice_field.decay(w.params.tau_c);
  spawn_phase(w);

  std::vector<size_t> order(w.agents.size());
  std::iota(order.begin(), order.end(), size_t{0});
  w.rng.shuffle(order);

  for (size_t idx : order) tactical_phase(w, w.agents[idx]);
  movement_phase(w, order);

  std::vector<Cell> positions;
  positions.reserve(w.agents.size());
  for (const AgentState& a : w.agents) positions.push_back(a.pos);
  w.proxemic = update_proxemic_field(w.scenario, positions, w.params.proxemic_radius);

  despawn_phase(w);
  ++w.step;
}

void run(WorldState& w, int64_t n_steps, std::span<const int64_t> snapshot_steps,
         const SnapshotHook& hook, std::ostream* log) {
  auto maybe_snapshot = [&]() {
    if (!hook) return;
    for (int64_t s : snapshot_steps) {
      if (s == w.step) {
        hook(w);
        return;
      }
    }
  };
  maybe_snapshot();
  for (int64_t i = 0; i < n_steps; ++i) {
    tick(w);
    if (log != nullptr) {
      *log << "step " << w.step << " agents " << w.agents.size() << " reevaluations "
           << w.step_reevaluations << " changes " << w.step_changes << '\n';
    }
    maybe_snapshot();
  }
}

uint64_t inject_agent(WorldState& w, Cell pos, double speed, const std::string& end) {
  if (!w.scenario.is_walkable(pos) || w.occupancy.at(pos) != kFreeCell) {
    throw std::invalid_argument("inject_agent: cell not free");
  }
  AgentState a = make_agent(w, pos, speed, end);
  w.occupancy.at(pos) = static_cast<int64_t>(a.id);
  w.agents.push_back(std::move(a));
  ++w.stats.spawned;
  return w.agents.back().id;
}

}  // namespace wayfield
