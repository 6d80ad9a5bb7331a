#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wayfield/fields.hpp"
#include "wayfield/operational.hpp"
#include "wayfield/rng.hpp"
#include "wayfield/topology.hpp"

namespace wayfield {

/// Read-only snapshot of everything the tactical layer perceives. Pure
/// functions over this view may run concurrently for distinct agents given
/// independent random streams.
struct DecisionView {
  const Scenario* scenario = nullptr;
  const CognitiveMap* cmap = nullptr;
  const PathsTree* tree = nullptr;  // paths tree of the agent's destination
  const FieldSet* fields = nullptr;
  const ChoiceField* choice_field = nullptr;
  std::span<const AgentState> agents;
  const ModelParams* params = nullptr;
};

struct ScoredOption {
  PathOption option;
  double travel_time = 0.0;
  double eval_tt = 0.0;
  double eval_q = 0.0;
  double eval_f = 0.0;
  double utility = 0.0;
  double probability = 0.0;
};

struct ChoiceDistribution {
  std::vector<ScoredOption> options;
};

/// Expected time to reach the destination along `p` from `pos`: the stored
/// free-flow time rescaled to the agent's desired speed, plus the time to
/// reach the first opening read from its path field.
double travel_time(const PathOption& p, Cell pos, double speed_d, double speed_ref,
                   const FloorField& first_field);

/// Agents heading to `opening` that are strictly closer to it than `pos`.
int forward_count(const FloorField& pf, const std::string& opening, Cell pos,
                  std::span<const AgentState> agents, std::optional<uint64_t> self);

/// forward_count gated by proximity: 0 unless PF(pos) < gamma_m.
int perceive_forward(const FloorField& pf, const std::string& opening, Cell pos,
                     std::span<const AgentState> agents, std::optional<uint64_t> self,
                     double gamma_m);

/// Travel-time attractiveness in (0, 1]: min travel time over the options
/// divided by each option's travel time; 1 marks the fastest option.
std::vector<double> eval_tt_values(std::span<const double> travel_times);

/// Congestion evaluation in [0, 1]: per option, perceived forward agents per
/// meter of door width, normalized by the maximum over all the region's
/// openings (all zero when nothing is congested).
std::vector<double> eval_q_values(const DecisionView& view, int region,
                                  std::span<const std::string> first_openings, Cell pos,
                                  std::optional<uint64_t> self);

double utility_value(double eval_tt, double eval_q, double eval_f, const ModelParams& params);

/// Max-shifted softmax; probabilities sum to 1 and preserve the argmax.
std::vector<double> softmax(std::span<const double> utilities);

size_t sample_index(std::span<const double> probabilities, Rng& rng);

/// All options available from `region` at `pos`, aggregated per first
/// opening (the fastest path represents each opening), with travel_time,
/// eval_tt, eval_q and the base utility filled in. eval_f is left 0.
ChoiceDistribution evaluate_options(const DecisionView& view, int region, Cell pos, double speed_d,
                                    std::optional<uint64_t> self);

/// ChoiceField influence weights at `pos` restricted to the given options:
/// diff sums per matching first opening.
struct FollowWeights {
  std::vector<size_t> option_index;
  std::vector<double> weight;
  double total = 0.0;
};
FollowWeights follow_weights(const ChoiceDistribution& base, const ChoiceField& cf, Cell pos);

/// Samples the followed opening (at most one option gets eval_f = 1), applies
/// the utility weights, computes the softmax distribution and draws a path
/// from it. No random draw happens when kappa_f is 0 or nothing matches.
struct Evaluation {
  ChoiceDistribution dist;
  int chosen = -1;
};
Evaluation choose_path(const DecisionView& view, ChoiceDistribution base, Cell pos, Rng& rng);

enum class Reevaluate { None, NewRegion, Congestion };

/// Plan reconsideration rule: entering a new region always re-evaluates;
/// perceived congestion on the current target re-evaluates only once the
/// active inertia window has elapsed.
std::pair<bool, Reevaluate> should_reevaluate(const AgentState& agent, const DecisionView& view,
                                              int64_t step);

/// Window installed after a decision: tau_long when a congestion-triggered
/// re-evaluation confirmed the previous choice, tau_short otherwise.
int64_t next_inertia_window(Reevaluate reason, bool choice_changed, const ModelParams& params);

}  // namespace wayfield
