#include "wayfield/route_choice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace wayfield {

double travel_time(const PathOption& p, Cell pos, double speed_d, double speed_ref,
                   const FloorField& first_field) {
  if (!(speed_d > 0.0)) throw std::invalid_argument("travel_time: speed must be positive");
  const double pf = first_field.values.at(pos);
  if (pf == FloorField::kUnreachable) {
    throw std::invalid_argument("travel_time: position cannot reach opening '" + p.first_opening + "'");
  }
  return p.tt * (speed_ref / speed_d) + pf / speed_d;
}

int forward_count(const FloorField& pf, const std::string& opening, Cell pos,
                  std::span<const AgentState> agents, std::optional<uint64_t> self) {
  const double own = pf.values.at(pos);
  int count = 0;
  for (const AgentState& a : agents) {
    if (self && a.id == *self) continue;
    if (a.dest != opening) continue;
    if (pf.values.at(a.pos) < own) ++count;
  }
  return count;
}

int perceive_forward(const FloorField& pf, const std::string& opening, Cell pos,
                     std::span<const AgentState> agents, std::optional<uint64_t> self,
                     double gamma_m) {
  if (!(pf.values.at(pos) < gamma_m)) return 0;
  return forward_count(pf, opening, pos, agents, self);
}

std::vector<double> eval_tt_values(std::span<const double> travel_times) {
  if (travel_times.empty()) throw std::invalid_argument("eval_tt_values: no options");
  double min_time = travel_times[0];
  for (double t : travel_times) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("eval_tt_values: travel times must be finite and positive");
    }
    min_time = std::min(min_time, t);
  }
  std::vector<double> out;
  out.reserve(travel_times.size());
  for (double t : travel_times) out.push_back(min_time / t);
  return out;
}

std::vector<double> eval_q_values(const DecisionView& view, int region,
                                  std::span<const std::string> first_openings, Cell pos,
                                  std::optional<uint64_t> self) {
  const double gamma = view.params->gamma_m;
  auto raw_for = [&](const OpeningEdge& edge) {
    const FloorField& pf = view.fields->path_field(edge.id);
    const int perceived = perceive_forward(pf, edge.id, pos, view.agents, self, gamma);
    return static_cast<double>(perceived) / edge.width_m;
  };

  // Normalizer: the maximum raw density over every opening of the region.
  double max_raw = 0.0;
  std::map<std::string, double> raw_by_id;
  for (int idx : view.cmap->region_openings[static_cast<size_t>(region)]) {
    const OpeningEdge& edge = view.cmap->openings[static_cast<size_t>(idx)];
    const double raw = raw_for(edge);
    raw_by_id[edge.id] = raw;
    max_raw = std::max(max_raw, raw);
  }

  std::vector<double> out;
  out.reserve(first_openings.size());
  for (const std::string& id : first_openings) {
    double raw = 0.0;
    auto it = raw_by_id.find(id);
    if (it != raw_by_id.end()) {
      raw = it->second;
    } else {
      const int idx = view.cmap->opening_index(id);
      if (idx < 0) throw std::invalid_argument("eval_q_values: unknown opening '" + id + "'");
      raw = raw_for(view.cmap->openings[static_cast<size_t>(idx)]);
    }
    out.push_back(max_raw > 0.0 ? raw / max_raw : 0.0);
  }
  return out;
}

double utility_value(double eval_tt, double eval_q, double eval_f, const ModelParams& params) {
  return params.kappa_tt * eval_tt - params.kappa_q * eval_q + params.kappa_f * eval_f;
}

std::vector<double> softmax(std::span<const double> utilities) {
  if (utilities.empty()) throw std::invalid_argument("softmax: empty input");
  double max_u = utilities[0];
  for (double u : utilities) max_u = std::max(max_u, u);
  std::vector<double> out;
  out.reserve(utilities.size());
  double total = 0.0;
  for (double u : utilities) {
    const double w = std::exp(u - max_u);
    out.push_back(w);
    total += w;
  }
  for (double& p : out) p /= total;
  return out;
}

size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  if (probabilities.empty()) throw std::invalid_argument("sample_index: empty distribution");
  const double u = rng.uniform();
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

ChoiceDistribution evaluate_options(const DecisionView& view, int region, Cell pos, double speed_d,
                                    std::optional<uint64_t> self) {
  ChoiceDistribution out;
  const std::vector<PathOption> all = paths(*view.tree, region, *view.cmap);
  if (all.empty()) return out;

  // Aggregate per first opening: the fastest stored path represents it. The
  // options arrive grouped by opening, so a linear pass suffices.
  for (const PathOption& option : all) {
    const FloorField& pf = view.fields->path_field(option.first_opening);
    const double time = travel_time(option, pos, speed_d, view.tree->speed_ref, pf);
    if (!out.options.empty() && out.options.back().option.first_opening == option.first_opening) {
      if (time < out.options.back().travel_time) {
        out.options.back().option = option;
        out.options.back().travel_time = time;
      }
    } else {
      ScoredOption scored;
      scored.option = option;
      scored.travel_time = time;
      out.options.push_back(std::move(scored));
    }
  }

  std::vector<double> times;
  std::vector<std::string> firsts;
  times.reserve(out.options.size());
  firsts.reserve(out.options.size());
  for (const ScoredOption& o : out.options) {
    times.push_back(o.travel_time);
    firsts.push_back(o.option.first_opening);
  }
  const std::vector<double> e_tt = eval_tt_values(times);
  const std::vector<double> e_q = eval_q_values(view, region, firsts, pos, self);
  for (size_t i = 0; i < out.options.size(); ++i) {
    out.options[i].eval_tt = e_tt[i];
    out.options[i].eval_q = e_q[i];
    out.options[i].utility = utility_value(e_tt[i], e_q[i], 0.0, *view.params);
  }
  return out;
}

FollowWeights follow_weights(const ChoiceDistribution& base, const ChoiceField& cf, Cell pos) {
  FollowWeights out;
  const std::map<std::string, double> sums = cf.summed(pos);
  for (size_t i = 0; i < base.options.size(); ++i) {
    auto it = sums.find(base.options[i].option.first_opening);
    if (it != sums.end() && it->second > 0.0) {
      out.option_index.push_back(i);
      out.weight.push_back(it->second);
      out.total += it->second;
    }
  }
  return out;
}

Evaluation choose_path(const DecisionView& view, ChoiceDistribution base, Cell pos, Rng& rng) {
  if (base.options.empty()) throw std::invalid_argument("choose_path: no options");
  Evaluation ev;
  ev.dist = std::move(base);

  // kappa_f == 0 skips the lookup and the draw entirely, so the ChoiceField
  // cannot influence either the choice or the random stream.
  if (view.params->kappa_f > 0.0 && view.choice_field != nullptr) {
    const FollowWeights fw = follow_weights(ev.dist, *view.choice_field, pos);
    if (fw.total > 0.0) {
      size_t pick = 0;
      if (fw.option_index.size() > 1) {
        const double u = rng.uniform() * fw.total;
        double acc = 0.0;
        pick = fw.option_index.size() - 1;
        for (size_t i = 0; i < fw.weight.size(); ++i) {
          acc += fw.weight[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      ev.dist.options[fw.option_index[pick]].eval_f = 1.0;
    }
  }

  std::vector<double> utilities;
  utilities.reserve(ev.dist.options.size());
  for (ScoredOption& o : ev.dist.options) {
    o.utility = utility_value(o.eval_tt, o.eval_q, o.eval_f, *view.params);
    utilities.push_back(o.utility);
  }
  const std::vector<double> probs = softmax(utilities);
  for (size_t i = 0; i < probs.size(); ++i) ev.dist.options[i].probability = probs[i];
  ev.chosen = ev.dist.options.size() == 1 ? 0 : static_cast<int>(sample_index(probs, rng));
  return ev;
}

std::pair<bool, Reevaluate> should_reevaluate(const AgentState& agent, const DecisionView& view,
                                              int64_t step) {
  if (agent.entered_new_region) return {true, Reevaluate::NewRegion};
  if (!agent.direct && agent.has_plan) {
    const FloorField& pf = view.fields->path_field(agent.dest);
    const int perceived =
        perceive_forward(pf, agent.dest, agent.pos, view.agents, agent.id, view.params->gamma_m);
    if (perceived > 0 && step - agent.last_decision_step >= agent.inertia_window) {
      return {true, Reevaluate::Congestion};
    }
  }
  return {false, Reevaluate::None};
}

int64_t next_inertia_window(Reevaluate reason, bool choice_changed, const ModelParams& params) {
  if (reason == Reevaluate::Congestion && !choice_changed) return params.tau_long;
  return params.tau_short;
}

}  // namespace wayfield
