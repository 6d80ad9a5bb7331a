#include "wayfield/operational.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wayfield {

std::vector<std::pair<Cell, double>> move_distribution(const MoveContext& ctx, Cell pos,
                                                       const ModelParams& params) {
  std::vector<Cell> candidates{pos};
  for (Cell off : kNeighborOffsets) {
    const Cell n{pos.x + off.x, pos.y + off.y};
    if (!ctx.scenario->walkable.in_bounds(n)) continue;
    if (!step_allowed(*ctx.scenario, pos, n)) continue;
    const int64_t occupant = ctx.occupancy->at(n);
    if (occupant != kFreeCell) continue;
    candidates.push_back(n);
  }

  std::vector<std::pair<Cell, double>> out;
  out.reserve(candidates.size());

  if (params.greedy_descent()) {
    Cell best = pos;
    double best_pf = ctx.path->values.at(pos);
    for (Cell c : candidates) {
      const double pf = ctx.path->values.at(c);
      if (pf < best_pf) {
        best_pf = pf;
        best = c;
      }
    }
    for (Cell c : candidates) out.push_back({c, c == best ? 1.0 : 0.0});
    return out;
  }

  std::vector<double> score(candidates.size(), -std::numeric_limits<double>::infinity());
  double max_score = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Cell c = candidates[i];
    const double pf = ctx.path->values.at(c);
    if (pf == FloorField::kUnreachable) continue;
    score[i] = -params.k_pf * pf + params.k_obs * ctx.obstacle->values.at(c) -
               params.k_prox * ctx.proxemic->values.at(c);
    max_score = std::max(max_score, score[i]);
  }

  if (!std::isfinite(max_score)) {
    // No candidate can reach the target; stay in place.
    for (Cell c : candidates) out.push_back({c, c == pos ? 1.0 : 0.0});
    return out;
  }

  double total = 0.0;
  std::vector<double> weight(candidates.size(), 0.0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (std::isfinite(score[i])) {
      weight[i] = std::exp(score[i] - max_score);
      total += weight[i];
    }
  }
  for (size_t i = 0; i < candidates.size(); ++i) {
    out.push_back({candidates[i], weight[i] / total});
  }
  return out;
}

Cell step_move(const MoveContext& ctx, Cell pos, const ModelParams& params, Rng& rng) {
  const auto dist = move_distribution(ctx, pos, params);
  if (params.greedy_descent()) {
    for (const auto& [cell, p] : dist) {
      if (p == 1.0) return cell;
    }
    return pos;
  }
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& [cell, p] : dist) {
    acc += p;
    if (u < acc) return cell;
  }
  return dist.back().first;
}

std::vector<char> resolve_conflicts(std::span<const MoveProposal> proposals,
                                    const GridGeometry& geometry, Rng& rng) {
  std::vector<char> accepted(proposals.size(), 0);
  std::map<size_t, std::vector<size_t>> by_cell;  // cell index -> proposal indexes
  for (size_t i = 0; i < proposals.size(); ++i) {
    const Cell t = proposals[i].target;
    const size_t cell_index =
        static_cast<size_t>(t.y) * static_cast<size_t>(geometry.width) + static_cast<size_t>(t.x);
    by_cell[cell_index].push_back(i);
  }
  for (auto& [cell_index, group] : by_cell) {
    if (group.size() == 1) {
      accepted[group.front()] = 1;
      continue;
    }
    std::sort(group.begin(), group.end(), [&](size_t a, size_t b) {
      return proposals[a].agent_id < proposals[b].agent_id;
    });
    const size_t winner = static_cast<size_t>(rng.below(group.size()));
    accepted[group[winner]] = 1;
  }
  return accepted;
}

}  // namespace wayfield
