#include "wayfield/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace wayfield {

double entropy_of(std::span<const double> probs) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("entropy_of: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("entropy_of: probabilities sum to " + std::to_string(sum));
  }
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

namespace {

// Mixture over the ChoiceField influence: each matching opening k is followed
// with probability diff_k / sum(diff), conditioning the softmax on
// eval_f = 1 for k; without matching entries the plain softmax applies.
void fill_marginal_probabilities(const DecisionView& view, ChoiceDistribution& dist, Cell pos) {
  std::vector<double> base_u;
  base_u.reserve(dist.options.size());
  for (const ScoredOption& o : dist.options) base_u.push_back(o.utility);

  FollowWeights fw;
  if (view.params->kappa_f > 0.0) fw = follow_weights(dist, *view.choice_field, pos);

  if (fw.total <= 0.0) {
    const std::vector<double> probs = softmax(base_u);
    for (size_t i = 0; i < probs.size(); ++i) dist.options[i].probability = probs[i];
    return;
  }
  std::vector<double> mixed(dist.options.size(), 0.0);
  for (size_t k = 0; k < fw.option_index.size(); ++k) {
    std::vector<double> u = base_u;
    u[fw.option_index[k]] += view.params->kappa_f;
    const std::vector<double> probs = softmax(u);
    const double w = fw.weight[k] / fw.total;
    for (size_t i = 0; i < probs.size(); ++i) mixed[i] += w * probs[i];
    dist.options[fw.option_index[k]].eval_f = w;  // marginal follow weight, for diagnostics
  }
  for (size_t i = 0; i < mixed.size(); ++i) dist.options[i].probability = mixed[i];
}

}  // namespace

ChoiceDistribution scored_distribution_at(const WorldState& w, Cell cell,
                                          const std::string& destination) {
  if (!w.scenario.is_walkable(cell)) {
    throw std::invalid_argument("scored_distribution_at: cell is not walkable");
  }
  const auto tree_it = w.trees.find(destination);
  if (tree_it == w.trees.end()) {
    throw std::invalid_argument("scored_distribution_at: no paths tree for '" + destination + "'");
  }
  const DecisionView view = w.view_for(destination);
  ChoiceDistribution dist;

  const int32_t opening = w.cmap.opening_at.at(cell);
  if (opening >= 0) {
    // Standing on an opening commits the next target: a single option, taken
    // with certainty, provided the destination is reachable from it.
    const OpeningEdge& edge = w.cmap.openings[static_cast<size_t>(opening)];
    const auto rec = tree_it->second.entries.find(edge.id);
    if (rec == tree_it->second.entries.end()) return dist;
    const PathRecord* best = nullptr;
    for (const PathRecord& r : rec->second) {
      if (best == nullptr || r.tt < best->tt) best = &r;
    }
    ScoredOption o;
    o.option.nodes = best->openings;
    o.option.nodes.push_back(destination);
    o.option.tt = best->tt;
    o.option.first_opening = best->openings.front();
    o.travel_time = best->tt;
    o.eval_tt = 1.0;
    o.probability = 1.0;
    dist.options.push_back(std::move(o));
    return dist;
  }

  const int32_t region = w.cmap.region_of.at(cell);
  if (region < 0) return dist;

  const auto dest_region = w.cmap.destination_region.find(destination);
  if (dest_region != w.cmap.destination_region.end() && dest_region->second == region) {
    ScoredOption o;
    o.option.nodes = {destination};
    o.option.first_opening = destination;
    o.eval_tt = 1.0;
    o.probability = 1.0;
    dist.options.push_back(std::move(o));
    return dist;
  }

  dist = evaluate_options(view, region, cell, w.params.speed_ref, std::nullopt);
  if (dist.options.empty()) return dist;
  fill_marginal_probabilities(view, dist, cell);
  return dist;
}

std::vector<double> choice_distribution_at(const WorldState& w, Cell cell,
                                           const std::string& destination) {
  const ChoiceDistribution dist = scored_distribution_at(w, cell, destination);
  std::vector<double> out;
  out.reserve(dist.options.size());
  for (const ScoredOption& o : dist.options) out.push_back(o.probability);
  return out;
}

int max_option_count(const WorldState& w, const std::string& destination) {
  const auto tree_it = w.trees.find(destination);
  if (tree_it == w.trees.end()) return 0;
  const PathsTree& tree = tree_it->second;
  int max_count = 0;
  const auto dest_region = w.cmap.destination_region.find(destination);
  for (const Region& region : w.cmap.regions) {
    int count = 0;
    if (dest_region != w.cmap.destination_region.end() && dest_region->second == region.id) {
      count = 1;
    } else {
      for (int idx : w.cmap.region_openings[static_cast<size_t>(region.id)]) {
        const OpeningEdge& edge = w.cmap.openings[static_cast<size_t>(idx)];
        const auto rec = tree.entries.find(edge.id);
        if (rec == tree.entries.end()) continue;
        for (const PathRecord& r : rec->second) {
          if (r.origin_region == region.id) {
            ++count;
            break;
          }
        }
      }
    }
    max_count = std::max(max_count, count);
  }
  return max_count;
}

EntropyMap entropy_map(const WorldState& w, const std::string& destination) {
  EntropyMap m;
  m.step = w.step;
  m.destination = destination;
  m.values = Grid<double>(w.scenario.geometry.width, w.scenario.geometry.height, EntropyMap::kSentinel);
  m.h_max = std::log2(std::max(1, max_option_count(w, destination)));

  for (int y = 0; y < w.scenario.geometry.height; ++y) {
    for (int x = 0; x < w.scenario.geometry.width; ++x) {
      const Cell c{x, y};
      if (!w.scenario.is_walkable(c)) continue;
      const std::vector<double> probs = choice_distribution_at(w, c, destination);
      if (probs.empty()) continue;  // destination unreachable: keep the sentinel
      m.values.at(c) = entropy_of(probs);
    }
  }
  return m;
}

namespace {

void write_grid_csv(const Grid<double>& values, const std::string& header,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << header << '\n';
  char buf[32];
  for (int y = 0; y < values.height(); ++y) {
    for (int x = 0; x < values.width(); ++x) {
      double v = values.at({x, y});
      if (v == FloorField::kUnreachable) v = -1.0;
      std::snprintf(buf, sizeof buf, "%.6f", v);
      if (x > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void export_csv(const EntropyMap& m, const std::filesystem::path& path) {
  char header[128];
  std::snprintf(header, sizeof header, "# entropy-map step=%lld dest=%s hmax=%.6f",
                static_cast<long long>(m.step), m.destination.c_str(), m.h_max);
  write_grid_csv(m.values, header, path);
}

void export_image(const EntropyMap& m, const std::filesystem::path& path) {
  const int w = m.values.width();
  const int h = m.values.height();
  std::filesystem::path mask_path = path;
  mask_path += ".mask.pgm";

  std::ofstream img(path, std::ios::binary);
  if (!img) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  img << "P5\n# entropy map, sentinel cells rendered 0; sentinel mask: " << mask_path.filename().string()
      << "\n" << w << ' ' << h << "\n255\n";
  std::ofstream mask(mask_path, std::ios::binary);
  if (!mask) throw std::runtime_error("cannot open '" + mask_path.string() + "' for writing");
  mask << "P5\n# 255 marks cells without an entropy value\n" << w << ' ' << h << "\n255\n";

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = m.values.at({x, y});
      unsigned char pixel = 0;
      unsigned char masked = 255;
      if (v >= 0.0) {
        masked = 0;
        if (m.h_max > 0.0) {
          const long scaled = std::lround(255.0 * v / m.h_max);
          pixel = static_cast<unsigned char>(std::clamp(scaled, 0L, 255L));
        }
      }
      img.put(static_cast<char>(pixel));
      mask.put(static_cast<char>(masked));
    }
  }
  if (!img || !mask) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void export_field_csv(const FloorField& f, const std::filesystem::path& path) {
  std::string kind = "path";
  if (f.kind == FieldKind::Obstacle) kind = "obstacle";
  if (f.kind == FieldKind::Proxemic) kind = "proxemic";
  write_grid_csv(f.values, "# field target=" + f.target_id + " kind=" + kind, path);
}

}  // namespace wayfield
