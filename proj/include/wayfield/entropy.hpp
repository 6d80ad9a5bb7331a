#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wayfield/engine.hpp"

namespace wayfield {

/// Per-cell Shannon entropy (bits) of the path-choice distribution a
/// hypothetical agent at that cell would face, -1 on non-walkable cells.
struct EntropyMap {
  int64_t step = 0;
  std::string destination;
  Grid<double> values;
  double h_max = 0.0;  // log2 of the maximum option count in the scenario

  static constexpr double kSentinel = -1.0;
};

/// Shannon entropy in bits; the 0*log(1/0) terms contribute 0. Throws when
/// the input does not sum to 1 within 1e-9 or has negative entries.
double entropy_of(std::span<const double> probs);

/// Path-choice probabilities (ordered by first opening) for a phantom agent
/// standing at `cell`: travel times and live congestion enter exactly as for
/// real agents, while the ChoiceField influence is marginalized analytically
/// instead of sampled. Returns {1} where the tactical layer is bypassed (the
/// destination's own region, or standing on an opening, which commits the
/// next target) and an empty vector where the destination is unreachable.
/// The phantom walks at the population reference speed, occupies no cell and
/// perturbs nothing.
std::vector<double> choice_distribution_at(const WorldState& w, Cell cell,
                                           const std::string& destination);

/// Same distribution with full option identities, for diagnostics.
ChoiceDistribution scored_distribution_at(const WorldState& w, Cell cell,
                                          const std::string& destination);

/// Largest number of aggregated options any region offers for `destination`.
int max_option_count(const WorldState& w, const std::string& destination);

EntropyMap entropy_map(const WorldState& w, const std::string& destination);

/// CSV: header line `# entropy-map step=<step> dest=<id> hmax=<h:6dp>`, then
/// height rows of width comma-separated values at 6 decimals, row y=0 first,
/// sentinel -1.000000.
void export_csv(const EntropyMap& m, const std::filesystem::path& path);

/// 8-bit binary PGM, pixel = round(255*H/h_max); sentinel cells render 0 and
/// are flagged in a companion `<path>.mask.pgm` (255 = sentinel), noted in
/// the image header comment.
void export_image(const EntropyMap& m, const std::filesystem::path& path);

/// Shared CSV layout for floor-field debug dumps (unreachable cells -1).
void export_field_csv(const FloorField& f, const std::filesystem::path& path);

}  // namespace wayfield
