#pragma once

#include <string>

namespace wayfield {

/// Scenario text for the four-room benchmark: rooms stacked top to bottom,
/// a start area spanning the top, the destination at the bottom right, one
/// 2.4 m opening into the second room and three 0.8 m openings at each of
/// the remaining transitions, the third transition mirroring the second.
std::string benchmark_scenario_text();

}  // namespace wayfield
