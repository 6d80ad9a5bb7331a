#include "wayfield/benchmark.hpp"

#include <string>
#include <vector>

namespace wayfield {

namespace {

constexpr int kRoomWidth = 30;   // interior cells (12 m)
constexpr int kRoomHeight = 12;  // interior cells (4.8 m)
constexpr int kWidth = kRoomWidth + 2;
constexpr int kHeight = 4 * kRoomHeight + 5;

void paint(std::vector<std::string>& rows, int y, int x0, int x1, char symbol) {
  for (int x = x0; x <= x1; ++x) rows[static_cast<size_t>(y)][static_cast<size_t>(x)] = symbol;
}

}  // namespace

std::string benchmark_scenario_text() {
  std::vector<std::string> rows(kHeight, std::string(kWidth, '.'));

  paint(rows, 0, 0, kWidth - 1, '#');
  paint(rows, kHeight - 1, 0, kWidth - 1, '#');
  for (int y = 0; y < kHeight; ++y) {
    rows[static_cast<size_t>(y)][0] = '#';
    rows[static_cast<size_t>(y)][kWidth - 1] = '#';
  }

  const int wall1 = 1 + kRoomHeight;      // 13: rooms 1|2
  const int wall2 = wall1 + kRoomHeight + 1;  // 26: rooms 2|3
  const int wall3 = wall2 + kRoomHeight + 1;  // 39: rooms 3|4
  paint(rows, wall1, 1, kWidth - 2, '#');
  paint(rows, wall2, 1, kWidth - 2, '#');
  paint(rows, wall3, 1, kWidth - 2, '#');

  // Transition 1->2: a single 6-cell (2.4 m) opening.
  paint(rows, wall1, 13, 18, 'a');
  // Transition 2->3: three 2-cell (0.8 m) openings shifted to the right.
  // These columns put cells at equal travel time from all three doors inside
  // rooms 2 and 3, so the equidistance band reaches the full log2(3) bits.
  paint(rows, wall2, 16, 17, 'b');
  paint(rows, wall2, 20, 21, 'c');
  paint(rows, wall2, 24, 25, 'd');
  // Transition 3->4 mirrors the previous one (x -> width-1-x).
  paint(rows, wall3, 6, 7, 'e');
  paint(rows, wall3, 10, 11, 'f');
  paint(rows, wall3, 14, 15, 'g');

  paint(rows, 1, 1, kWidth - 2, 'S');
  paint(rows, kHeight - 2, kWidth - 5, kWidth - 2, '1');

  std::string out;
  out += "# four-room benchmark: rooms of 30x12 cells (12 m x 4.8 m) stacked top to bottom,\n";
  out += "# start area across the top room, destination at the bottom right.\n";
  out += "# transitions: one 6-cell opening (2.4 m), then three 2-cell openings (0.8 m)\n";
  out += "# per transition, the third transition mirroring the second.\n";
  out += "[grid]\n";
  for (const std::string& row : rows) {
    out += row;
    out += '\n';
  }
  out += "[legend]\n";
  out += "S.inflow = 4.0\n";
  out += "S.destination = 1\n";
  return out;
}

}  // namespace wayfield
