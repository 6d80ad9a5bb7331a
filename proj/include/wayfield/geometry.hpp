#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace wayfield {

inline constexpr double kCellSize = 0.4;  // meters per cell side
inline constexpr double kDiagonalStep = kCellSize * std::numbers::sqrt2;

struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;
};

/// Euclidean distance in cell units.
inline double cell_distance(Cell a, Cell b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Moore neighborhood offsets, row-major. Diagonal moves are subject to the
// corner rule (see step_allowed in scenario.hpp).
inline constexpr std::array<Cell, 8> kNeighborOffsets = {
    {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

inline constexpr bool is_diagonal(Cell offset) {
  return offset.x != 0 && offset.y != 0;
}

/// Row-major rectangular grid with (x, y) addressing, origin top-left.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        cells_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return cells_.empty(); }
  size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }

  size_t index(Cell c) const {
    return static_cast<size_t>(c.y) * static_cast<size_t>(width_) + static_cast<size_t>(c.x);
  }
  Cell cell(size_t index) const {
    return {static_cast<int>(index % static_cast<size_t>(width_)),
            static_cast<int>(index / static_cast<size_t>(width_))};
  }

  T& at(Cell c) { return cells_[index(c)]; }
  const T& at(Cell c) const { return cells_[index(c)]; }

  void fill(const T& value) { cells_.assign(cells_.size(), value); }

  const std::vector<T>& data() const { return cells_; }
  std::vector<T>& data() { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

}  // namespace wayfield
