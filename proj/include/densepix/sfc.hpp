#pragma once

#include <utility>
#include <vector>

#include "densepix/geodata.hpp"
#include "densepix/ordering.hpp"

namespace densepix {

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Traversal of a width x height grid. Hilbert and Morton need a square
/// power-of-two grid. Hilbert starts at (0, 0) and first steps to (0, 1).
/// Morton puts the x bit below the y bit at every level; the diagonal sweep
/// walks anti-diagonals x + y = k upward in k, x ascending within each.
std::vector<Cell> curve_cells(Curve curve, int width, int height);

Ordering sfc_order(const RegionSet& regions, Curve curve);

}  // namespace densepix
