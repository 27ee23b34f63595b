#include "densepix/sfc.hpp"

#include <algorithm>
#include <bit>

#include "densepix/error.hpp"

namespace densepix {

namespace {

// Classic distance-to-coordinate walk for an n x n Hilbert curve, n = 2^k.
Cell hilbert_cell(int n, int index) {
  int x = 0;
  int y = 0;
  int t = index;
  for (int s = 1; s < n; s *= 2) {
    const int rx = 1 & (t / 2);
    const int ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {y, x};
}

Cell morton_cell(int index) {
  int x = 0;
  int y = 0;
  for (int bit = 0; (index >> (2 * bit)) != 0; ++bit) {
    x |= ((index >> (2 * bit)) & 1) << bit;
    y |= ((index >> (2 * bit + 1)) & 1) << bit;
  }
  return {x, y};
}

}  // namespace

std::vector<Cell> curve_cells(Curve curve, int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
  }
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(width) * height);
  if (curve == Curve::kDiagonal) {
    for (int k = 0; k <= width + height - 2; ++k) {
      for (int x = std::max(0, k - height + 1); x <= std::min(k, width - 1); ++x) {
        cells.push_back({x, k - x});
      }
    }
    return cells;
  }
  if (width != height || !std::has_single_bit(static_cast<unsigned>(width))) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(to_string(curve)) + " curve needs a square power-of-two grid");
  }
  const int count = width * height;
  for (int i = 0; i < count; ++i) {
    cells.push_back(curve == Curve::kHilbert ? hilbert_cell(width, i) : morton_cell(i));
  }
  return cells;
}

Ordering sfc_order(const RegionSet& regions, Curve curve) {
  if (!regions.grid_dims()) {
    throw Error(ErrorCode::kInvalidArgument, "space-filling curves need grid dimensions");
  }
  const GridDims dims = *regions.grid_dims();
  std::vector<std::string> sequence;
  for (const Cell& c : curve_cells(curve, dims.width, dims.height)) {
    std::string id = grid_id(c.x, c.y);
    if (!regions.index_of(id)) {
      throw Error(ErrorCode::kIdMismatch, "grid cell '" + id + "' missing from regions");
    }
    sequence.push_back(std::move(id));
  }
  return Ordering(std::move(sequence), SfcProvenance{curve});
}

}  // namespace densepix
