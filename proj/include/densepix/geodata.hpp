#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace densepix {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
  Point a;
  Point b;
};

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  double diagonal() const;
};

// Rings are stored open: the closing vertex of a GeoJSON ring is dropped.
using Ring = std::vector<Point>;
// Outer ring first, holes after it.
using Polygon = std::vector<Ring>;

double signed_ring_area(const Ring& ring);
double polygon_area(const Polygon& polygon);
// Area-weighted centroid; holes subtract. Falls back to the vertex mean for
// degenerate (zero-area) input.
Point polygon_centroid(const Polygon& polygon);

struct Region {
  std::string id;
  std::vector<Polygon> parts;
  Point centroid;  // derived by RegionSet
};

struct GridDims {
  int width = 0;
  int height = 0;

  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Immutable collection of polygon regions with unique ids.
///
/// Construction validates ids and rings and derives each centroid from the
/// largest-area part. Grid fixtures additionally carry their dimensions.
class RegionSet {
 public:
  explicit RegionSet(std::vector<Region> regions,
                     std::optional<GridDims> grid_dims = std::nullopt);

  std::size_t size() const { return regions_.size(); }
  bool empty() const { return regions_.empty(); }
  const Region& operator[](std::size_t i) const { return regions_[i]; }
  std::span<const Region> regions() const { return regions_; }
  std::vector<std::string> ids() const;
  std::optional<std::size_t> index_of(std::string_view id) const;
  const std::optional<GridDims>& grid_dims() const { return grid_dims_; }
  BoundingBox bounds() const;

 private:
  std::vector<Region> regions_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<GridDims> grid_dims_;
};

struct GeoJsonOptions {
  std::string id_property = "id";
  // Treat coordinates as lon/lat degrees and apply a cylindrical equal-area
  // projection before any analysis.
  bool project_lonlat = false;
};

RegionSet load_geojson(std::string_view document, const GeoJsonOptions& options = {});
std::string to_geojson(const RegionSet& regions, std::string_view id_property = "id");

/// Unit-square cells with ids "x_y"; cell (x, y) spans [x, x+1] x [y, y+1].
RegionSet grid_regions(int width, int height);
std::string grid_id(int x, int y);

enum class Contiguity { kQueen, kRook };

std::string_view to_string(Contiguity rule);
Contiguity parse_contiguity(std::string_view name);

/// Undirected adjacency over regions. Edges are stored once as (u, v) with
/// u < v, sorted; neighbor lists are sorted ascending.
class ContiguityGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  ContiguityGraph(std::vector<std::string> ids, std::vector<Edge> edges,
                  Contiguity rule);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  // Throws kUnknownRegion.
  std::size_t require_index(std::string_view id) const;
  std::span<const std::size_t> neighbors(std::size_t i) const { return adjacency_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t u, std::size_t v) const;
  Contiguity rule() const { return rule_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  Contiguity rule_;
};

// 1e-9 of the bounding-box diagonal.
double default_snap_tolerance(const RegionSet& regions);

/// Rook links regions whose boundaries share a segment longer than the
/// tolerance; queen also links regions that only touch at a point.
ContiguityGraph build_contiguity(const RegionSet& regions, Contiguity rule,
                                 std::optional<double> tolerance = std::nullopt);

struct SharedBorder {
  std::size_t u = 0;
  std::size_t v = 0;
  // Point contacts appear as zero-length segments.
  std::vector<Segment> segments;
};

/// Boundary pieces shared by each graph edge, in edge order. Used to draw
/// halos along the actual polygon borders.
std::vector<SharedBorder> shared_borders(const RegionSet& regions,
                                         const ContiguityGraph& graph,
                                         std::optional<double> tolerance = std::nullopt);

/// N regions x T timesteps, row-major, aligned to region_ids.
class TimeSeriesMatrix {
 public:
  TimeSeriesMatrix(std::vector<std::string> region_ids,
                   std::vector<std::string> timestamps, std::vector<double> values,
                   std::string unit = {});

  std::size_t rows() const { return region_ids_.size(); }
  std::size_t cols() const { return timestamps_.size(); }
  double at(std::size_t row, std::size_t t) const { return values_[row * cols() + t]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols(), cols());
  }
  std::vector<double> column(std::size_t t) const;
  std::span<const double> values() const { return values_; }
  const std::vector<std::string>& region_ids() const { return region_ids_; }
  const std::vector<std::string>& timestamps() const { return timestamps_; }
  const std::string& unit() const { return unit_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<std::string> region_ids_;
  std::vector<std::string> timestamps_;
  std::vector<double> values_;
  std::string unit_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Seconds since the Unix epoch for "YYYY-MM-DD" or
/// "YYYY-MM-DDTHH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM]".
double parse_iso8601(std::string_view text);

/// Wide CSV: first column "id", remaining headers are timestamps. Rows come
/// back in RegionSet order.
TimeSeriesMatrix load_timeseries(std::string_view csv, const RegionSet& regions,
                                 std::string unit = {});
std::string to_csv(const TimeSeriesMatrix& ts);

}  // namespace densepix
