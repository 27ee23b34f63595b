#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "densepix/geodata.hpp"
#include "densepix/ordering.hpp"
#include "densepix/quality.hpp"

namespace densepix {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;  // "#RRGGBB"
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Viridis at t in [0, 1] (clamped) from the published 256-entry table;
/// t selects bin floor(256 t), the last bin taking t = 1.
Rgb viridis(double t);
// Linear-RGB relative luminance of a table entry, before 8-bit rounding.
double viridis_luminance(double t);

struct ColorDomain {
  double min = 0.0;
  double max = 1.0;

  friend bool operator==(const ColorDomain&, const ColorDomain&) = default;
};

ColorDomain global_color_domain(const TimeSeriesMatrix& ts);

/// Viridis with a linear domain; a degenerate domain maps to the midpoint.
Rgb color_map(double value, ColorDomain domain);

/// Distorted column widths: each column keeps min_frac of the uniform width
/// and the remaining slack is shared in proportion to the normalized Moran
/// profile, so the widths sum to `total`.
std::vector<double> column_widths(const MoranProfile& profile, double total, double min_frac);

/// Timeline tick heights proportional to the widths; the widest column gets
/// `max_height`.
std::vector<double> tick_profile(std::span<const double> widths, double max_height);

struct LayoutConfig {
  double total_width = 800.0;
  double min_frac = 0.2;
  bool distortion = true;
  double row_height = 4.0;
  double gap_rows = 1.5;  // separator height in rows
  double max_tick_height = 20.0;
};

enum class BandKind { kRow, kGap };

struct Band {
  BandKind kind = BandKind::kRow;
  std::size_t row = 0;  // for gaps: the row above the separator
  double y = 0.0;
  double height = 0.0;
};

struct PixelLayout {
  std::vector<std::string> row_order;
  std::vector<bool> gap_after_row;
  std::vector<double> column_widths;
  std::vector<double> tick_heights;
  std::vector<std::string> timestamps;
  ColorDomain color_domain;
  std::vector<double> cells;  // rows x cols in row_order
  double row_height = 4.0;
  double gap_height = 6.0;

  std::size_t rows() const { return row_order.size(); }
  std::size_t cols() const { return column_widths.size(); }
  double cell(std::size_t row, std::size_t col) const { return cells[row * cols() + col]; }
  std::size_t gap_count() const;
  // Rows and hatched separators top to bottom.
  std::vector<Band> bands() const;
  double total_width() const;
  double total_height() const;
};

PixelLayout build_layout(const TimeSeriesMatrix& ts, const Ordering& ordering,
                         const GapMask& gaps, const MoranProfile& profile,
                         const LayoutConfig& config = {});

enum class Stat { kMin, kMean, kMax };

std::string_view to_string(Stat stat);
Stat parse_stat(std::string_view name);

/// Inclusive row (layout order) and timestep ranges.
struct Brush {
  std::size_t row_first = 0;
  std::size_t row_last = 0;
  std::size_t time_first = 0;
  std::size_t time_last = 0;
  Stat stat = Stat::kMean;
};

struct HaloConfig {
  double min_width = 0.5;
  double max_width = 4.0;
};

struct HaloStroke {
  std::string u;
  std::string v;
  int weight = 0;
  double width = 0.0;
};

/// Stroke widths linear in ordering distance: weight 1 gets min_width,
/// weight N-1 gets max_width.
std::vector<HaloStroke> halo_strokes(std::span<const BorderWeight> borders,
                                     const ContiguityGraph& g, const HaloConfig& config = {});

struct GlyphData {
  std::vector<std::string> ids;
  std::vector<double> values;
  Stat stat = Stat::kMean;
  ColorDomain color_domain;
  // Halos on edges whose both regions are selected.
  std::vector<HaloStroke> borders;
};

GlyphData aggregate_selection(const Brush& brush, const TimeSeriesMatrix& ts,
                              const Ordering& ordering,
                              std::span<const HaloStroke> halos = {});

struct PathData {
  std::vector<std::string> ids;
  std::vector<Point> points;      // centroids in ordering sequence
  std::vector<bool> hatched;      // per segment, set at trustworthiness gaps
  std::vector<double> positions;  // n / (N - 1) per ordering index
};

PathData ordering_path(const Ordering& ordering, const RegionSet& regions, const GapMask& gaps);

}  // namespace densepix
