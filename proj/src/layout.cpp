#include "densepix/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "densepix/error.hpp"

namespace densepix {

ColorDomain global_color_domain(const TimeSeriesMatrix& ts) {
  const auto values = ts.values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi};
}

Rgb color_map(double value, ColorDomain domain) {
  if (!(domain.max > domain.min)) return viridis(0.5);
  return viridis((value - domain.min) / (domain.max - domain.min));
}

std::vector<double> column_widths(const MoranProfile& profile, double total, double min_frac) {
  const std::size_t t_count = profile.normalized.size();
  if (t_count == 0) throw Error(ErrorCode::kInvalidArgument, "empty Moran profile");
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "total width must be positive");
  if (!(min_frac > 0.0 && min_frac <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "infeasible minimum width: min_frac must lie in (0, 1]");
  }
  const double uniform = total / static_cast<double>(t_count);
  const double w_min = min_frac * uniform;
  const double slack = total - w_min * static_cast<double>(t_count);
  const double mass = std::accumulate(profile.normalized.begin(), profile.normalized.end(), 0.0);

  std::vector<double> widths(t_count, w_min);
  for (std::size_t t = 0; t < t_count; ++t) {
    widths[t] += mass > 0.0 ? slack * (profile.normalized[t] / mass) : slack / t_count;
  }
  return widths;
}

std::vector<double> tick_profile(std::span<const double> widths, double max_height) {
  std::vector<double> heights(widths.size(), max_height);
  if (widths.empty()) return heights;
  const double widest = *std::max_element(widths.begin(), widths.end());
  if (widest <= 0.0) return heights;
  for (std::size_t t = 0; t < widths.size(); ++t) heights[t] = max_height * widths[t] / widest;
  return heights;
}

std::size_t PixelLayout::gap_count() const {
  return static_cast<std::size_t>(std::count(gap_after_row.begin(), gap_after_row.end(), true));
}

std::vector<Band> PixelLayout::bands() const {
  std::vector<Band> out;
  out.reserve(rows() + gap_count());
  double y = 0.0;
  for (std::size_t r = 0; r < rows(); ++r) {
    out.push_back({BandKind::kRow, r, y, row_height});
    y += row_height;
    if (gap_after_row[r]) {
      out.push_back({BandKind::kGap, r, y, gap_height});
      y += gap_height;
    }
  }
  return out;
}

double PixelLayout::total_width() const {
  return std::accumulate(column_widths.begin(), column_widths.end(), 0.0);
}

double PixelLayout::total_height() const {
  return row_height * static_cast<double>(rows()) + gap_height * static_cast<double>(gap_count());
}

PixelLayout build_layout(const TimeSeriesMatrix& ts, const Ordering& ordering,
                         const GapMask& gaps, const MoranProfile& profile,
                         const LayoutConfig& config) {
  ordering.require_ids(ts.region_ids());
  const std::size_t n = ts.rows();
  const std::size_t t_count = ts.cols();
  if (gaps.epsilon.size() != (n == 0 ? 0 : n - 1)) {
    throw Error(ErrorCode::kIdMismatch, "gap mask length does not match the ordering");
  }
  if (profile.normalized.size() != t_count) {
    throw Error(ErrorCode::kIdMismatch, "Moran profile length does not match the timesteps");
  }

  PixelLayout layout;
  layout.row_order = ordering.sequence();
  layout.gap_after_row.assign(n, false);
  for (std::size_t i = 0; i + 1 < n; ++i) layout.gap_after_row[i] = gaps.epsilon[i];
  if (config.distortion) {
    layout.column_widths = column_widths(profile, config.total_width, config.min_frac);
  } else {
    layout.column_widths.assign(t_count, config.total_width / static_cast<double>(t_count));
  }
  layout.tick_heights = tick_profile(layout.column_widths, config.max_tick_height);
  layout.timestamps = ts.timestamps();
  layout.color_domain = global_color_domain(ts);
  layout.row_height = config.row_height;
  layout.gap_height = config.gap_rows * config.row_height;
  layout.cells.reserve(n * t_count);
  for (const std::string& id : layout.row_order) {
    const auto row = ts.row(*ts.index_of(id));
    layout.cells.insert(layout.cells.end(), row.begin(), row.end());
  }
  return layout;
}

std::string_view to_string(Stat stat) {
  switch (stat) {
    case Stat::kMin: return "min";
    case Stat::kMean: return "mean";
    case Stat::kMax: return "max";
  }
  return "mean";
}

Stat parse_stat(std::string_view name) {
  if (name == "min") return Stat::kMin;
  if (name == "mean") return Stat::kMean;
  if (name == "max") return Stat::kMax;
  throw Error(ErrorCode::kInvalidArgument, "unknown statistic '" + std::string(name) + "'");
}

std::vector<HaloStroke> halo_strokes(std::span<const BorderWeight> borders,
                                     const ContiguityGraph& g, const HaloConfig& config) {
  const std::size_t n = g.size();
  std::vector<HaloStroke> out;
  out.reserve(borders.size());
  for (const BorderWeight& b : borders) {
    double width = config.min_width;
    if (n >= 3) {
      width += (config.max_width - config.min_width) * static_cast<double>(b.weight - 1) /
               static_cast<double>(n - 2);
    }
    out.push_back({g.id(b.u), g.id(b.v), b.weight, width});
  }
  return out;
}

GlyphData aggregate_selection(const Brush& brush, const TimeSeriesMatrix& ts,
                              const Ordering& ordering, std::span<const HaloStroke> halos) {
  if (brush.row_first > brush.row_last || brush.row_last >= ordering.size() ||
      brush.time_first > brush.time_last || brush.time_last >= ts.cols()) {
    throw Error(ErrorCode::kOutOfRange, "brush outside the layout");
  }
  GlyphData glyph;
  glyph.stat = brush.stat;
  glyph.color_domain = global_color_domain(ts);
  for (std::size_t r = brush.row_first; r <= brush.row_last; ++r) {
    const std::string& id = ordering[r];
    const auto row_index = ts.index_of(id);
    if (!row_index) throw Error(ErrorCode::kIdMismatch, "no series for region '" + id + "'");
    const auto row = ts.row(*row_index).subspan(brush.time_first,
                                                brush.time_last - brush.time_first + 1);
    double value = 0.0;
    switch (brush.stat) {
      case Stat::kMin: value = *std::min_element(row.begin(), row.end()); break;
      case Stat::kMax: value = *std::max_element(row.begin(), row.end()); break;
      case Stat::kMean:
        value = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
        break;
    }
    glyph.ids.push_back(id);
    glyph.values.push_back(value);
  }
  for (const HaloStroke& h : halos) {
    const std::size_t pu = ordering.position(h.u);
    const std::size_t pv = ordering.position(h.v);
    if (pu >= brush.row_first && pu <= brush.row_last && pv >= brush.row_first &&
        pv <= brush.row_last) {
      glyph.borders.push_back(h);
    }
  }
  return glyph;
}

PathData ordering_path(const Ordering& ordering, const RegionSet& regions, const GapMask& gaps) {
  ordering.require_ids(regions.ids());
  const std::size_t n = ordering.size();
  if (gaps.epsilon.size() != (n == 0 ? 0 : n - 1)) {
    throw Error(ErrorCode::kIdMismatch, "gap mask length does not match the ordering");
  }
  PathData path;
  path.ids = ordering.sequence();
  for (std::size_t i = 0; i < n; ++i) {
    path.points.push_back(regions[*regions.index_of(ordering[i])].centroid);
    path.positions.push_back(n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0);
  }
  path.hatched = gaps.epsilon;
  return path;
}

}  // namespace densepix
