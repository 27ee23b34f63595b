#include "densepix/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace densepix {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Light-to-dark blue ramp for ordering positions.
Rgb sequential(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto lerp = [t](double a, double b) {
    return static_cast<std::uint8_t>(std::lround(a + (b - a) * t));
  };
  return {lerp(0xde, 0x08), lerp(0xeb, 0x30), lerp(0xf7, 0x6b)};
}

struct MapTransform {
  double scale = 1.0;
  double min_x = 0.0;
  double max_y = 0.0;
  double ox = 0.0;
  double oy = 0.0;

  Point operator()(Point p) const {
    return {ox + (p.x - min_x) * scale, oy + (max_y - p.y) * scale};
  }
};

void polygon_path(std::ostringstream& out, const Region& region, const MapTransform& tf) {
  out << "d=\"";
  for (const Polygon& part : region.parts) {
    for (const Ring& ring : part) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point p = tf(ring[i]);
        out << (i == 0 ? "M" : "L") << num(p.x) << ' ' << num(p.y);
      }
      out << 'Z';
    }
  }
  out << '"';
}

}  // namespace

std::string render_svg(const PixelLayout& layout, const GlyphData* glyph, const PathData* path,
                       const MapGeometry* map, const SvgOptions& options) {
  const double m = options.margin;
  double max_tick = 0.0;
  for (double h : layout.tick_heights) max_tick = std::max(max_tick, h);
  const double plot_top = m + max_tick + options.timeline_spacing;
  const double plot_width = layout.total_width();
  const double plot_height = layout.total_height();
  const bool inset = map && map->regions && (glyph || path);
  const double width = m + plot_width + m + (inset ? options.inset_size + m : 0.0);
  const double height =
      std::max(plot_top + plot_height + m, inset ? plot_top + options.inset_size + m : 0.0);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' '
      << num(height) << "\">\n";
  out << "<defs>\n"
         "<pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"4\" height=\"4\" "
         "patternTransform=\"rotate(45)\">"
         "<rect width=\"4\" height=\"4\" fill=\"#ffffff\"/>"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"4\" stroke=\"#555555\" stroke-width=\"1.5\"/>"
         "</pattern>\n"
         "</defs>\n";

  std::vector<double> x_at(layout.cols() + 1, m);
  for (std::size_t t = 0; t < layout.cols(); ++t) x_at[t + 1] = x_at[t] + layout.column_widths[t];

  out << "<g class=\"timeline\">\n";
  const double baseline = m + max_tick;
  for (std::size_t t = 0; t < layout.cols(); ++t) {
    const double h = layout.tick_heights[t];
    out << "<rect class=\"tick\" x=\"" << num(x_at[t]) << "\" y=\"" << num(baseline - h)
        << "\" width=\"" << num(layout.column_widths[t]) << "\" height=\"" << num(h)
        << "\" fill=\"#888888\" stroke=\"#ffffff\" stroke-width=\"0.25\"><title>"
        << escape(layout.timestamps.empty() ? std::string() : layout.timestamps[t])
        << "</title></rect>\n";
  }
  out << "</g>\n";

  out << "<g class=\"pixels\">\n";
  for (const Band& band : layout.bands()) {
    const double y = plot_top + band.y;
    if (band.kind == BandKind::kGap) {
      out << "<rect class=\"gap\" x=\"" << num(m) << "\" y=\"" << num(y) << "\" width=\""
          << num(plot_width) << "\" height=\"" << num(band.height)
          << "\" fill=\"url(#hatch)\"/>\n";
      continue;
    }
    out << "<g class=\"row\" data-id=\"" << escape(layout.row_order[band.row]) << "\">";
    for (std::size_t t = 0; t < layout.cols(); ++t) {
      out << "<rect class=\"cell\" x=\"" << num(x_at[t]) << "\" y=\"" << num(y)
          << "\" width=\"" << num(layout.column_widths[t]) << "\" height=\""
          << num(band.height) << "\" fill=\""
          << color_map(layout.cell(band.row, t), layout.color_domain).hex() << "\"/>";
    }
    out << "</g>\n";
  }
  out << "</g>\n";

  if (inset) {
    const RegionSet& regions = *map->regions;
    const BoundingBox box = regions.bounds();
    const double span = std::max({box.max_x - box.min_x, box.max_y - box.min_y, 1e-300});
    MapTransform tf{options.inset_size / span, box.min_x, box.max_y, m + plot_width + m, plot_top};
    out << "<g class=\"map\">\n";
    out << "<rect class=\"inset-frame\" x=\"" << num(tf.ox) << "\" y=\"" << num(tf.oy)
        << "\" width=\"" << num(options.inset_size) << "\" height=\""
        << num(options.inset_size) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";

    if (glyph) {
      for (std::size_t i = 0; i < glyph->ids.size(); ++i) {
        const auto index = regions.index_of(glyph->ids[i]);
        if (!index) continue;
        out << "<path class=\"glyph-region\" data-id=\"" << escape(glyph->ids[i]) << "\" ";
        polygon_path(out, regions[*index], tf);
        out << " fill=\"" << color_map(glyph->values[i], glyph->color_domain).hex()
            << "\" stroke=\"#ffffff\" stroke-width=\"0.25\"/>\n";
      }
      if (map->graph) {
        std::map<std::pair<std::size_t, std::size_t>, const SharedBorder*> by_edge;
        for (const SharedBorder& b : map->borders) by_edge[{b.u, b.v}] = &b;
        for (const HaloStroke& h : glyph->borders) {
          const auto u = map->graph->index_of(h.u);
          const auto v = map->graph->index_of(h.v);
          if (!u || !v) continue;
          auto it = by_edge.find(std::minmax(*u, *v));
          if (it == by_edge.end()) continue;
          for (const Segment& s : it->second->segments) {
            const Point a = tf(s.a);
            const Point b = tf(s.b);
            out << "<line class=\"halo\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y)
                << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y)
                << "\" stroke=\"#000000\" stroke-linecap=\"round\" stroke-width=\""
                << num(h.width) << "\"/>\n";
          }
        }
      }
    } else if (path) {
      for (std::size_t i = 0; i < path->ids.size(); ++i) {
        const auto index = regions.index_of(path->ids[i]);
        if (!index) continue;
        out << "<path class=\"path-region\" data-id=\"" << escape(path->ids[i]) << "\" ";
        polygon_path(out, regions[*index], tf);
        out << " fill=\"" << sequential(path->positions[i]).hex()
            << "\" stroke=\"#ffffff\" stroke-width=\"0.25\"/>\n";
      }
    }

    if (path) {
      for (std::size_t i = 0; i + 1 < path->points.size(); ++i) {
        const Point a = tf(path->points[i]);
        const Point b = tf(path->points[i + 1]);
        const bool hatched = path->hatched[i];
        out << "<line class=\"" << (hatched ? "path-segment hatched" : "path-segment")
            << "\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x)
            << "\" y2=\"" << num(b.y) << "\" stroke=\"#d62728\" stroke-width=\"1.5\""
            << (hatched ? " stroke-dasharray=\"2 2\"" : "") << "/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace densepix
