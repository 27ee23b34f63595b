#include "densepix/serialize.hpp"

#include "densepix/error.hpp"

namespace densepix {

using nlohmann::json;

namespace {

json extent_json(const std::optional<TemporalExtent>& extent) {
  if (!extent) return nullptr;
  return json::array({extent->start, extent->end});
}

json halo_json(const std::vector<HaloStroke>& strokes) {
  json out = json::array();
  for (const HaloStroke& h : strokes) {
    out.push_back({{"u", h.u}, {"v", h.v}, {"w", h.weight}, {"width", h.width}});
  }
  return out;
}

}  // namespace

json ordering_to_json(const Ordering& ordering) {
  json provenance = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AhcProvenance>) {
          return {{"kind", "ahc"},
                  {"alpha", p.alpha},
                  {"linkage", to_string(p.linkage)},
                  {"extent", extent_json(p.extent)}};
        } else if constexpr (std::is_same_v<T, SfcProvenance>) {
          return {{"kind", "sfc"}, {"curve", to_string(p.curve)}};
        } else {
          return {{"kind", "external"}};
        }
      },
      ordering.provenance());
  return {{"sequence", ordering.sequence()}, {"provenance", std::move(provenance)}};
}

Ordering ordering_from_json(const json& doc) {
  try {
    std::vector<std::string> sequence = doc.at("sequence").get<std::vector<std::string>>();
    Provenance provenance = ExternalProvenance{};
    if (doc.contains("provenance") && doc["provenance"].is_object()) {
      const json& p = doc["provenance"];
      const std::string kind = p.value("kind", "external");
      if (kind == "ahc") {
        AhcProvenance ahc;
        ahc.alpha = p.value("alpha", 0.0);
        ahc.linkage = parse_linkage(p.value("linkage", "ward"));
        if (p.contains("extent") && p["extent"].is_array()) {
          ahc.extent = TemporalExtent{p["extent"][0].get<std::size_t>(),
                                      p["extent"][1].get<std::size_t>()};
        }
        provenance = ahc;
      } else if (kind == "sfc") {
        provenance = SfcProvenance{parse_curve(p.value("curve", "hilbert"))};
      }
    }
    return Ordering(std::move(sequence), std::move(provenance));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed ordering JSON: ") + e.what());
  }
}

json quality_to_json(const QualityReport& report, const ContiguityGraph& g) {
  json borders = json::array();
  for (const BorderWeight& b : report.borders) {
    borders.push_back({{"u", g.id(b.u)}, {"v", g.id(b.v)}, {"w", b.weight}});
  }
  json gaps = json::array();
  for (bool e : report.gaps.epsilon) gaps.push_back(e);
  return {{"beta", report.beta},
          {"gaps", std::move(gaps)},
          {"hops", report.gaps.hop_distances},
          {"borders", std::move(borders)},
          {"moran", {{"raw", report.moran.raw}, {"normalized", report.moran.normalized}}}};
}

json layout_to_json(const PixelLayout& layout, bool resolve_colors) {
  json gaps = json::array();
  for (bool g : layout.gap_after_row) gaps.push_back(g);
  json bands = json::array();
  for (const Band& b : layout.bands()) {
    if (b.kind == BandKind::kRow) {
      bands.push_back({{"kind", "row"}, {"id", layout.row_order[b.row]}, {"y", b.y},
                       {"height", b.height}});
    } else {
      bands.push_back({{"kind", "gap"}, {"after", layout.row_order[b.row]}, {"y", b.y},
                       {"height", b.height}});
    }
  }
  json out = {{"row_order", layout.row_order},
              {"gaps", std::move(gaps)},
              {"widths", layout.column_widths},
              {"ticks", layout.tick_heights},
              {"timestamps", layout.timestamps},
              {"color_domain", json::array({layout.color_domain.min, layout.color_domain.max})},
              {"row_height", layout.row_height},
              {"gap_height", layout.gap_height},
              {"bands", std::move(bands)},
              {"cells", layout.cells}};
  if (resolve_colors) {
    json colors = json::array();
    for (double v : layout.cells) colors.push_back(color_map(v, layout.color_domain).hex());
    out["colors"] = std::move(colors);
  }
  return out;
}

json glyph_to_json(const GlyphData& glyph) {
  json regions = json::array();
  for (std::size_t i = 0; i < glyph.ids.size(); ++i) {
    regions.push_back({{"id", glyph.ids[i]},
                       {"value", glyph.values[i]},
                       {"color", color_map(glyph.values[i], glyph.color_domain).hex()}});
  }
  return {{"stat", to_string(glyph.stat)},
          {"color_domain", json::array({glyph.color_domain.min, glyph.color_domain.max})},
          {"regions", std::move(regions)},
          {"borders", halo_json(glyph.borders)}};
}

json path_to_json(const PathData& path) {
  json points = json::array();
  for (const Point& p : path.points) points.push_back(json::array({p.x, p.y}));
  json hatched = json::array();
  for (bool h : path.hatched) hatched.push_back(h);
  return {{"ids", path.ids},
          {"points", std::move(points)},
          {"hatched", std::move(hatched)},
          {"positions", path.positions}};
}

}  // namespace densepix
