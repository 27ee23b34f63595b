#pragma once

#include <json.hpp>

#include "densepix/layout.hpp"
#include "densepix/ordering.hpp"
#include "densepix/quality.hpp"

namespace densepix {

// {sequence: [ids], provenance: {kind: "ahc"|"sfc"|"external", ...}}
nlohmann::json ordering_to_json(const Ordering& ordering);
Ordering ordering_from_json(const nlohmann::json& doc);

// {beta, gaps, hops (-1 = disconnected), borders: [{u, v, w}], moran: {raw, normalized}}
nlohmann::json quality_to_json(const QualityReport& report, const ContiguityGraph& g);

// {row_order, gaps, widths, ticks, timestamps, color_domain, row_height,
//  gap_height, bands, cells[, colors]}
nlohmann::json layout_to_json(const PixelLayout& layout, bool resolve_colors = false);

nlohmann::json glyph_to_json(const GlyphData& glyph);
nlohmann::json path_to_json(const PathData& path);

}  // namespace densepix
