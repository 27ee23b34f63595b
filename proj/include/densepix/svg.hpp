#pragma once

#include <string>
#include <vector>

#include "densepix/geodata.hpp"
#include "densepix/layout.hpp"

namespace densepix {

/// Region geometry for the map inset. `borders` comes from shared_borders()
/// on the same graph and supplies the halo line work.
struct MapGeometry {
  const RegionSet* regions = nullptr;
  const ContiguityGraph* graph = nullptr;
  std::vector<SharedBorder> borders;
};

struct SvgOptions {
  double margin = 10.0;
  double timeline_spacing = 4.0;
  double inset_size = 200.0;
};

/// Deterministic SVG 1.1: bar-profile timeline on top, one rect per cell,
/// one hatch-filled band per gap, and, given map geometry, an inset with the
/// glyph choropleth, its halos and the ordering path.
std::string render_svg(const PixelLayout& layout, const GlyphData* glyph = nullptr,
                       const PathData* path = nullptr, const MapGeometry* map = nullptr,
                       const SvgOptions& options = {});

}  // namespace densepix
