#include "densepix/geodata.hpp"

#include "densepix/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

namespace densepix {

using nlohmann::json;

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kMissingId: return "missing_id";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kNonArealGeometry: return "non_areal_geometry";
    case ErrorCode::kUnknownRegion: return "unknown_region";
    case ErrorCode::kMissingRegion: return "missing_region";
    case ErrorCode::kBadValue: return "bad_value";
    case ErrorCode::kNonMonotoneTime: return "non_monotone_time";
    case ErrorCode::kIdMismatch: return "id_mismatch";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kUnknownSession: return "unknown_session";
  }
  return "unknown";
}

double BoundingBox::diagonal() const {
  return std::hypot(max_x - min_x, max_y - min_y);
}

double signed_ring_area(const Ring& ring) {
  const std::size_t n = ring.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon& polygon) {
  double area = 0.0;
  for (std::size_t r = 0; r < polygon.size(); ++r) {
    const double a = std::abs(signed_ring_area(polygon[r]));
    area += r == 0 ? a : -a;
  }
  return area;
}

Point polygon_centroid(const Polygon& polygon) {
  double area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t r = 0; r < polygon.size(); ++r) {
    const Ring& ring = polygon[r];
    const double signed_area = signed_ring_area(ring);
    if (signed_area == 0.0) continue;
    double rx = 0.0;
    double ry = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p = ring[i];
      const Point& q = ring[(i + 1) % n];
      const double cross = p.x * q.y - q.x * p.y;
      rx += (p.x + q.x) * cross;
      ry += (p.y + q.y) * cross;
    }
    // rx / (6 * signed_area) is the ring centroid. The outer ring counts
    // positive and holes negative whatever their winding.
    const double weight = (r == 0 ? 1.0 : -1.0) * std::abs(signed_area);
    cx += weight * rx / (6.0 * signed_area);
    cy += weight * ry / (6.0 * signed_area);
    area += weight;
  }
  if (area > 0.0) return {cx / area, cy / area};

  double sx = 0.0;
  double sy = 0.0;
  std::size_t count = 0;
  for (const Ring& ring : polygon) {
    for (const Point& p : ring) {
      sx += p.x;
      sy += p.y;
      ++count;
    }
  }
  return count ? Point{sx / count, sy / count} : Point{};
}

namespace {

BoundingBox ring_bounds(const Ring& ring) {
  BoundingBox box{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const Point& p : ring) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

void validate_ring(const std::string& id, const Ring& ring) {
  std::vector<Point> distinct(ring.begin(), ring.end());
  std::sort(distinct.begin(), distinct.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    throw Error(ErrorCode::kNonArealGeometry,
                "region '" + id + "' has a ring with fewer than 3 distinct vertices");
  }
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kNonArealGeometry,
                  "region '" + id + "' has a non-finite coordinate");
    }
  }
}

}  // namespace

RegionSet::RegionSet(std::vector<Region> regions, std::optional<GridDims> grid_dims)
    : regions_(std::move(regions)), grid_dims_(grid_dims) {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    Region& region = regions_[i];
    if (region.id.empty()) {
      throw Error(ErrorCode::kMissingId, "region " + std::to_string(i) + " has an empty id");
    }
    if (!index_.emplace(region.id, i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate region id '" + region.id + "'");
    }
    if (region.parts.empty()) {
      throw Error(ErrorCode::kNonArealGeometry, "region '" + region.id + "' has no polygon");
    }
    const Polygon* largest = nullptr;
    double largest_area = -1.0;
    for (const Polygon& part : region.parts) {
      if (part.empty()) {
        throw Error(ErrorCode::kNonArealGeometry,
                    "region '" + region.id + "' has a polygon without rings");
      }
      for (const Ring& ring : part) validate_ring(region.id, ring);
      const double area = polygon_area(part);
      if (area > largest_area) {
        largest_area = area;
        largest = &part;
      }
    }
    region.centroid = polygon_centroid(*largest);
  }
  if (grid_dims_ && static_cast<std::size_t>(grid_dims_->width) *
                            static_cast<std::size_t>(grid_dims_->height) !=
                        regions_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "grid dimensions do not match region count");
  }
}

std::vector<std::string> RegionSet::ids() const {
  std::vector<std::string> out;
  out.reserve(regions_.size());
  for (const Region& r : regions_) out.push_back(r.id);
  return out;
}

std::optional<std::size_t> RegionSet::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BoundingBox RegionSet::bounds() const {
  BoundingBox box{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const Region& region : regions_) {
    for (const Polygon& part : region.parts) {
      for (const Ring& ring : part) {
        const BoundingBox b = ring_bounds(ring);
        box.min_x = std::min(box.min_x, b.min_x);
        box.min_y = std::min(box.min_y, b.min_y);
        box.max_x = std::max(box.max_x, b.max_x);
        box.max_y = std::max(box.max_y, b.max_y);
      }
    }
  }
  if (regions_.empty()) return {};
  return box;
}

namespace {

Ring parse_ring(const json& coords, const std::string& id) {
  if (!coords.is_array()) {
    throw Error(ErrorCode::kParse, "region '" + id + "': ring is not an array");
  }
  Ring ring;
  ring.reserve(coords.size());
  for (const json& position : coords) {
    if (!position.is_array() || position.size() < 2 || !position[0].is_number() ||
        !position[1].is_number()) {
      throw Error(ErrorCode::kParse, "region '" + id + "': malformed position");
    }
    ring.push_back({position[0].get<double>(), position[1].get<double>()});
  }
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  // Consecutive duplicates contribute zero-length edges.
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  while (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

Polygon parse_polygon(const json& coords, const std::string& id) {
  if (!coords.is_array() || coords.empty()) {
    throw Error(ErrorCode::kNonArealGeometry, "region '" + id + "': empty polygon");
  }
  Polygon polygon;
  for (const json& ring : coords) polygon.push_back(parse_ring(ring, id));
  return polygon;
}

std::string id_to_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number()) return value.dump();
  return {};
}

// Lambert cylindrical equal-area with the standard parallel at the mean
// latitude of the dataset, in metres.
void project_equal_area(std::vector<Region>& regions) {
  constexpr double kEarthRadius = 6371008.8;
  constexpr double kDeg = std::numbers::pi / 180.0;
  double min_lat = 90.0;
  double max_lat = -90.0;
  for (const Region& region : regions)
    for (const Polygon& part : region.parts)
      for (const Ring& ring : part)
        for (const Point& p : ring) {
          min_lat = std::min(min_lat, p.y);
          max_lat = std::max(max_lat, p.y);
        }
  const double cos0 = std::cos(0.5 * (min_lat + max_lat) * kDeg);
  for (Region& region : regions)
    for (Polygon& part : region.parts)
      for (Ring& ring : part)
        for (Point& p : ring) {
          p = {kEarthRadius * p.x * kDeg * cos0,
               kEarthRadius * std::sin(p.y * kDeg) / cos0};
        }
}

}  // namespace

RegionSet load_geojson(std::string_view document, const GeoJsonOptions& options) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("invalid GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(ErrorCode::kParse, "document is not a GeoJSON FeatureCollection");
  }

  std::vector<Region> regions;
  regions.reserve(doc["features"].size());
  std::size_t index = 0;
  for (const json& feature : doc["features"]) {
    const std::string where = "feature " + std::to_string(index++);
    const json* props = nullptr;
    if (feature.contains("properties") && feature["properties"].is_object()) {
      props = &feature["properties"];
    }
    if (!props || !props->contains(options.id_property)) {
      throw Error(ErrorCode::kMissingId,
                  "missing id: " + where + " has no property '" + options.id_property + "'");
    }
    std::string id = id_to_string((*props)[options.id_property]);
    if (id.empty()) {
      throw Error(ErrorCode::kMissingId, "missing id: " + where + " has an empty id");
    }
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw Error(ErrorCode::kNonArealGeometry, "region '" + id + "' has no geometry");
    }
    const json& geometry = feature["geometry"];
    const std::string type = geometry.value("type", "");
    if (!geometry.contains("coordinates")) {
      throw Error(ErrorCode::kNonArealGeometry, "region '" + id + "' has no coordinates");
    }
    const json& coords = geometry["coordinates"];
    Region region{id, {}, {}};
    if (type == "Polygon") {
      region.parts.push_back(parse_polygon(coords, id));
    } else if (type == "MultiPolygon") {
      if (!coords.is_array() || coords.empty()) {
        throw Error(ErrorCode::kNonArealGeometry, "region '" + id + "': empty MultiPolygon");
      }
      for (const json& part : coords) region.parts.push_back(parse_polygon(part, id));
    } else {
      throw Error(ErrorCode::kNonArealGeometry,
                  "region '" + id + "' has non-areal geometry '" + type + "'");
    }
    regions.push_back(std::move(region));
  }
  if (options.project_lonlat) project_equal_area(regions);
  std::optional<GridDims> grid;
  if (doc.contains("grid") && doc["grid"].is_object()) {
    grid = GridDims{doc["grid"].value("width", 0), doc["grid"].value("height", 0)};
  }
  return RegionSet(std::move(regions), grid);
}

std::string to_geojson(const RegionSet& regions, std::string_view id_property) {
  json features = json::array();
  for (const Region& region : regions.regions()) {
    json parts = json::array();
    for (const Polygon& part : region.parts) {
      json rings = json::array();
      for (const Ring& ring : part) {
        json positions = json::array();
        for (const Point& p : ring) positions.push_back({p.x, p.y});
        positions.push_back({ring.front().x, ring.front().y});
        rings.push_back(std::move(positions));
      }
      parts.push_back(std::move(rings));
    }
    json geometry;
    if (parts.size() == 1) {
      geometry = {{"type", "Polygon"}, {"coordinates", parts[0]}};
    } else {
      geometry = {{"type", "MultiPolygon"}, {"coordinates", parts}};
    }
    features.push_back({{"type", "Feature"},
                        {"properties", {{std::string(id_property), region.id}}},
                        {"geometry", std::move(geometry)}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  if (regions.grid_dims()) {
    doc["grid"] = {{"width", regions.grid_dims()->width}, {"height", regions.grid_dims()->height}};
  }
  return doc.dump();
}

std::string grid_id(int x, int y) {
  return std::to_string(x) + "_" + std::to_string(y);
}

RegionSet grid_regions(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid dimensions must be positive");
  }
  std::vector<Region> regions;
  regions.reserve(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double x0 = x;
      const double y0 = y;
      Ring ring{{x0, y0}, {x0 + 1, y0}, {x0 + 1, y0 + 1}, {x0, y0 + 1}};
      regions.push_back({grid_id(x, y), {Polygon{std::move(ring)}}, {}});
    }
  }
  return RegionSet(std::move(regions), GridDims{width, height});
}

std::string_view to_string(Contiguity rule) {
  return rule == Contiguity::kQueen ? "queen" : "rook";
}

Contiguity parse_contiguity(std::string_view name) {
  if (name == "queen") return Contiguity::kQueen;
  if (name == "rook") return Contiguity::kRook;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown contiguity rule '" + std::string(name) + "'");
}

}  // namespace densepix
