#include "densepix/error.hpp"
#include "densepix/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

namespace densepix {

ContiguityGraph::ContiguityGraph(std::vector<std::string> ids, std::vector<Edge> edges,
                                 Contiguity rule)
    : ids_(std::move(ids)), adjacency_(ids_.size()), rule_(rule) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate graph vertex '" + ids_[i] + "'");
    }
  }
  for (Edge e : edges) {
    if (e.first >= ids_.size() || e.second >= ids_.size()) {
      throw Error(ErrorCode::kUnknownRegion, "edge references a missing vertex");
    }
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop on '" + ids_[e.first] + "'");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const Edge& e : edges_) {
    adjacency_[e.first].push_back(e.second);
    adjacency_[e.second].push_back(e.first);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

std::optional<std::size_t> ContiguityGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ContiguityGraph::require_index(std::string_view id) const {
  auto index = index_of(id);
  if (!index) {
    throw Error(ErrorCode::kUnknownRegion, "unknown region '" + std::string(id) + "'");
  }
  return *index;
}

bool ContiguityGraph::has_edge(std::size_t u, std::size_t v) const {
  if (u >= adjacency_.size()) return false;
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

double default_snap_tolerance(const RegionSet& regions) {
  if (regions.empty()) return 0.0;
  return 1e-9 * regions.bounds().diagonal();
}

namespace {

struct EdgeRef {
  std::size_t region;
  Point a;
  Point b;
};

enum class Contact { kNone = 0, kPoint = 1, kSegment = 2 };

struct PairContact {
  Contact kind = Contact::kNone;
  std::vector<Segment> overlaps;
  std::vector<Point> touches;
};

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

Point closest_on_segment(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return a;
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return {a.x + t * dx, a.y + t * dy};
}

bool on_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(p1, q1, q2)) || (d2 == 0 && on_segment(p2, q1, q2)) ||
         (d3 == 0 && on_segment(q1, p1, p2)) || (d4 == 0 && on_segment(q2, p1, p2));
}

struct Classified {
  Contact kind = Contact::kNone;
  Segment piece;
};

Classified classify(const EdgeRef& e, const EdgeRef& f, double tol) {
  const double le = dist(e.a, e.b);
  const double lf = dist(f.a, f.b);
  const EdgeRef& longer = le >= lf ? e : f;
  const EdgeRef& shorter = le >= lf ? f : e;
  const double length = std::max(le, lf);
  if (length > 0.0) {
    const double ux = (longer.b.x - longer.a.x) / length;
    const double uy = (longer.b.y - longer.a.y) / length;
    auto line_dist = [&](Point p) {
      return std::abs((p.x - longer.a.x) * uy - (p.y - longer.a.y) * ux);
    };
    if (line_dist(shorter.a) <= tol && line_dist(shorter.b) <= tol) {
      const double t0 = (shorter.a.x - longer.a.x) * ux + (shorter.a.y - longer.a.y) * uy;
      const double t1 = (shorter.b.x - longer.a.x) * ux + (shorter.b.y - longer.a.y) * uy;
      const double lo = std::max(0.0, std::min(t0, t1));
      const double hi = std::min(length, std::max(t0, t1));
      if (hi - lo > tol) {
        return {Contact::kSegment,
                {{longer.a.x + lo * ux, longer.a.y + lo * uy},
                 {longer.a.x + hi * ux, longer.a.y + hi * uy}}};
      }
    }
  }
  if (segments_intersect(e.a, e.b, f.a, f.b)) {
    // Report the endpoint nearest to the other segment as the contact point.
    Point best = e.a;
    double best_d = dist(e.a, closest_on_segment(e.a, f.a, f.b));
    for (Point p : {e.b}) {
      const double d = dist(p, closest_on_segment(p, f.a, f.b));
      if (d < best_d) best = p, best_d = d;
    }
    for (Point p : {f.a, f.b}) {
      const double d = dist(p, closest_on_segment(p, e.a, e.b));
      if (d < best_d) best = p, best_d = d;
    }
    return {Contact::kPoint, {best, best}};
  }
  double best_d = std::numeric_limits<double>::infinity();
  Point best{};
  for (Point p : {e.a, e.b}) {
    const double d = dist(p, closest_on_segment(p, f.a, f.b));
    if (d < best_d) best = p, best_d = d;
  }
  for (Point p : {f.a, f.b}) {
    const double d = dist(p, closest_on_segment(p, e.a, e.b));
    if (d < best_d) best = p, best_d = d;
  }
  if (best_d <= tol) return {Contact::kPoint, {best, best}};
  return {};
}

using PairKey = std::pair<std::size_t, std::size_t>;

// Buckets every boundary edge into a uniform grid and classifies edge pairs
// of different regions that share a bucket. Each edge pair is examined only
// in the bucket holding the lower-left corner of their box intersection.
std::map<PairKey, PairContact> detect_contacts(const RegionSet& regions, double tol,
                                               bool collect) {
  std::vector<EdgeRef> edges;
  double total_length = 0.0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (const Polygon& part : regions[r].parts) {
      for (const Ring& ring : part) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
          EdgeRef ref{r, ring[i], ring[(i + 1) % ring.size()]};
          total_length += dist(ref.a, ref.b);
          edges.push_back(ref);
        }
      }
    }
  }
  std::map<PairKey, PairContact> contacts;
  if (edges.empty() || regions.size() < 2) return contacts;

  const BoundingBox bounds = regions.bounds();
  const double extent = std::max({bounds.max_x - bounds.min_x, bounds.max_y - bounds.min_y,
                                  std::numeric_limits<double>::min()});
  const double cell =
      std::max({2.0 * total_length / edges.size(), extent / 4096.0, 4.0 * tol});
  auto cell_of = [&](double v, double origin) {
    return static_cast<std::int64_t>(std::floor((v - origin) / cell));
  };
  auto key_of = [](std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ static_cast<std::uint64_t>(iy & 0xffffffff);
  };

  struct Box {
    double x0, y0, x1, y1;
  };
  std::vector<Box> boxes(edges.size());
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeRef& e = edges[i];
    Box b{std::min(e.a.x, e.b.x) - tol, std::min(e.a.y, e.b.y) - tol,
          std::max(e.a.x, e.b.x) + tol, std::max(e.a.y, e.b.y) + tol};
    boxes[i] = b;
    for (std::int64_t ix = cell_of(b.x0, bounds.min_x); ix <= cell_of(b.x1, bounds.min_x); ++ix) {
      for (std::int64_t iy = cell_of(b.y0, bounds.min_y); iy <= cell_of(b.y1, bounds.min_y);
           ++iy) {
        buckets[key_of(ix, iy)].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  for (const auto& [key, members] : buckets) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      const EdgeRef& e = edges[members[i]];
      const Box& be = boxes[members[i]];
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const EdgeRef& f = edges[members[j]];
        if (e.region == f.region) continue;
        const Box& bf = boxes[members[j]];
        const double ix0 = std::max(be.x0, bf.x0);
        const double iy0 = std::max(be.y0, bf.y0);
        if (ix0 > std::min(be.x1, bf.x1) || iy0 > std::min(be.y1, bf.y1)) continue;
        if (key_of(cell_of(ix0, bounds.min_x), cell_of(iy0, bounds.min_y)) != key) continue;

        const PairKey pair = std::minmax(e.region, f.region);
        auto it = contacts.find(pair);
        if (!collect && it != contacts.end() && it->second.kind == Contact::kSegment) continue;
        const Classified c = classify(e, f, tol);
        if (c.kind == Contact::kNone) continue;
        PairContact& pc = contacts[pair];
        pc.kind = std::max(pc.kind, c.kind);
        if (collect) {
          if (c.kind == Contact::kSegment) {
            pc.overlaps.push_back(c.piece);
          } else {
            pc.touches.push_back(c.piece.a);
          }
        }
      }
    }
  }
  return contacts;
}

bool segment_less(const Segment& s, const Segment& t) {
  return std::tie(s.a.x, s.a.y, s.b.x, s.b.y) < std::tie(t.a.x, t.a.y, t.b.x, t.b.y);
}

}  // namespace

ContiguityGraph build_contiguity(const RegionSet& regions, Contiguity rule,
                                 std::optional<double> tolerance) {
  if (regions.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot build contiguity for an empty region set");
  }
  const double tol = tolerance.value_or(default_snap_tolerance(regions));
  if (!(tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "snap tolerance must be non-negative");
  }
  std::vector<ContiguityGraph::Edge> edges;
  for (const auto& [pair, contact] : detect_contacts(regions, tol, false)) {
    if (contact.kind == Contact::kSegment ||
        (rule == Contiguity::kQueen && contact.kind == Contact::kPoint)) {
      edges.push_back(pair);
    }
  }
  return ContiguityGraph(regions.ids(), std::move(edges), rule);
}

std::vector<SharedBorder> shared_borders(const RegionSet& regions, const ContiguityGraph& graph,
                                         std::optional<double> tolerance) {
  const double tol = tolerance.value_or(default_snap_tolerance(regions));
  std::vector<std::size_t> to_region(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    auto r = regions.index_of(graph.id(i));
    if (!r) throw Error(ErrorCode::kIdMismatch, "graph vertex '" + graph.id(i) + "' not in regions");
    to_region[i] = *r;
  }
  const auto contacts = detect_contacts(regions, tol, true);
  std::vector<SharedBorder> out;
  out.reserve(graph.edges().size());
  for (const auto& [u, v] : graph.edges()) {
    SharedBorder border{u, v, {}};
    auto it = contacts.find(std::minmax(to_region[u], to_region[v]));
    if (it != contacts.end()) {
      border.segments = it->second.overlaps;
      if (border.segments.empty()) {
        for (Point p : it->second.touches) border.segments.push_back({p, p});
      }
      std::sort(border.segments.begin(), border.segments.end(), segment_less);
    }
    out.push_back(std::move(border));
  }
  return out;
}

}  // namespace densepix
