#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "densepix/geodata.hpp"
#include "densepix/ordering.hpp"

namespace densepix {

// Hop count reported for pairs in different components.
inline constexpr int kDisconnected = -1;

/// Breadth-first hop counts from `source` to every vertex; kDisconnected
/// where unreachable.
std::vector<int> bfs_hops(const ContiguityGraph& g, std::size_t source);

/// Row-major n x n hop matrix from one BFS per vertex.
std::vector<int> all_pairs_hops(const ContiguityGraph& g);

/// Shortest-path hop count between two regions; nullopt when they lie in
/// different components. Throws kUnknownRegion for ids not in the graph.
std::optional<int> hop_distance(const ContiguityGraph& g, std::string_view u, std::string_view v);

/// Trustworthiness gaps for the N-1 consecutive ordering pairs.
struct GapMask {
  int beta = 1;
  std::vector<bool> epsilon;
  std::vector<int> hop_distances;

  std::size_t count() const;
};

/// Hop distance of every consecutive pair (v_n, v_n+1).
std::vector<int> consecutive_hops(const Ordering& o, const ContiguityGraph& g);

/// Gap where hops > beta, or where the pair is disconnected.
GapMask threshold_gaps(std::vector<int> hop_distances, int beta);

GapMask trust_gaps(const Ordering& o, const ContiguityGraph& g, int beta);

struct BorderWeight {
  std::size_t u = 0;  // graph vertex indices, u < v
  std::size_t v = 0;
  int weight = 0;     // |position(u) - position(v)|
};

/// Ordering distance for every contiguity edge, in graph edge order.
std::vector<BorderWeight> discontinuity_borders(const Ordering& o, const ContiguityGraph& g);

/// Global Moran's I with row-standardized binary contiguity weights.
/// `values` is aligned to the graph's vertex order. Zero-variance fields and
/// graphs without edges give 0.
double morans_i(std::span<const double> values, const ContiguityGraph& g);

struct MoranProfile {
  std::vector<double> raw;
  std::vector<double> normalized;  // min-max of raw; all 0.5 when constant
};

MoranProfile normalize_profile(std::vector<double> raw);

/// Moran's I per timestep; series rows are matched to graph vertices by id.
MoranProfile moran_profile(const TimeSeriesMatrix& ts, const ContiguityGraph& g);

/// Mean over vertices of the mean hop distance to the other vertices, taken
/// on the largest connected component.
double average_path_length(const ContiguityGraph& g);

/// Rounded (half up) average path length, at least 1.
int default_beta(const ContiguityGraph& g);

struct QualityReport {
  int beta = 1;
  GapMask gaps;
  std::vector<BorderWeight> borders;
  MoranProfile moran;
};

}  // namespace densepix
