#include "densepix/quality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "densepix/error.hpp"

namespace densepix {

std::vector<int> bfs_hops(const ContiguityGraph& g, std::size_t source) {
  std::vector<int> hops(g.size(), kDisconnected);
  if (source >= g.size()) throw Error(ErrorCode::kUnknownRegion, "BFS source out of range");
  std::deque<std::size_t> queue{source};
  hops[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : g.neighbors(u)) {
      if (hops[v] == kDisconnected) {
        hops[v] = hops[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return hops;
}

std::vector<int> all_pairs_hops(const ContiguityGraph& g) {
  const std::size_t n = g.size();
  std::vector<int> out(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::vector<int> row = bfs_hops(g, s);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
  }
  return out;
}

std::optional<int> hop_distance(const ContiguityGraph& g, std::string_view u,
                                std::string_view v) {
  const std::size_t a = g.require_index(u);
  const std::size_t b = g.require_index(v);
  const int h = bfs_hops(g, a)[b];
  if (h == kDisconnected) return std::nullopt;
  return h;
}

std::size_t GapMask::count() const {
  return static_cast<std::size_t>(std::count(epsilon.begin(), epsilon.end(), true));
}

std::vector<int> consecutive_hops(const Ordering& o, const ContiguityGraph& g) {
  o.require_ids(g.ids());
  std::vector<int> hops;
  if (o.size() < 2) return hops;
  hops.reserve(o.size() - 1);
  for (std::size_t n = 0; n + 1 < o.size(); ++n) {
    const std::size_t u = g.require_index(o[n]);
    const std::size_t v = g.require_index(o[n + 1]);
    hops.push_back(bfs_hops(g, u)[v]);
  }
  return hops;
}

GapMask threshold_gaps(std::vector<int> hop_distances, int beta) {
  if (beta < 1) throw Error(ErrorCode::kOutOfRange, "beta must be at least 1");
  GapMask mask;
  mask.beta = beta;
  mask.epsilon.reserve(hop_distances.size());
  for (int h : hop_distances) mask.epsilon.push_back(h == kDisconnected || h > beta);
  mask.hop_distances = std::move(hop_distances);
  return mask;
}

GapMask trust_gaps(const Ordering& o, const ContiguityGraph& g, int beta) {
  if (beta < 1) throw Error(ErrorCode::kOutOfRange, "beta must be at least 1");
  return threshold_gaps(consecutive_hops(o, g), beta);
}

std::vector<BorderWeight> discontinuity_borders(const Ordering& o, const ContiguityGraph& g) {
  o.require_ids(g.ids());
  std::vector<std::size_t> position(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) position[i] = o.position(g.id(i));
  std::vector<BorderWeight> out;
  out.reserve(g.edges().size());
  for (const auto& [u, v] : g.edges()) {
    const auto pu = static_cast<long long>(position[u]);
    const auto pv = static_cast<long long>(position[v]);
    out.push_back({u, v, static_cast<int>(std::llabs(pu - pv))});
  }
  return out;
}

double morans_i(std::span<const double> values, const ContiguityGraph& g) {
  const std::size_t n = g.size();
  if (values.size() != n) {
    throw Error(ErrorCode::kIdMismatch, "field has " + std::to_string(values.size()) +
                                            " values for " + std::to_string(n) + " vertices");
  }
  if (n == 0) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return 0.0;

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double denominator = 0.0;
  for (double x : values) denominator += (x - mean) * (x - mean);

  double numerator = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = g.neighbors(i);
    if (nbrs.empty()) continue;
    double lag = 0.0;
    for (std::size_t j : nbrs) lag += values[j] - mean;
    numerator += (values[i] - mean) * lag / static_cast<double>(nbrs.size());
    weight_sum += 1.0;
  }
  if (weight_sum == 0.0 || denominator == 0.0) return 0.0;
  return (static_cast<double>(n) / weight_sum) * numerator / denominator;
}

MoranProfile normalize_profile(std::vector<double> raw) {
  MoranProfile profile;
  profile.normalized.assign(raw.size(), 0.5);
  if (!raw.empty()) {
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double min = *lo;
    const double span = *hi - *lo;
    if (span > 0.0) {
      for (std::size_t t = 0; t < raw.size(); ++t) {
        profile.normalized[t] = (raw[t] - min) / span;
      }
    }
  }
  profile.raw = std::move(raw);
  return profile;
}

MoranProfile moran_profile(const TimeSeriesMatrix& ts, const ContiguityGraph& g) {
  if (ts.rows() != g.size()) {
    throw Error(ErrorCode::kIdMismatch, "series rows do not match graph vertices");
  }
  std::vector<std::size_t> row_of(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto row = ts.index_of(g.id(i));
    if (!row) throw Error(ErrorCode::kIdMismatch, "no series for region '" + g.id(i) + "'");
    row_of[i] = *row;
  }
  std::vector<double> raw(ts.cols());
  std::vector<double> field(g.size());
  for (std::size_t t = 0; t < ts.cols(); ++t) {
    for (std::size_t i = 0; i < g.size(); ++i) field[i] = ts.at(row_of[i], t);
    raw[t] = morans_i(field, g);
  }
  return normalize_profile(std::move(raw));
}

double average_path_length(const ContiguityGraph& g) {
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty graph");

  // Largest component; ties go to the one holding the lowest vertex.
  std::vector<int> component(n, -1);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] != -1) continue;
    const int label = static_cast<int>(sizes.size());
    std::size_t count = 0;
    const std::vector<int> hops = bfs_hops(g, s);
    for (std::size_t v = 0; v < n; ++v) {
      if (hops[v] != kDisconnected) {
        component[v] = label;
        ++count;
      }
    }
    sizes.push_back(count);
  }
  const int largest = static_cast<int>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  const std::size_t m = sizes[static_cast<std::size_t>(largest)];
  if (m < 2) return 0.0;

  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] != largest) continue;
    const std::vector<int> hops = bfs_hops(g, s);
    double sum = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (component[v] == largest) sum += hops[v];
    }
    total += sum / static_cast<double>(m - 1);
  }
  return total / static_cast<double>(m);
}

int default_beta(const ContiguityGraph& g) {
  const double mean = average_path_length(g);
  return std::max(1, static_cast<int>(std::floor(mean + 0.5)));
}

}  // namespace densepix
