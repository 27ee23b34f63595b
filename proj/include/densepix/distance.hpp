#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densepix/geodata.hpp"
#include "densepix/ordering.hpp"

namespace densepix {

/// Symmetric N x N dissimilarities over an ordered id list, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

/// Euclidean distances between region centroids.
DistanceMatrix pairwise_geo(const RegionSet& regions);

/// Euclidean distances between value rows, restricted to the extent columns
/// when one is given.
DistanceMatrix pairwise_ts(const TimeSeriesMatrix& ts,
                           std::optional<TemporalExtent> extent = std::nullopt);

struct PairStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

// Over the N(N-1)/2 upper-triangle entries.
PairStats upper_triangle_stats(const DistanceMatrix& d);

/// (1 - alpha) * z(geo) + alpha * z(ts), z-scores over upper-triangle pairs
/// with population sigma. A term whose sigma is zero contributes zero. The
/// diagonal is set to the smallest off-diagonal entry.
DistanceMatrix mix_distances(const DistanceMatrix& geo, const DistanceMatrix& ts, double alpha);

}  // namespace densepix
