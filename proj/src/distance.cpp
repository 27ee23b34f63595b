#include "densepix/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "densepix/error.hpp"

namespace densepix {

DistanceMatrix::DistanceMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  const std::size_t n = ids_.size();
  if (values_.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "distance matrix must be N x N");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values_[i * n + j];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kBadValue, "distance matrix has a non-finite entry");
      }
      if (v != values_[j * n + i]) {
        throw Error(ErrorCode::kInvalidArgument, "distance matrix is not symmetric");
      }
    }
  }
}

DistanceMatrix pairwise_geo(const RegionSet& regions) {
  const std::size_t n = regions.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two regions");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = regions[i].centroid;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point b = regions[j].centroid;
      d[i * n + j] = d[j * n + i] = std::hypot(a.x - b.x, a.y - b.y);
    }
  }
  return DistanceMatrix(regions.ids(), std::move(d));
}

DistanceMatrix pairwise_ts(const TimeSeriesMatrix& ts, std::optional<TemporalExtent> extent) {
  const TemporalExtent range = extent.value_or(TemporalExtent{0, ts.cols() - 1});
  if (range.start > range.end || range.end >= ts.cols()) {
    throw Error(ErrorCode::kOutOfRange, "invalid temporal extent");
  }
  const std::size_t n = ts.rows();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = ts.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto b = ts.row(j);
      double sum = 0.0;
      for (std::size_t t = range.start; t <= range.end; ++t) {
        const double diff = a[t] - b[t];
        sum += diff * diff;
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(sum);
    }
  }
  return DistanceMatrix(ts.region_ids(), std::move(d));
}

PairStats upper_triangle_stats(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs == 0) return {};
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) sum += d(i, j);
  const double mean = sum / static_cast<double>(pairs);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dev = d(i, j) - mean;
      ss += dev * dev;
    }
  return {mean, std::sqrt(ss / static_cast<double>(pairs))};
}

DistanceMatrix mix_distances(const DistanceMatrix& geo, const DistanceMatrix& ts, double alpha) {
  if (geo.ids() != ts.ids()) {
    throw Error(ErrorCode::kIdMismatch, "geo and time-series matrices cover different ids");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "alpha must lie in [0, 1]");
  }
  const std::size_t n = geo.size();
  const PairStats gs = upper_triangle_stats(geo);
  const PairStats tss = upper_triangle_stats(ts);
  const double wg = 1.0 - alpha;
  const double wt = alpha;

  std::vector<double> out(n * n, 0.0);
  double minimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (gs.stddev > 0.0) v += wg * ((geo(i, j) - gs.mean) / gs.stddev);
      if (tss.stddev > 0.0) v += wt * ((ts(i, j) - tss.mean) / tss.stddev);
      out[i * n + j] = out[j * n + i] = v;
      minimum = std::min(minimum, v);
    }
  }
  if (n < 2) minimum = 0.0;
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = minimum;
  return DistanceMatrix(geo.ids(), std::move(out));
}

}  // namespace densepix
