#include "densepix/synthetic.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "densepix/error.hpp"

namespace densepix {

std::vector<std::string> daily_timestamps(const std::string& first, std::size_t count) {
  using namespace std::chrono;
  const double start_seconds = parse_iso8601(first);
  sys_days day{days{static_cast<long>(std::floor(start_seconds / 86400.0))}};
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i, day += days{1}) {
    const year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    out.emplace_back(buf);
  }
  return out;
}

TimeSeriesMatrix synthetic_series(const RegionSet& regions, std::size_t timesteps,
                                  std::uint64_t seed, const std::string& first_day) {
  if (timesteps == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one timestep");
  const BoundingBox box = regions.bounds();
  const double w = std::max(box.max_x - box.min_x, 1e-12);
  const double h = std::max(box.max_y - box.min_y, 1e-12);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.05);

  std::vector<double> values;
  values.reserve(regions.size() * timesteps);
  for (const Region& region : regions.regions()) {
    const double u = (region.centroid.x - box.min_x) / w;
    const double v = (region.centroid.y - box.min_y) / h;
    const bool cluster = u < 0.5 && v < 0.5;
    for (std::size_t t = 0; t < timesteps; ++t) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / 120.0;
      double value = 1.0 + 0.6 * std::sin(phase - 2.0 * u);
      if (cluster) value += 0.5 * std::sin(3.0 * phase + 1.0);
      value += noise(rng);
      values.push_back(std::max(0.0, 100.0 * value));
    }
  }
  return TimeSeriesMatrix(regions.ids(), daily_timestamps(first_day, timesteps),
                          std::move(values));
}

}  // namespace densepix
