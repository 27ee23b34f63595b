#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "densepix/geodata.hpp"

namespace densepix {

/// `count` consecutive daily ISO dates starting at `first` ("YYYY-MM-DD").
std::vector<std::string> daily_timestamps(const std::string& first, std::size_t count);

/// Seasonal waves drifting west to east across region centroids, a
/// phase-shifted cluster in the lower-left quarter and Gaussian noise.
/// Deterministic for a given seed.
TimeSeriesMatrix synthetic_series(const RegionSet& regions, std::size_t timesteps,
                                  std::uint64_t seed = 1,
                                  const std::string& first_day = "2020-01-01");

}  // namespace densepix
