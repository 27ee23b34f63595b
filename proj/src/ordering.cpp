#include "densepix/ordering.hpp"

#include <algorithm>
#include <cmath>

#include "densepix/error.hpp"

namespace densepix {

void MixParams::validate(std::size_t timesteps) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "alpha must lie in [0, 1]");
  }
  if (extent && (extent->start > extent->end || extent->end >= timesteps)) {
    throw Error(ErrorCode::kOutOfRange,
                "temporal extent " + std::to_string(extent->start) + ":" +
                    std::to_string(extent->end) + " outside 0:" +
                    std::to_string(timesteps == 0 ? 0 : timesteps - 1));
  }
}

std::string_view to_string(Linkage) { return "ward"; }

std::string_view to_string(Curve curve) {
  switch (curve) {
    case Curve::kHilbert: return "hilbert";
    case Curve::kMorton: return "morton";
    case Curve::kDiagonal: return "diagonal";
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "ward") return Linkage::kWard;
  throw Error(ErrorCode::kInvalidArgument, "unsupported linkage '" + std::string(name) + "'");
}

Curve parse_curve(std::string_view name) {
  if (name == "hilbert") return Curve::kHilbert;
  if (name == "morton") return Curve::kMorton;
  if (name == "diagonal") return Curve::kDiagonal;
  throw Error(ErrorCode::kInvalidArgument, "unknown curve '" + std::string(name) + "'");
}

Ordering::Ordering(std::vector<std::string> sequence, Provenance provenance)
    : sequence_(std::move(sequence)), provenance_(std::move(provenance)) {
  for (std::size_t i = 0; i < sequence_.size(); ++i) {
    if (!positions_.emplace(sequence_[i], i).second) {
      throw Error(ErrorCode::kDuplicateId, "ordering repeats id '" + sequence_[i] + "'");
    }
  }
}

std::size_t Ordering::position(std::string_view id) const {
  auto it = positions_.find(std::string(id));
  if (it == positions_.end()) {
    throw Error(ErrorCode::kIdMismatch, "id '" + std::string(id) + "' not in ordering");
  }
  return it->second;
}

Ordering Ordering::reversed() const {
  return Ordering(std::vector<std::string>(sequence_.rbegin(), sequence_.rend()), provenance_);
}

void Ordering::require_ids(std::span<const std::string> ids) const {
  if (ids.size() != sequence_.size()) {
    throw Error(ErrorCode::kIdMismatch, "ordering has " + std::to_string(sequence_.size()) +
                                            " ids, expected " + std::to_string(ids.size()));
  }
  for (const std::string& id : ids) {
    if (!positions_.contains(id)) {
      throw Error(ErrorCode::kIdMismatch, "ordering lacks id '" + id + "'");
    }
  }
}

}  // namespace densepix
