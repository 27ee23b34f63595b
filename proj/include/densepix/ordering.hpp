#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace densepix {

/// Inclusive range of timestep indices.
struct TemporalExtent {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const TemporalExtent&, const TemporalExtent&) = default;
};

struct MixParams {
  double alpha = 0.5;
  std::optional<TemporalExtent> extent;

  // Throws kOutOfRange unless 0 <= alpha <= 1 and start <= end < timesteps.
  void validate(std::size_t timesteps) const;

  friend bool operator==(const MixParams&, const MixParams&) = default;
};

enum class Linkage { kWard };

enum class Curve { kHilbert, kMorton, kDiagonal };

std::string_view to_string(Linkage linkage);
std::string_view to_string(Curve curve);
Linkage parse_linkage(std::string_view name);
Curve parse_curve(std::string_view name);

struct AhcProvenance {
  double alpha = 0.0;
  Linkage linkage = Linkage::kWard;
  std::optional<TemporalExtent> extent;

  friend bool operator==(const AhcProvenance&, const AhcProvenance&) = default;
};

struct SfcProvenance {
  Curve curve = Curve::kHilbert;

  friend bool operator==(const SfcProvenance&, const SfcProvenance&) = default;
};

// Orderings read from external files carry no provenance.
struct ExternalProvenance {
  friend bool operator==(const ExternalProvenance&, const ExternalProvenance&) = default;
};

using Provenance = std::variant<AhcProvenance, SfcProvenance, ExternalProvenance>;

/// A permutation (v_1 ... v_N) of region ids together with how it was made.
class Ordering {
 public:
  Ordering(std::vector<std::string> sequence, Provenance provenance);

  std::size_t size() const { return sequence_.size(); }
  const std::vector<std::string>& sequence() const { return sequence_; }
  const std::string& operator[](std::size_t i) const { return sequence_[i]; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t position(std::string_view id) const;
  Ordering reversed() const;

  // Throws kIdMismatch unless the sequence is a bijection onto `ids`.
  void require_ids(std::span<const std::string> ids) const;

 private:
  std::vector<std::string> sequence_;
  Provenance provenance_;
  std::unordered_map<std::string, std::size_t> positions_;
};

}  // namespace densepix
