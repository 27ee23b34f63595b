#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "densepix/distance.hpp"
#include "densepix/geodata.hpp"
#include "densepix/layout.hpp"
#include "densepix/ordering.hpp"
#include "densepix/quality.hpp"

namespace densepix {

struct Dataset {
  RegionSet regions;
  ContiguityGraph graph;
  TimeSeriesMatrix series;
};

struct DatasetOptions {
  std::string id_property = "id";
  Contiguity rule = Contiguity::kQueen;
  bool project_lonlat = false;
};

Dataset load_dataset(std::string_view geojson, std::string_view csv,
                     const DatasetOptions& options = {});

struct SessionConfig {
  double alpha = 0.5;
  LayoutConfig layout;
  HaloConfig halo;
};

/// Parameter change; unset fields keep their value. `extent` set to nullopt
/// inside the outer optional resets to the full time axis.
struct ParamUpdate {
  std::optional<double> alpha;
  std::optional<int> beta;
  std::optional<std::optional<TemporalExtent>> extent;
};

/// One analysis session over an immutable dataset.
///
/// Alpha or extent changes recompute the mixed distances, the ordering, the
/// gaps and the borders; a beta change only re-thresholds the cached hop
/// distances. The Moran profile depends on data and graph alone. Writers are
/// serialized, readers share the lock, and every view carries the revision
/// it was computed from.
class Session {
 public:
  Session(std::shared_ptr<const Dataset> data, const SessionConfig& config = {});

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Returns {revision, ordering_revision, changed, ordering, quality}.
  nlohmann::json set_params(const ParamUpdate& update);

  nlohmann::json params_json() const;
  nlohmann::json ordering_json() const;
  nlohmann::json quality_json() const;
  nlohmann::json layout_json(bool resolve_colors = false) const;
  nlohmann::json path_json() const;
  nlohmann::json selection_json(const Brush& brush) const;
  nlohmann::json status_json() const;
  std::string render_svg(const std::optional<Brush>& brush, bool show_path) const;

  std::uint64_t revision() const;
  std::uint64_t ordering_revision() const;
  bool busy() const { return busy_.load(); }
  const Dataset& dataset() const { return *data_; }

 private:
  void recompute_ordering();
  void rethreshold();

  std::shared_ptr<const Dataset> data_;
  SessionConfig config_;
  mutable std::shared_mutex mutex_;
  std::atomic<bool> busy_{false};

  std::optional<DistanceMatrix> geo_;
  std::optional<DistanceMatrix> series_distances_;
  std::optional<TemporalExtent> series_extent_;
  MixParams mix_;
  int beta_ = 1;
  std::optional<Ordering> ordering_;
  std::vector<int> hops_;
  GapMask gaps_;
  std::vector<BorderWeight> borders_;
  std::vector<HaloStroke> halos_;
  MoranProfile moran_;
  std::optional<PixelLayout> layout_;
  std::uint64_t revision_ = 1;
  std::uint64_t ordering_revision_ = 1;
};

struct StoreConfig {
  SessionConfig session;
  DatasetOptions dataset;
  std::optional<std::filesystem::path> snapshot_dir;
};

/// In-memory session registry. Distinct sessions share nothing mutable.
class SessionStore {
 public:
  explicit SessionStore(StoreConfig config = {}) : config_(std::move(config)) {}

  struct CreateRequest {
    std::string geojson;
    std::string csv;
    std::optional<Contiguity> rule;
    std::optional<std::string> id_property;
    std::optional<double> alpha;
    std::optional<bool> project_lonlat;
  };

  std::string create(const CreateRequest& request);
  // Throws kUnknownSession.
  std::shared_ptr<Session> get(const std::string& id) const;
  bool erase(const std::string& id);
  std::size_t size() const;
  const StoreConfig& config() const { return config_; }

 private:
  StoreConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace densepix
