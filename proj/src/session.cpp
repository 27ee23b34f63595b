#include "densepix/session.hpp"

#include <fstream>

#include "densepix/ahc.hpp"
#include "densepix/error.hpp"
#include "densepix/serialize.hpp"
#include "densepix/svg.hpp"

namespace densepix {

using nlohmann::json;

Dataset load_dataset(std::string_view geojson, std::string_view csv,
                     const DatasetOptions& options) {
  RegionSet regions = load_geojson(geojson, {options.id_property, options.project_lonlat});
  ContiguityGraph graph = build_contiguity(regions, options.rule);
  TimeSeriesMatrix series = load_timeseries(csv, regions);
  return Dataset{std::move(regions), std::move(graph), std::move(series)};
}

Session::Session(std::shared_ptr<const Dataset> data, const SessionConfig& config)
    : data_(std::move(data)), config_(config) {
  mix_.alpha = config_.alpha;
  mix_.validate(data_->series.cols());
  beta_ = default_beta(data_->graph);
  moran_ = moran_profile(data_->series, data_->graph);
  if (data_->regions.size() >= 2) geo_ = pairwise_geo(data_->regions);
  recompute_ordering();
}

void Session::recompute_ordering() {
  busy_ = true;
  struct Reset {
    std::atomic<bool>& flag;
    ~Reset() { flag = false; }
  } reset{busy_};

  const Dataset& d = *data_;
  if (d.regions.size() < 2) {
    ordering_.emplace(d.regions.ids(), AhcProvenance{mix_.alpha, Linkage::kWard, mix_.extent});
  } else {
    if (!series_distances_ || series_extent_ != mix_.extent) {
      series_distances_ = pairwise_ts(d.series, mix_.extent);
      series_extent_ = mix_.extent;
    }
    const DistanceMatrix mixed = mix_distances(*geo_, *series_distances_, mix_.alpha);
    ordering_ = ahc_order(mixed, Linkage::kWard, mix_);
  }
  hops_ = consecutive_hops(*ordering_, d.graph);
  borders_ = discontinuity_borders(*ordering_, d.graph);
  halos_ = halo_strokes(borders_, d.graph, config_.halo);
  rethreshold();
}

void Session::rethreshold() {
  gaps_ = threshold_gaps(hops_, beta_);
  layout_ = build_layout(data_->series, *ordering_, gaps_, moran_, config_.layout);
}

json Session::set_params(const ParamUpdate& update) {
  std::unique_lock lock(mutex_);
  MixParams next = mix_;
  if (update.alpha) next.alpha = *update.alpha;
  if (update.extent) next.extent = *update.extent;
  // A full-axis extent is the same as no extent.
  if (next.extent && next.extent->start == 0 &&
      next.extent->end + 1 == data_->series.cols()) {
    next.extent.reset();
  }
  next.validate(data_->series.cols());
  const int next_beta = update.beta.value_or(beta_);
  if (next_beta < 1) throw Error(ErrorCode::kOutOfRange, "beta must be at least 1");

  const bool reorder = next != mix_;
  const bool rethresh = next_beta != beta_;
  if (reorder) {
    mix_ = next;
    beta_ = next_beta;
    recompute_ordering();
    ++ordering_revision_;
  } else if (rethresh) {
    beta_ = next_beta;
    rethreshold();
  }
  if (reorder || rethresh) ++revision_;

  return {{"revision", revision_},
          {"ordering_revision", ordering_revision_},
          {"changed", reorder || rethresh},
          {"params", {{"alpha", mix_.alpha},
                      {"beta", beta_},
                      {"extent", mix_.extent ? json::array({mix_.extent->start, mix_.extent->end})
                                             : json(nullptr)}}},
          {"ordering", ordering_to_json(*ordering_)},
          {"quality", quality_to_json({beta_, gaps_, borders_, moran_}, data_->graph)}};
}

json Session::params_json() const {
  std::shared_lock lock(mutex_);
  return {{"revision", revision_},
          {"alpha", mix_.alpha},
          {"beta", beta_},
          {"extent", mix_.extent ? json::array({mix_.extent->start, mix_.extent->end})
                                 : json(nullptr)},
          {"regions", data_->regions.size()},
          {"timesteps", data_->series.cols()},
          {"contiguity", to_string(data_->graph.rule())}};
}

json Session::ordering_json() const {
  std::shared_lock lock(mutex_);
  json out = ordering_to_json(*ordering_);
  out["revision"] = revision_;
  out["ordering_revision"] = ordering_revision_;
  return out;
}

json Session::quality_json() const {
  std::shared_lock lock(mutex_);
  json out = quality_to_json({beta_, gaps_, borders_, moran_}, data_->graph);
  out["revision"] = revision_;
  return out;
}

json Session::layout_json(bool resolve_colors) const {
  std::shared_lock lock(mutex_);
  json out = layout_to_json(*layout_, resolve_colors);
  out["revision"] = revision_;
  return out;
}

json Session::path_json() const {
  std::shared_lock lock(mutex_);
  json out = path_to_json(ordering_path(*ordering_, data_->regions, gaps_));
  out["revision"] = revision_;
  return out;
}

json Session::selection_json(const Brush& brush) const {
  std::shared_lock lock(mutex_);
  json out = glyph_to_json(aggregate_selection(brush, data_->series, *ordering_, halos_));
  out["revision"] = revision_;
  return out;
}

json Session::status_json() const {
  return {{"busy", busy_.load()}, {"revision", revision()}};
}

std::string Session::render_svg(const std::optional<Brush>& brush, bool show_path) const {
  std::shared_lock lock(mutex_);
  MapGeometry map{&data_->regions, &data_->graph, {}};
  std::optional<GlyphData> glyph;
  std::optional<PathData> path;
  if (brush) glyph = aggregate_selection(*brush, data_->series, *ordering_, halos_);
  if (show_path) path = ordering_path(*ordering_, data_->regions, gaps_);
  if (glyph) map.borders = shared_borders(data_->regions, data_->graph);
  return densepix::render_svg(*layout_, glyph ? &*glyph : nullptr, path ? &*path : nullptr,
                              &map);
}

std::uint64_t Session::revision() const {
  std::shared_lock lock(mutex_);
  return revision_;
}

std::uint64_t Session::ordering_revision() const {
  std::shared_lock lock(mutex_);
  return ordering_revision_;
}

std::string SessionStore::create(const CreateRequest& request) {
  DatasetOptions options = config_.dataset;
  if (request.rule) options.rule = *request.rule;
  if (request.id_property) options.id_property = *request.id_property;
  if (request.project_lonlat) options.project_lonlat = *request.project_lonlat;
  auto data = std::make_shared<const Dataset>(load_dataset(request.geojson, request.csv, options));

  SessionConfig session_config = config_.session;
  if (request.alpha) session_config.alpha = *request.alpha;
  auto session = std::make_shared<Session>(data, session_config);

  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(session));
  if (config_.snapshot_dir) {
    std::filesystem::create_directories(*config_.snapshot_dir);
    std::ofstream(*config_.snapshot_dir / (id + ".geojson")) << request.geojson;
    std::ofstream(*config_.snapshot_dir / (id + ".csv")) << request.csv;
  }
  return id;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "unknown session '" + id + "'");
  return it->second;
}

bool SessionStore::erase(const std::string& id) {
  std::lock_guard lock(mutex_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace densepix
