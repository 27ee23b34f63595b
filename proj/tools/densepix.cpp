// Batch front end for the densepix engine; `serve` runs the HTTP service.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "densepix/ahc.hpp"
#include "densepix/distance.hpp"
#include "densepix/error.hpp"
#include "densepix/geodata.hpp"
#include "densepix/http_server.hpp"
#include "densepix/layout.hpp"
#include "densepix/quality.hpp"
#include "densepix/serialize.hpp"
#include "densepix/session.hpp"
#include "densepix/sfc.hpp"
#include "densepix/svg.hpp"
#include "densepix/synthetic.hpp"

namespace {

using namespace densepix;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    return {std::stoul(text.substr(0, colon)), std::stoul(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must look like START:END, got '" + text + "'");
  }
}

const char* env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

struct InputArgs {
  std::string geojson;
  std::string csv;
  std::string id_property = "id";
  std::string contiguity = env_or("DENSEPIX_CONTIGUITY", "queen");
  bool project_lonlat = false;

  void attach(CLI::App* app, bool need_csv = true) {
    app->add_option("--geojson", geojson, "GeoJSON FeatureCollection")->required();
    auto* c = app->add_option("--csv", csv, "wide CSV time series");
    if (need_csv) c->required();
    app->add_option("--id-property", id_property, "feature property holding the region id");
    app->add_option("--contiguity", contiguity, "queen or rook")
        ->check(CLI::IsMember({"queen", "rook"}));
    app->add_flag("--project-lonlat", project_lonlat, "project lon/lat to equal-area first");
  }

  Dataset load() const {
    return load_dataset(read_file(geojson), read_file(csv),
                        {id_property, parse_contiguity(contiguity), project_lonlat});
  }
};

struct OrderArgs {
  double alpha = std::strtod(env_or("DENSEPIX_ALPHA", "0.5"), nullptr);
  std::string extent;
  std::string linkage = "ward";
  std::string curve;
  std::string ordering_file;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "weight of time-series similarity")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--extent", extent, "temporal reference extent START:END (inclusive)");
    app->add_option("--linkage", linkage, "agglomeration linkage")
        ->check(CLI::IsMember({"ward"}));
    app->add_option("--curve", curve, "space-filling curve instead of clustering")
        ->check(CLI::IsMember({"hilbert", "morton", "diagonal"}));
    app->add_option("--ordering", ordering_file, "ordering JSON to reuse");
  }

  Ordering compute(const Dataset& data) const {
    if (!ordering_file.empty()) {
      Ordering o = ordering_from_json(json::parse(read_file(ordering_file)));
      o.require_ids(data.regions.ids());
      return o;
    }
    if (!curve.empty()) return sfc_order(data.regions, parse_curve(curve));
    MixParams params{alpha, std::nullopt};
    if (!extent.empty()) {
      auto [s, e] = parse_range(extent, "--extent");
      params.extent = TemporalExtent{s, e};
    }
    params.validate(data.series.cols());
    if (data.regions.size() < 2) {
      return Ordering(data.regions.ids(), AhcProvenance{params.alpha, Linkage::kWard, params.extent});
    }
    const DistanceMatrix mixed = mix_distances(pairwise_geo(data.regions),
                                               pairwise_ts(data.series, params.extent),
                                               params.alpha);
    return ahc_order(mixed, parse_linkage(linkage), params);
  }
};

struct Pipeline {
  Dataset data;
  Ordering ordering;
  QualityReport report;
  PixelLayout layout;
  std::vector<HaloStroke> halos;
};

Pipeline run_pipeline(const InputArgs& in, const OrderArgs& order, std::optional<int> beta,
                      const LayoutConfig& config) {
  Dataset data = in.load();
  Ordering ordering = order.compute(data);
  QualityReport report;
  report.beta = beta.value_or(default_beta(data.graph));
  report.gaps = trust_gaps(ordering, data.graph, report.beta);
  report.borders = discontinuity_borders(ordering, data.graph);
  report.moran = moran_profile(data.series, data.graph);
  PixelLayout layout = build_layout(data.series, ordering, report.gaps, report.moran, config);
  std::vector<HaloStroke> halos = halo_strokes(report.borders, data.graph);
  return {std::move(data), std::move(ordering), std::move(report), std::move(layout),
          std::move(halos)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense-pixel ordering, quality measures and boosted layouts for regional time series"};
  app.require_subcommand(1);

  // gen-grid
  auto* gen = app.add_subcommand("gen-grid", "write a unit-square grid as GeoJSON");
  int width = 4;
  int height = 4;
  std::string gen_out;
  std::string gen_csv;
  std::size_t timesteps = 30;
  std::uint64_t seed = 1;
  std::string first_day = "2020-01-01";
  gen->add_option("--width", width)->required();
  gen->add_option("--height", height)->required();
  gen->add_option("--out", gen_out, "GeoJSON output (default stdout)");
  gen->add_option("--csv-out", gen_csv, "also write a synthetic daily series here");
  gen->add_option("--timesteps", timesteps, "days of synthetic data");
  gen->add_option("--seed", seed, "noise seed");
  gen->add_option("--start", first_day, "first day of the synthetic series");

  // order
  auto* order_cmd = app.add_subcommand("order", "compute a 1D ordering");
  InputArgs order_in;
  OrderArgs order_args;
  std::string order_out;
  order_in.attach(order_cmd, false);
  order_args.attach(order_cmd);
  order_cmd->add_option("--out", order_out);

  // quality / layout / path / selection / render share the full pipeline.
  InputArgs in;
  OrderArgs ord;
  std::optional<int> beta;
  LayoutConfig layout_config;
  std::string out;
  bool no_distortion = false;
  auto attach_pipeline = [&](CLI::App* cmd) {
    in.attach(cmd);
    ord.attach(cmd);
    cmd->add_option("--beta", beta, "hop threshold (default: average path length)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--total-width", layout_config.total_width, "pixel view width");
    cmd->add_option("--min-frac", layout_config.min_frac, "minimum column width fraction");
    cmd->add_flag("--no-distortion", no_distortion, "uniform column widths");
    cmd->add_option("--out", out);
  };
  auto* quality_cmd = app.add_subcommand("quality", "gaps, border weights and Moran profile");
  attach_pipeline(quality_cmd);
  auto* layout_cmd = app.add_subcommand("layout", "boosted dense-pixel layout as JSON");
  attach_pipeline(layout_cmd);
  bool resolve_colors = false;
  layout_cmd->add_flag("--resolve-colors", resolve_colors, "include viridis hex colors");
  auto* path_cmd = app.add_subcommand("path", "ordering path over region centroids");
  attach_pipeline(path_cmd);
  auto* selection_cmd = app.add_subcommand("selection", "map-glyph aggregates for a brush");
  attach_pipeline(selection_cmd);
  std::string rows;
  std::string times;
  std::string stat = "mean";
  selection_cmd->add_option("--rows", rows, "row range START:END in layout order");
  selection_cmd->add_option("--times", times, "timestep range START:END");
  selection_cmd->add_option("--stat", stat)->check(CLI::IsMember({"min", "mean", "max"}));
  auto* render_cmd = app.add_subcommand("render", "render the boosted view as SVG");
  attach_pipeline(render_cmd);
  bool show_path = false;
  render_cmd->add_option("--brush-rows", rows, "brush rows START:END for the map glyph");
  render_cmd->add_option("--brush-times", times, "brush timesteps START:END");
  render_cmd->add_option("--stat", stat)->check(CLI::IsMember({"min", "mean", "max"}));
  render_cmd->add_flag("--path", show_path, "overlay the ordering path on the map inset");

  // serve
  auto* serve = app.add_subcommand("serve", "run the JSON-over-HTTP session service");
  std::string host = "127.0.0.1";
  int port = std::atoi(env_or("DENSEPIX_PORT", "8080"));
  std::string snapshot_dir;
  double serve_alpha = std::strtod(env_or("DENSEPIX_ALPHA", "0.5"), nullptr);
  std::string serve_rule = env_or("DENSEPIX_CONTIGUITY", "queen");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--alpha", serve_alpha, "default alpha for new sessions")
      ->check(CLI::Range(0.0, 1.0));
  serve->add_option("--contiguity", serve_rule)->check(CLI::IsMember({"queen", "rook"}));
  serve->add_option("--snapshot-dir", snapshot_dir, "write ingested datasets here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const RegionSet grid = grid_regions(width, height);
      write_output(gen_out, to_geojson(grid));
      if (!gen_csv.empty()) write_output(gen_csv, to_csv(synthetic_series(grid, timesteps, seed, first_day)));
      return 0;
    }
    if (*order_cmd) {
      if (!order_args.curve.empty()) {
        // Curves only need the grid geometry.
        const RegionSet regions = load_geojson(read_file(order_in.geojson),
                                               {order_in.id_property, order_in.project_lonlat});
        write_output(order_out,
                     ordering_to_json(sfc_order(regions, parse_curve(order_args.curve))).dump(2));
        return 0;
      }
      if (order_in.csv.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "--csv is required unless --curve is given");
      }
      const Dataset data = order_in.load();
      write_output(order_out, ordering_to_json(order_args.compute(data)).dump(2));
      return 0;
    }
    if (*serve) {
      StoreConfig config;
      config.session.alpha = serve_alpha;
      config.dataset.rule = parse_contiguity(serve_rule);
      if (!snapshot_dir.empty()) config.snapshot_dir = snapshot_dir;
      HttpServer server(std::make_shared<SessionStore>(config));
      std::cerr << "densepix listening on " << host << ':' << port << '\n';
      return server.listen(host, port) ? 0 : 1;
    }

    layout_config.distortion = !no_distortion;
    Pipeline p = run_pipeline(in, ord, beta, layout_config);
    auto brush_from_args = [&]() {
      Brush brush;
      auto [r0, r1] = rows.empty() ? std::pair<std::size_t, std::size_t>{0, p.ordering.size() - 1}
                                   : parse_range(rows, "rows");
      auto [t0, t1] = times.empty()
                          ? std::pair<std::size_t, std::size_t>{0, p.data.series.cols() - 1}
                          : parse_range(times, "times");
      brush = {r0, r1, t0, t1, parse_stat(stat)};
      return brush;
    };
    if (*quality_cmd) {
      write_output(out, quality_to_json(p.report, p.data.graph).dump(2));
    } else if (*layout_cmd) {
      write_output(out, layout_to_json(p.layout, resolve_colors).dump());
    } else if (*path_cmd) {
      write_output(out, path_to_json(ordering_path(p.ordering, p.data.regions, p.report.gaps)).dump(2));
    } else if (*selection_cmd) {
      write_output(out, glyph_to_json(aggregate_selection(brush_from_args(), p.data.series,
                                                          p.ordering, p.halos))
                            .dump(2));
    } else if (*render_cmd) {
      std::optional<GlyphData> glyph;
      std::optional<PathData> path;
      MapGeometry map{&p.data.regions, &p.data.graph, {}};
      if (!rows.empty() || !times.empty()) {
        glyph = aggregate_selection(brush_from_args(), p.data.series, p.ordering, p.halos);
        map.borders = shared_borders(p.data.regions, p.data.graph);
      }
      if (show_path) path = ordering_path(p.ordering, p.data.regions, p.report.gaps);
      write_output(out, render_svg(p.layout, glyph ? &*glyph : nullptr,
                                   path ? &*path : nullptr, &map));
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
