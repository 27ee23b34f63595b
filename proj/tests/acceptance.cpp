// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "densepix/ahc.hpp"
#include "densepix/distance.hpp"
#include "densepix/layout.hpp"
#include "densepix/quality.hpp"
#include "densepix/session.hpp"
#include "densepix/sfc.hpp"
#include "densepix/synthetic.hpp"
#include "support.hpp"

using namespace densepix;

namespace {

constexpr double kMoranTol = 1e-9;
constexpr double kWidthSumTol = 1e-6;
constexpr double kHilbertSeconds = 1.0;
constexpr double kBfsSeconds = 5.0;
constexpr double kPipelineSeconds = 30.0;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Oracle index y * w + x of a grid id "x_y".
std::size_t cell_index(const std::string& id, int w) {
  const auto sep = id.find('_');
  return std::stoul(id.substr(sep + 1)) * std::size_t(w) + std::stoul(id.substr(0, sep));
}

// Hop distance of each consecutive pair, from Floyd-Warshall over the
// coordinate adjacency of a w x h grid.
std::vector<int> brute_hops(const Ordering& o, int w, int h, bool queen) {
  const auto edges = oracle::grid_edges(w, h, queen);
  const std::size_t n = std::size_t(w * h);
  const auto fw = oracle::floyd_warshall(n, {edges.begin(), edges.end()});
  std::vector<int> out;
  for (std::size_t k = 0; k + 1 < o.size(); ++k)
    out.push_back(fw[cell_index(o[k], w) * n + cell_index(o[k + 1], w)]);
  return out;
}

std::size_t brute_gaps(const std::vector<int>& hops, int beta) {
  return std::size_t(std::count_if(hops.begin(), hops.end(), [&](int d) { return d > beta; }));
}

// Path cost with the consecutive terms summed in ascending order, so an order
// and its reverse score identically.
double path_cost(const std::vector<std::size_t>& order, const std::vector<double>& d,
                 std::size_t n) {
  std::vector<double> terms;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) terms.push_back(d[order[i] * n + order[i + 1]]);
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

Contiguity rule_of(bool queen) { return queen ? Contiguity::kQueen : Contiguity::kRook; }

void hilbert_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const RegionSet grid = grid_regions(4, 4);
  const Ordering o = sfc_order(grid, Curve::kHilbert);
  bool ok = true;
  std::string detail;
  for (bool queen : {false, true}) {
    const ContiguityGraph g = build_contiguity(grid, rule_of(queen));
    const auto hops = brute_hops(o, 4, 4, queen);
    for (int beta = 1; beta <= 6; ++beta) {
      const std::size_t lib = trust_gaps(o, g, beta).count();
      ok = ok && lib == 0 && brute_gaps(hops, beta) == 0;
    }
    detail += fmt("%s max consecutive hop %d; ", queen ? "queen" : "rook",
                  *std::max_element(hops.begin(), hops.end()));
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < kHilbertSeconds;
  report(ok, "hilbert_4x4_no_gaps", detail + fmt("beta 1..6 all zero gaps in %.4f s", secs));
}

void morton_criterion() {
  const RegionSet grid = grid_regions(4, 4);
  const ContiguityGraph g = build_contiguity(grid, Contiguity::kQueen);
  const Ordering o = sfc_order(grid, Curve::kMorton);
  const auto hops = brute_hops(o, 4, 4, true);
  const auto threes = std::count(hops.begin(), hops.end(), 3);
  const auto pos = std::size_t(std::find(hops.begin(), hops.end(), 3) - hops.begin());
  const bool others_adjacent =
      std::all_of(hops.begin(), hops.end(), [](int d) { return d == 1 || d == 3; });
  report(threes == 1 && others_adjacent, "morton_4x4_single_jump",
         fmt("%ld consecutive pair with hop 3 (%s -> %s); all other pairs adjacent", long(threes),
             o[pos].c_str(), o[pos + 1].c_str()));

  bool ok = true;
  std::string counts;
  for (int beta = 1; beta <= 6; ++beta) {
    const GapMask m = trust_gaps(o, g, beta);
    const std::size_t expect = beta <= 2 ? 1 : 0;
    ok = ok && m.count() == expect && brute_gaps(hops, beta) == expect;
    if (expect == 1) ok = ok && m.epsilon[pos];
    counts += fmt("%s%d:%zu", beta > 1 ? " " : "", beta, m.count());
  }
  report(ok, "morton_4x4_strict_threshold", "gaps per beta " + counts);

  // A non-strict reading (gap when hops >= beta) would be needed for a gap at
  // beta = 3; the strict rule gives none there.
  const std::size_t at3 = trust_gaps(o, g, 3).count();
  const auto non_strict = std::count_if(hops.begin(), hops.end(), [](int d) { return d >= 3; });
  report(at3 == 0 && non_strict == 1, "morton_4x4_beta3_discrepancy",
         fmt("strict rule at beta 3 gives %zu gaps; a gap for every beta <= 3 holds only with "
             "hops >= beta (%ld gap)",
             at3, long(non_strict)));
}

void diagonal_criterion() {
  bool ok = true;
  std::string detail;
  for (auto [w, h] : {std::pair{4, 4}, std::pair{5, 3}, std::pair{3, 6}}) {
    const RegionSet grid = grid_regions(w, h);
    const Ordering o = sfc_order(grid, Curve::kDiagonal);
    // consecutive cells stay on one anti-diagonal or step to the next
    for (std::size_t k = 0; k + 1 < o.size(); ++k) {
      const auto a = cell_index(o[k], w), b = cell_index(o[k + 1], w);
      const int da = int(a % w + a / w), db = int(b % w + b / w);
      ok = ok && (db == da || db == da + 1);
    }
    for (bool queen : {false, true}) {
      const ContiguityGraph g = build_contiguity(grid, rule_of(queen));
      const auto hops = brute_hops(o, w, h, queen);
      for (int beta = 1; beta <= 3; ++beta) {
        const GapMask m = trust_gaps(o, g, beta);
        for (std::size_t k = 0; k < hops.size(); ++k) ok = ok && m.epsilon[k] == (hops[k] > beta);
        detail += fmt("%s%dx%d %s b%d:%zu", detail.empty() ? "" : ", ", w, h,
                      queen ? "queen" : "rook", beta, m.count());
      }
    }
  }
  report(ok, "diagonal_gaps_match_brute_force", "gap counts " + detail);
}

void moran_criterion() {
  {
    const RegionSet grid = grid_regions(8, 8);
    const ContiguityGraph g = build_contiguity(grid, Contiguity::kRook);
    std::vector<double> x;
    for (const auto& id : g.ids()) {
      const auto i = cell_index(id, 8);
      x.push_back(double((i % 8 + i / 8) % 2));
    }
    const double v = morans_i(x, g);
    report(std::abs(v + 1.0) <= kMoranTol, "moran_checkerboard", fmt("I = %.17g", v));
  }
  {
    const ContiguityGraph g = build_contiguity(grid_regions(5, 7), Contiguity::kQueen);
    const std::vector<double> c(35, 4.25);
    const double v = morans_i(c, g);
    report(v == 0.0, "moran_constant_field", fmt("I = %g", v));
  }
  std::mt19937_64 rng(600);
  std::uniform_int_distribution<int> side(2, 8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  double worst_affine = 0.0, worst_oracle = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = side(rng), h = side(rng);
    const bool queen = trial % 2;
    const ContiguityGraph g = build_contiguity(grid_regions(w, h), rule_of(queen));
    std::vector<double> x(g.size());
    for (double& v : x) v = gauss(rng);
    const double a = (trial % 3 ? 1.0 : -1.0) * scale(rng);
    const double b = 50.0 * gauss(rng);
    std::vector<double> y;
    for (double v : x) y.push_back(a * v + b);
    const double ix = morans_i(x, g);
    worst_affine = std::max(worst_affine, std::abs(morans_i(y, g) - ix));
    std::vector<double> grid_x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) grid_x[cell_index(g.id(i), w)] = x[i];
    const auto edges = oracle::grid_edges(w, h, queen);
    worst_oracle = std::max(
        worst_oracle, std::abs(ix - oracle::moran(grid_x, g.size(), {edges.begin(), edges.end()})));
  }
  report(worst_affine <= kMoranTol && worst_oracle <= kMoranTol, "moran_affine_invariance",
         fmt("100 fields, max |I(ax+b) - I(x)| = %.3g, max |I - dense oracle| = %.3g",
             worst_affine, worst_oracle));
}

void bfs_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  std::uniform_real_distribution<double> density(0.0, 0.2);
  bool ok = true;
  std::size_t disconnected = 0, pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    const auto edges = oracle::random_edges(n, density(rng), rng);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
    const ContiguityGraph g(ids, {edges.begin(), edges.end()}, Contiguity::kRook);
    const auto hops = all_pairs_hops(g);
    const auto fw = oracle::floyd_warshall(n, edges);
    for (std::size_t k = 0; k < n * n; ++k) {
      const int expect = fw[k] >= oracle::kInf ? kDisconnected : fw[k];
      ok = ok && hops[k] == expect;
      disconnected += expect == kDisconnected;
    }
    pairs += n * n;
  }
  const double secs = seconds_since(t0);
  report(ok && secs < kBfsSeconds, "bfs_equals_floyd_warshall",
         fmt("50 graphs, %zu pairs (%zu disconnected) identical in %.3f s", pairs, disconnected,
             secs));
}

void olo_criterion() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::uniform_int_distribution<int> integer(1, 9);
  bool ok = true;
  std::size_t flips = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        d[i * n + j] = d[j * n + i] = trial % 2 ? real(rng) : double(integer(rng));
    const Dendrogram tree = ward_linkage(d, n);
    const auto order = optimal_leaf_order(tree, d, n);
    std::vector<std::pair<std::size_t, std::size_t>> merges;
    for (const Merge& m : tree.merges) merges.emplace_back(m.left, m.right);
    double best = std::numeric_limits<double>::infinity();
    const auto all = oracle::all_flips(n, merges);
    for (const auto& candidate : all) best = std::min(best, path_cost(candidate, d, n));
    const bool reachable = std::find(all.begin(), all.end(), order) != all.end();
    ok = ok && reachable && path_cost(order, d, n) == best;
    flips += all.size();
  }
  report(ok, "optimal_leaf_order_exhaustive",
         fmt("50 matrices, %zu flip orders enumerated, every result attains the minimum", flips));
}

struct Fixture {
  std::vector<Region> regions;
  TimeSeriesMatrix series;
};

Fixture random_fixture(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> side(3, 6);
  std::uniform_int_distribution<std::size_t> steps(3, 24);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int w = side(rng), h = side(rng);
  const auto polys = oracle::jittered_cells(w, h, 1000 + index);
  std::vector<Region> regions;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    Ring ring;
    for (const auto& p : polys[i]) ring.push_back({p.x, p.y});
    ids.push_back("r" + std::to_string(i));
    regions.push_back({ids.back(), {Polygon{ring}}, {}});
  }
  const std::size_t t = steps(rng);
  std::vector<double> values(ids.size() * t);
  for (double& v : values) v = 10.0 + 3.0 * gauss(rng);
  return {std::move(regions), TimeSeriesMatrix(ids, daily_timestamps("2021-03-01", t), values)};
}

Ordering mixed_order(const RegionSet& regions, const TimeSeriesMatrix& ts, double alpha) {
  return ahc_order(mix_distances(pairwise_geo(regions), pairwise_ts(ts), alpha), Linkage::kWard,
                   {alpha, std::nullopt});
}

DistanceMatrix scaled(const DistanceMatrix& d, double c) {
  std::vector<double> v(d.values().begin(), d.values().end());
  for (double& x : v) x *= c;
  return DistanceMatrix(d.ids(), std::move(v));
}

void mix_criterion() {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> shift(-1e4, 1e4);
  std::uniform_real_distribution<double> log_scale(-6.0, 6.0);
  std::uniform_real_distribution<double> mid_alpha(0.1, 0.9);
  int permutation_ok = 0, rigid_ok = 0, scale_ok = 0;
  double worst_z = 0.0;
  for (int f = 0; f < 20; ++f) {
    Fixture fx = random_fixture(rng, f);
    const RegionSet regions(fx.regions);

    std::vector<double> shuffled(fx.series.values().begin(), fx.series.values().end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const TimeSeriesMatrix permuted(fx.series.region_ids(), fx.series.timestamps(), shuffled);
    permutation_ok += mixed_order(regions, fx.series, 0.0).sequence() ==
                      mixed_order(regions, permuted, 0.0).sequence();

    const double th = angle(rng), tx = shift(rng), ty = shift(rng);
    std::vector<Region> moved = fx.regions;
    for (Region& r : moved)
      for (Polygon& poly : r.parts)
        for (Ring& ring : poly)
          for (Point& p : ring)
            p = {std::cos(th) * p.x - std::sin(th) * p.y + tx,
                 std::sin(th) * p.x + std::cos(th) * p.y + ty};
    const RegionSet moved_set(moved);
    rigid_ok += mixed_order(regions, fx.series, 1.0).sequence() ==
                mixed_order(moved_set, fx.series, 1.0).sequence();

    const DistanceMatrix geo = pairwise_geo(regions), ts = pairwise_ts(fx.series);
    const double alpha = mid_alpha(rng);
    const double cg = std::exp2(log_scale(rng)), ct = std::exp2(log_scale(rng));
    const DistanceMatrix base = mix_distances(geo, ts, alpha);
    const DistanceMatrix other = mix_distances(scaled(geo, cg), scaled(ts, ct), alpha);
    for (std::size_t k = 0; k < base.values().size(); ++k)
      worst_z = std::max(worst_z, std::abs(base.values()[k] - other.values()[k]));
    const MixParams params{alpha, std::nullopt};
    scale_ok += ahc_order(base, Linkage::kWard, params).sequence() ==
                ahc_order(other, Linkage::kWard, params).sequence();
  }
  report(permutation_ok == 20, "mix_alpha0_ignores_series",
         fmt("%d/20 fixtures unchanged after shuffling all series values", permutation_ok));
  report(rigid_ok == 20, "mix_alpha1_ignores_rigid_motion",
         fmt("%d/20 fixtures unchanged after rotation and translation", rigid_ok));
  report(scale_ok == 20, "mix_zscore_scale_invariance",
         fmt("%d/20 orderings unchanged under positive rescaling; max mixed-entry change %.3g",
             scale_ok, worst_z));
}

void pipeline_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto polys = oracle::jittered_cells(20, 20, 2020);
  const std::string geojson = oracle::districts_geojson(polys);
  const RegionSet probe = load_geojson(geojson, {"AGS", false});
  const std::string csv = to_csv(synthetic_series(probe, 1461, 42));
  const double gen_secs = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  auto data = std::make_shared<const Dataset>(
      load_dataset(geojson, csv, DatasetOptions{"AGS", Contiguity::kQueen, false}));
  Session session(data);
  const auto quality = session.quality_json();
  const auto layout = session.layout_json();
  const double secs = seconds_since(t1);
  const bool sized = data->regions.size() == 400 && data->series.cols() == 1461 &&
                     quality["gaps"].size() == 399 && layout["widths"].size() == 1461;
  report(sized && secs < kPipelineSeconds, "pipeline_400x1461_under_30s",
         fmt("load, distances, ordering, gaps, borders, Moran profile and layout in %.2f s "
             "(fixture generation %.2f s)",
             secs, gen_secs));

  const auto sequence = session.ordering_json()["sequence"];
  const auto ord_rev = session.ordering_revision();
  bool kept = true;
  std::string gaps;
  for (int beta : {1, 2, 4, 7, 3}) {
    const auto r = session.set_params({std::nullopt, beta, std::nullopt});
    kept = kept && r["ordering"]["sequence"] == sequence && session.ordering_revision() == ord_rev;
    const auto mask = r["quality"]["gaps"].get<std::vector<bool>>();
    gaps += fmt("%s%d:%ld", gaps.empty() ? "" : " ", beta, long(std::count(mask.begin(), mask.end(), true)));
  }
  report(kept, "pipeline_beta_keeps_ordering", "gaps per beta " + gaps + ", sequence unchanged");

  const std::vector<double> widths = layout["widths"].get<std::vector<double>>();
  const std::vector<double> raw = quality["moran"]["raw"].get<std::vector<double>>();
  const double total = std::accumulate(widths.begin(), widths.end(), 0.0);
  std::vector<std::size_t> idx(raw.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });
  bool iso = true;
  for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
    const double ra = raw[idx[k]], rb = raw[idx[k + 1]];
    const double wa = widths[idx[k]], wb = widths[idx[k + 1]];
    iso = iso && (ra == rb ? wa == wb : wa < wb);
  }

  // random profiles, including ties and constants
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> level(0, 12);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  double worst_sum = std::abs(total - 800.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + trial % 40);
    for (double& v : r) v = trial % 3 ? frac(rng) * 2 - 1 : level(rng) / 12.0;
    const double tot = 50.0 + 10.0 * trial;
    const auto w = column_widths(normalize_profile(r), tot, frac(rng));
    worst_sum = std::max(worst_sum, std::abs(std::accumulate(w.begin(), w.end(), 0.0) - tot));
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < r.size(); ++b)
        iso = iso && ((r[a] < r[b]) == (w[a] < w[b])) && ((r[a] == r[b]) == (w[a] == w[b]));
  }
  report(worst_sum <= kWidthSumTol && iso, "pipeline_widths_follow_moran",
         fmt("max |sum - total| = %.3g over 201 profiles; widths ordered exactly as Moran's I",
             worst_sum));
}

}  // namespace

int main() {
  hilbert_criterion();
  morton_criterion();
  diagonal_criterion();
  moran_criterion();
  bfs_criterion();
  olo_criterion();
  mix_criterion();
  pipeline_criteria();
  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
