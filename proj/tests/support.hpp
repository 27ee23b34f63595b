#pragma once

// Fixtures and brute-force oracles shared by the test binaries. Nothing here
// calls into the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Edge = std::pair<std::size_t, std::size_t>;

inline std::string cell_id(int x, int y) { return std::to_string(x) + "_" + std::to_string(y); }

// Unit-cell adjacency by coordinates alone.
inline std::set<Edge> grid_edges(int w, int h, bool queen) {
  std::set<Edge> out;
  for (int a = 0; a < w * h; ++a) {
    for (int b = a + 1; b < w * h; ++b) {
      const int dx = std::abs(a % w - b % w);
      const int dy = std::abs(a / w - b / w);
      const bool rook = dx + dy == 1;
      const bool touch = std::max(dx, dy) == 1;
      if (queen ? touch : rook) out.emplace(a, b);
    }
  }
  return out;
}

struct P {
  double x, y;
};
using Poly = std::vector<P>;  // open ring

// Exhaustive pairwise edge test on exact (integer-valued) coordinates.
// Returns {rook, queen}: a collinear overlap of positive length, or any contact.
inline std::pair<bool, bool> touches(const Poly& a, const Poly& b) {
  bool line = false;
  bool point = false;
  auto cross = [](P o, P p, P q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };
  auto on_segment = [&](P p, P s, P e) {
    return cross(s, e, p) == 0 && std::min(s.x, e.x) <= p.x && p.x <= std::max(s.x, e.x) &&
           std::min(s.y, e.y) <= p.y && p.y <= std::max(s.y, e.y);
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const P s1 = a[i], e1 = a[(i + 1) % a.size()];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const P s2 = b[j], e2 = b[(j + 1) % b.size()];
      const bool collinear = cross(s1, e1, s2) == 0 && cross(s1, e1, e2) == 0;
      if (collinear) {
        // project on the dominant axis
        const bool use_x = std::abs(e1.x - s1.x) >= std::abs(e1.y - s1.y);
        auto t = [&](P p) { return use_x ? p.x : p.y; };
        const double lo = std::max(std::min(t(s1), t(e1)), std::min(t(s2), t(e2)));
        const double hi = std::min(std::max(t(s1), t(e1)), std::max(t(s2), t(e2)));
        if (hi > lo) line = true;
        if (hi >= lo) point = true;
        continue;
      }
      const double d1 = cross(s2, e2, s1), d2 = cross(s2, e2, e1);
      const double d3 = cross(s1, e1, s2), d4 = cross(s1, e1, e2);
      if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        point = true;
      }
      if (on_segment(s1, s2, e2) || on_segment(e1, s2, e2) || on_segment(s2, s1, e1) ||
          on_segment(e2, s1, e1)) {
        point = true;
      }
    }
  }
  return {line, line || point};
}

inline std::set<Edge> polygon_edges(const std::vector<Poly>& polys, bool queen) {
  std::set<Edge> out;
  for (std::size_t a = 0; a < polys.size(); ++a) {
    for (std::size_t b = a + 1; b < polys.size(); ++b) {
      const auto [rook, any] = touches(polys[a], polys[b]);
      if (queen ? any : rook) out.emplace(a, b);
    }
  }
  return out;
}

inline std::vector<Poly> unit_cells(int w, int h) {
  std::vector<Poly> out;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.push_back({{double(x), double(y)}, {x + 1.0, double(y)}, {x + 1.0, y + 1.0}, {double(x), y + 1.0}});
  return out;
}

// Quadrilateral cells over a lattice whose interior vertices are jittered by
// whole units on a 4x scale, so neighbors share edges exactly.
inline std::vector<Poly> jittered_cells(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> jitter(-1, 1);
  std::vector<P> v((w + 1) * (h + 1));
  for (int y = 0; y <= h; ++y) {
    for (int x = 0; x <= w; ++x) {
      const bool interior = x > 0 && x < w && y > 0 && y < h;
      v[y * (w + 1) + x] = {4.0 * x + (interior ? jitter(rng) : 0), 4.0 * y + (interior ? jitter(rng) : 0)};
    }
  }
  std::vector<Poly> out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.push_back({v[y * (w + 1) + x], v[y * (w + 1) + x + 1], v[(y + 1) * (w + 1) + x + 1],
                     v[(y + 1) * (w + 1) + x]});
    }
  }
  return out;
}

inline std::string ring_json(const Poly& p) {
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i <= p.size(); ++i) {
    const P q = p[i % p.size()];
    s << (i ? "," : "") << '[' << q.x << ',' << q.y << ']';
  }
  s << ']';
  return s.str();
}

// FeatureCollection with ids "d0".."dN"; every seventh feature is written as a
// MultiPolygon with a detached islet far outside the lattice.
inline std::string districts_geojson(const std::vector<Poly>& polys) {
  std::ostringstream s;
  s << "{\"type\": \"FeatureCollection\", \"features\": [\n";
  for (std::size_t i = 0; i < polys.size(); ++i) {
    s << (i ? ",\n" : "") << "{\"type\": \"Feature\", \"properties\": {\"AGS\": \"d" << i
      << "\"}, \"geometry\": ";
    if (i % 7 == 3) {
      const double ox = 10000.0 + 10.0 * i;
      const Poly islet{{ox, 0}, {ox + 1, 0}, {ox + 1, 1}};
      s << "{\"type\": \"MultiPolygon\", \"coordinates\": [[" << ring_json(polys[i]) << "], ["
        << ring_json(islet) << "]]}";
    } else {
      s << "{\"type\": \"Polygon\", \"coordinates\": [" << ring_json(polys[i]) << "]}";
    }
    s << '}';
  }
  s << "\n]}\n";
  return s.str();
}

inline std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// All-pairs hop counts; kInf for disconnected pairs.
inline std::vector<int> floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<int> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
  for (auto [u, v] : edges) d[u * n + v] = d[v * n + u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i * n + k] + d[k * n + j] < d[i * n + j]) d[i * n + j] = d[i * n + k] + d[k * n + j];
  return d;
}

inline std::vector<Edge> random_edges(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  std::vector<Edge> out;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (keep(rng)) out.emplace_back(u, v);
  return out;
}

// Moran's I evaluated straight from the definition with a dense weight matrix.
inline double moran(const std::vector<double>& x, std::size_t n, const std::vector<Edge>& edges) {
  std::vector<double> w(n * n, 0.0);
  for (auto [u, v] : edges) w[u * n + v] = w[v * n + u] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += w[i * n + j];
    if (row > 0)
      for (std::size_t j = 0; j < n; ++j) w[i * n + j] /= row;
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= double(n);
  double num = 0.0, den = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    for (std::size_t j = 0; j < n; ++j) {
      num += w[i * n + j] * (x[i] - mean) * (x[j] - mean);
      total += w[i * n + j];
    }
  }
  if (den == 0.0 || total == 0.0) return 0.0;
  return double(n) / total * num / den;
}

// Every leaf order reachable by flipping children of a binary tree given as
// merges (left, right) over leaves 0..n-1 and internal nodes n+s.
inline std::vector<std::vector<std::size_t>> all_flips(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& merges) {
  std::vector<std::vector<std::vector<std::size_t>>> orders(n + merges.size());
  for (std::size_t i = 0; i < n; ++i) orders[i] = {{i}};
  for (std::size_t s = 0; s < merges.size(); ++s) {
    auto& out = orders[n + s];
    for (const auto& l : orders[merges[s].first]) {
      for (const auto& r : orders[merges[s].second]) {
        std::vector<std::size_t> lr(l), rl(r);
        lr.insert(lr.end(), r.begin(), r.end());
        rl.insert(rl.end(), l.begin(), l.end());
        out.push_back(std::move(lr));
        out.push_back(std::move(rl));
      }
    }
  }
  return orders.back();
}

inline double path_cost(const std::vector<std::size_t>& order, const std::vector<double>& d,
                        std::size_t n) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) c += d[order[i] * n + order[i + 1]];
  return c;
}

// Standard z-scores of a list with population sigma.
inline std::vector<double> zscores(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / double(v.size()));
  std::vector<double> out;
  for (double x : v) out.push_back(sd == 0.0 ? 0.0 : (x - mean) / sd);
  return out;
}

// Hilbert cells of a 2^k grid by recursive quadrant construction, independent
// of the iterative d2xy walk.
inline void hilbert_rec(double x0, double y0, double xi, double xj, double yi, double yj, int k,
                        std::vector<std::pair<int, int>>& out) {
  if (k == 0) {
    out.emplace_back(int(std::floor(x0 + (xi + yi) / 2)), int(std::floor(y0 + (xj + yj) / 2)));
    return;
  }
  hilbert_rec(x0, y0, yi / 2, yj / 2, xi / 2, xj / 2, k - 1, out);
  hilbert_rec(x0 + xi / 2, y0 + xj / 2, xi / 2, xj / 2, yi / 2, yj / 2, k - 1, out);
  hilbert_rec(x0 + xi / 2 + yi / 2, y0 + xj / 2 + yj / 2, xi / 2, xj / 2, yi / 2, yj / 2, k - 1, out);
  hilbert_rec(x0 + xi / 2 + yi, y0 + xj / 2 + yj, -yi / 2, -yj / 2, -xi / 2, -xj / 2, k - 1, out);
}

// Morton cell at index d: even bits to x, odd bits to y.
inline std::pair<int, int> morton_cell(int d) {
  int x = 0, y = 0;
  for (int b = 0; b < 16; ++b) {
    x |= ((d >> (2 * b)) & 1) << b;
    y |= ((d >> (2 * b + 1)) & 1) << b;
  }
  return {x, y};
}

}  // namespace oracle
