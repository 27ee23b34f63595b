#include "densepix/ahc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "densepix/error.hpp"

namespace densepix {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<std::size_t> Dendrogram::leaf_order(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v < leaves) {
      out.push_back(v);
    } else {
      const Merge& m = merges[v - leaves];
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
  return out;
}

std::vector<std::size_t> Dendrogram::leaf_order() const {
  if (leaves == 0) return {};
  return leaf_order(root());
}

Dendrogram ward_linkage(std::span<const double> dissimilarity, std::size_t n) {
  if (dissimilarity.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "dissimilarity matrix must be n x n");
  }
  Dendrogram tree{n, {}};
  if (n < 2) return tree;
  tree.merges.reserve(n - 1);

  // Slot i always holds the active cluster whose smallest leaf is i.
  std::vector<double> d(dissimilarity.begin(), dissimilarity.end());
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), 0);
  std::vector<bool> active(n, true);
  std::vector<std::size_t> nn(n, kNone);
  std::vector<double> nn_dist(n, kInf);

  // Nearest active partner among higher slots; ties go to the lower slot.
  auto refresh = [&](std::size_t i) {
    nn[i] = kNone;
    nn_dist[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (active[j] && d[i * n + j] < nn_dist[i]) {
        nn_dist[i] = d[i * n + j];
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t i = kNone;
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && nn[k] != kNone && (i == kNone || nn_dist[k] < nn_dist[i])) i = k;
    }
    const std::size_t j = nn[i];
    const double dij = d[i * n + j];
    tree.merges.push_back({node[i], node[j], dij, size[i] + size[j]});

    const double ni = static_cast<double>(size[i]);
    const double nj = static_cast<double>(size[j]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == i || k == j) continue;
      const double nk = static_cast<double>(size[k]);
      const double updated =
          ((ni + nk) * d[i * n + k] + (nj + nk) * d[j * n + k] - nk * dij) / (ni + nj + nk);
      d[i * n + k] = d[k * n + i] = updated;
    }
    active[j] = false;
    size[i] += size[j];
    node[i] = n + step;

    refresh(i);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == i) continue;
      if (nn[k] == i || nn[k] == j) {
        refresh(k);
      } else if (k < i && (d[k * n + i] < nn_dist[k] ||
                           (d[k * n + i] == nn_dist[k] && i < nn[k]))) {
        nn[k] = i;
        nn_dist[k] = d[k * n + i];
      }
    }
  }
  return tree;
}

double consecutive_cost(std::span<const std::size_t> order, std::span<const double> dissimilarity,
                        std::size_t n) {
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    cost += dissimilarity[order[i] * n + order[i + 1]];
  }
  return cost;
}

std::vector<std::size_t> optimal_leaf_order(const Dendrogram& tree,
                                            std::span<const double> dissimilarity,
                                            std::size_t n) {
  if (tree.leaves != n || dissimilarity.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "dendrogram does not match the matrix");
  }
  if (n == 0) return {};
  if (n == 1) return {0};
  if (tree.merges.size() != n - 1) {
    throw Error(ErrorCode::kInvalidArgument, "dendrogram is incomplete");
  }
  auto dis = [&](std::size_t a, std::size_t b) { return dissimilarity[a * n + b]; };

  // Every leaf pair (u, w) has a unique lowest common ancestor, so one n x n
  // table holds the best cost of that subtree's ordering running from u to w,
  // and split[u][w] its inner junction (end of u's half, start of w's half).
  std::vector<double> best(n * n, 0.0);
  std::vector<std::uint32_t> split_end(n * n, 0);
  std::vector<std::uint32_t> split_start(n * n, 0);

  const std::vector<std::size_t> order = tree.leaf_order();
  // Leaves of every node form a contiguous run of the unflipped order.
  const std::size_t nodes = n + tree.merges.size();
  std::vector<std::size_t> lo(nodes), hi(nodes);
  std::vector<std::size_t> where(n);
  for (std::size_t p = 0; p < n; ++p) where[order[p]] = p;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    lo[leaf] = where[leaf];
    hi[leaf] = where[leaf] + 1;
  }
  for (std::size_t s = 0; s < tree.merges.size(); ++s) {
    const Merge& m = tree.merges[s];
    lo[n + s] = std::min(lo[m.left], lo[m.right]);
    hi[n + s] = std::max(hi[m.left], hi[m.right]);
  }

  // Candidate far ends for an ordering of `side` that starts at leaf u: the
  // leaf itself, or the leaves of the child of `side` not containing u.
  auto far_ends = [&](std::size_t side, std::size_t u, std::vector<std::size_t>& out) {
    out.clear();
    if (side < n) {
      out.push_back(u);
      return;
    }
    const Merge& m = tree.merges[side - n];
    const std::size_t p = where[u];
    const std::size_t other = (p >= lo[m.left] && p < hi[m.left]) ? m.right : m.left;
    for (std::size_t q = lo[other]; q < hi[other]; ++q) out.push_back(order[q]);
    std::sort(out.begin(), out.end());
  };
  auto inner = [&](std::size_t u, std::size_t m) { return u == m ? 0.0 : best[u * n + m]; };

  std::vector<std::size_t> ends;
  std::vector<double> via;             // |A| x |B|: best cost from u to the junction k
  std::vector<std::uint32_t> via_end;  // the m attaining it
  for (std::size_t s = 0; s < tree.merges.size(); ++s) {
    const Merge& m = tree.merges[s];
    std::vector<std::size_t> a(order.begin() + lo[m.left], order.begin() + hi[m.left]);
    std::vector<std::size_t> b(order.begin() + lo[m.right], order.begin() + hi[m.right]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // Two passes, once per orientation: u from `first`, w from `second`.
    for (int pass = 0; pass < 2; ++pass) {
      const auto& first = pass == 0 ? a : b;
      const auto& second = pass == 0 ? b : a;
      const std::size_t first_node = pass == 0 ? m.left : m.right;
      const std::size_t second_node = pass == 0 ? m.right : m.left;
      const std::size_t fa = first.size();
      const std::size_t sb = second.size();
      via.assign(fa * sb, kInf);
      via_end.assign(fa * sb, 0);
      for (std::size_t iu = 0; iu < fa; ++iu) {
        const std::size_t u = first[iu];
        far_ends(first_node, u, ends);
        for (std::size_t ik = 0; ik < sb; ++ik) {
          const std::size_t k = second[ik];
          double cost = kInf;
          std::size_t arg = 0;
          for (std::size_t e : ends) {
            const double c = inner(u, e) + dis(e, k);
            if (c < cost) {
              cost = c;
              arg = e;
            }
          }
          via[iu * sb + ik] = cost;
          via_end[iu * sb + ik] = static_cast<std::uint32_t>(arg);
        }
      }
      // index of each leaf inside `second`
      std::vector<std::size_t> second_index(n, 0);
      for (std::size_t ik = 0; ik < sb; ++ik) second_index[second[ik]] = ik;
      for (std::size_t iw = 0; iw < sb; ++iw) {
        const std::size_t w = second[iw];
        far_ends(second_node, w, ends);
        for (std::size_t iu = 0; iu < fa; ++iu) {
          const std::size_t u = first[iu];
          double cost = kInf;
          std::size_t arg_k = 0;
          for (std::size_t k : ends) {
            const double c = via[iu * sb + second_index[k]] + inner(k, w);
            if (c < cost) {
              cost = c;
              arg_k = k;
            }
          }
          best[u * n + w] = cost;
          split_end[u * n + w] = via_end[iu * sb + second_index[arg_k]];
          split_start[u * n + w] = static_cast<std::uint32_t>(arg_k);
        }
      }
    }
    // The path w..u is u..w reversed; copy it from the orientation that
    // starts at the smaller leaf so both carry bitwise equal costs.
    for (std::size_t u : a) {
      for (std::size_t w : b) {
        const std::size_t lo_leaf = std::min(u, w), hi_leaf = std::max(u, w);
        const std::size_t from = lo_leaf * n + hi_leaf, to = hi_leaf * n + lo_leaf;
        best[to] = best[from];
        split_end[to] = split_start[from];
        split_start[to] = split_end[from];
      }
    }
  }

  const Merge& top = tree.merges.back();
  std::size_t start = kNone;
  std::size_t finish = kNone;
  double best_cost = kInf;
  for (std::size_t u = 0; u < n; ++u) {
    const bool in_left = where[u] >= lo[top.left] && where[u] < hi[top.left];
    const std::size_t other = in_left ? top.right : top.left;
    for (std::size_t q = lo[other]; q < hi[other]; ++q) {
      const std::size_t w = order[q];
      const double c = best[u * n + w];
      if (c < best_cost || (c == best_cost && (u < start || (u == start && w < finish)))) {
        best_cost = c;
        start = u;
        finish = w;
      }
    }
  }

  std::vector<std::size_t> out;
  out.reserve(n);
  // Expand (u, w) into its ordering; explicit stack keeps deep chains safe.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{start, finish}};
  while (!stack.empty()) {
    const auto [u, w] = stack.back();
    stack.pop_back();
    if (u == w) {
      out.push_back(u);
      continue;
    }
    const std::size_t e = split_end[u * n + w];
    const std::size_t k = split_start[u * n + w];
    stack.emplace_back(k, w);
    stack.emplace_back(u, e);
  }
  return out;
}

Ordering ahc_order(const DistanceMatrix& d, Linkage linkage, const MixParams& params) {
  (void)linkage;  // Ward is the only linkage.
  const std::size_t n = d.size();
  AhcProvenance provenance{params.alpha, Linkage::kWard, params.extent};
  if (n == 0) return Ordering({}, provenance);

  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return d.ids()[a] < d.ids()[b]; });

  double floor = kInf;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) floor = std::min(floor, d(i, j));
  if (n < 2) floor = 0.0;

  std::vector<double> shifted(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = d(by_id[i], by_id[j]);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kBadValue, "dissimilarities must be finite");
      }
      shifted[i * n + j] = v - floor;
    }
  }

  const Dendrogram tree = ward_linkage(shifted, n);
  const std::vector<std::size_t> leaves = optimal_leaf_order(tree, shifted, n);
  std::vector<std::string> sequence;
  sequence.reserve(n);
  for (std::size_t leaf : leaves) sequence.push_back(d.ids()[by_id[leaf]]);
  return Ordering(std::move(sequence), provenance);
}

}  // namespace densepix
