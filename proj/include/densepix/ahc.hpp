#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "densepix/distance.hpp"
#include "densepix/ordering.hpp"

namespace densepix {

/// One agglomeration step. Node ids follow the usual linkage-matrix
/// convention: leaves are 0..n-1, the cluster formed at step s is n+s.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  // Left-to-right leaves under `node` without any flips.
  std::vector<std::size_t> leaf_order(std::size_t node) const;
  std::vector<std::size_t> leaf_order() const;
  std::size_t root() const { return merges.empty() ? 0 : leaves + merges.size() - 1; }
};

/// Ward clustering via the Lance-Williams update on a row-major n x n
/// matrix of non-negative dissimilarities (read as squared distances).
///
/// Ties between equal merge costs go to the pair whose smallest leaf
/// indices are lexicographically smallest; the merged cluster's left child is
/// the one holding the smaller leaf index.
Dendrogram ward_linkage(std::span<const double> dissimilarity, std::size_t n);

/// Leaf order minimizing the sum of consecutive dissimilarities over all
/// 2^(n-1) child flips of the dendrogram (exact dynamic program). Among equal
/// costs the order with the smaller first leaf, then the smaller last leaf,
/// wins.
std::vector<std::size_t> optimal_leaf_order(const Dendrogram& tree,
                                            std::span<const double> dissimilarity,
                                            std::size_t n);

double consecutive_cost(std::span<const std::size_t> order, std::span<const double> dissimilarity,
                        std::size_t n);

/// Shifts the off-diagonal entries by their minimum so they are
/// non-negative, clusters with the given linkage and reads the optimal leaf
/// order. Leaf indices follow ascending id order so ties resolve toward the
/// lexicographically smaller id sequence.
Ordering ahc_order(const DistanceMatrix& d, Linkage linkage = Linkage::kWard,
                   const MixParams& params = {});

}  // namespace densepix
