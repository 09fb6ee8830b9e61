// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/shape.hpp"

namespace critsplit {

/// Height D (birth height of the leaf) and hop count L of one leaf.
struct LeafHeight {
    double height = 0.0;
    std::int32_t hops = 0;
};

LeafHeight leaf_height(const CladeTree& tree, std::int64_t label);

/// Largest leaf height.
double max_height(const CladeTree& tree);

/// Shape of every clade, indexed by node id.
std::vector<ShapeId> clade_shapes(const CladeTree& tree, ShapeInterner& shapes,
                                  std::int64_t size_cap = INT64_MAX);

/// Shape of the single clade rooted at `top`.
ShapeId clade_shape(const CladeTree& tree, NodeId top, ShapeInterner& shapes);

/// Clade counts of one tree: counts[j] = N_n(j), the number of clades with j leaves,
/// and the number of clades of each shape. Leaves count as clades of size 1.
struct SubtreeCensus {
    std::int64_t n = 0;
    std::vector<std::int64_t> counts;
    std::shared_ptr<ShapeInterner> shapes;
    std::unordered_map<ShapeId, std::int64_t> shape_counts;

    std::int64_t count_of_size(std::int64_t j) const;
    /// N_n(chi) for a canonical shape string; 0 when absent.
    std::int64_t count_of_shape(std::string_view canonical) const;
    /// K_n: number of distinct shapes among all clades (leaf and cherry included).
    std::int64_t distinct_shapes() const { return static_cast<std::int64_t>(shape_counts.size()); }
};

/// One pass over the tree. Shapes larger than size_cap are not interned.
/// A fresh interner is created when none is supplied.
SubtreeCensus subtree_census(const CladeTree& tree, std::shared_ptr<ShapeInterner> shapes = nullptr,
                             std::int64_t size_cap = INT64_MAX);

/// Statistics with no theory attached.
struct ExploratoryStats {
    std::int64_t distinct_shapes = 0;
    /// Largest size of a shape occurring at least twice (0 if none).
    std::int64_t largest_repeated = 0;
    /// Smallest size s for which some shape of size s does not occur.
    std::int64_t smallest_absent = 0;
};

ExploratoryStats exploratory_stats(const SubtreeCensus& census);

/// Blocks of leaf labels of the clades alive at time t, in least-element order.
struct LevelPartition {
    double t = 0.0;
    std::int64_t n = 0;
    std::vector<std::vector<std::int64_t>> blocks;  ///< each sorted ascending

    std::vector<double> proportions() const;
    std::vector<std::int64_t> sizes() const;
};

/// A clade is alive on [birth, split). A split exactly at t counts as done.
LevelPartition level_cut(const CladeTree& tree, double t);

/// Sizes of the alive clades at t (node order, no labels needed).
std::vector<std::int64_t> level_cut_sizes(const CladeTree& tree, double t);

/// Q_n(t) = sum of squared block sizes.
std::int64_t sum_of_squares(const CladeTree& tree, double t);

/// Height at which the paths to the two leaves separate.
double branchpoint_height(const CladeTree& tree, std::int64_t label1, std::int64_t label2);

/// Lowest common ancestor of two nodes.
NodeId lowest_common_ancestor(const CladeTree& tree, NodeId a, NodeId b);

}  // namespace critsplit
