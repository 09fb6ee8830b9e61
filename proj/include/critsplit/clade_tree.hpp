// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "critsplit/rng.hpp"

namespace critsplit {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// How leaves are labelled.
///  - ordered: labels 1..n left to right
///  - unordered: labels 1..n uniformly permuted (exchangeable)
///  - unlabelled: no labels (every leaf label is 0)
enum class LabelMode { ordered, unordered, unlabelled };

/// continuous: CTCS edge lengths; discrete: every edge has length 1 (DTCS).
enum class TimeModel { continuous, discrete };

enum class LabelCompaction { keep, compact };

struct Node {
    NodeId parent = kNoNode;
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    double birth_height = 0.0;  ///< time the clade appears; root is 0
    std::int32_t hop_depth = 0;
    std::int64_t n_leaves = 1;
    std::int64_t label = 0;       ///< leaves only; 0 when unlabelled
    std::int32_t leaf_slot = -1;  ///< index into CladeTree::leaves() for leaves

    bool is_leaf() const noexcept { return left == kNoNode; }
};

/// Rooted binary tree in the "vertical line per clade" representation: every node
/// carries the height at which its clade is born; an internal node's clade splits
/// at the birth height of its children.
class CladeTree {
public:
    /// CTCS(1): a single bud at height 0.
    static CladeTree single_leaf(LabelMode mode = LabelMode::unordered,
                                 TimeModel time = TimeModel::continuous);

    LabelMode label_mode() const noexcept { return mode_; }
    TimeModel time_model() const noexcept { return time_; }
    NodeId root() const noexcept { return root_; }
    std::int64_t leaf_count() const noexcept { return static_cast<std::int64_t>(leaves_.size()); }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<const NodeId> leaves() const noexcept { return leaves_; }

    /// Height at which the clade of `id` splits (+inf for leaves).
    double split_height(NodeId id) const;

    /// Leaf carrying `label`; throws NotFoundError.
    NodeId leaf_of(std::int64_t label) const;
    bool has_label(std::int64_t label) const noexcept;
    std::int64_t max_label() const noexcept { return max_label_; }

    /// Labels in node order of leaves() (dense, unspecified order).
    std::vector<std::int64_t> labels() const;

    /// Leaf labels of the clade rooted at `id`, in left-to-right order.
    std::vector<std::int64_t> clade_labels(NodeId id) const;

    /// Sum over all edges of (birth of child - birth of parent).
    double total_edge_length() const;

    /// Path root -> id (inclusive).
    std::vector<NodeId> path_from_root(NodeId id) const;

    /// Capacity hint for trees that will grow to n leaves.
    void reserve_leaves(std::int64_t n);

    /// Throws ContractError describing the first violated structural invariant.
    void check_invariants() const;

    /// Structural equality: same shape, child order, heights, depths and labels.
    bool operator==(const CladeTree& other) const;

    /// Node array dump: {"schema":"v1","n_leaves":..,"nodes":[{id,parent,birth_height,label}]}
    std::string to_json() const;

    // Construction and mutation are in tree_sampler.cpp.
    friend class TreeBuilder;
    friend std::int64_t grow_step(CladeTree& tree, Rng& rng);
    friend void delete_and_prune(CladeTree& tree, std::int64_t label, LabelCompaction compaction);
    friend void erase_edge_lengths(CladeTree& tree);

private:
    NodeId add_node(const Node& n);
    void shift_depths(NodeId top, std::int32_t delta);
    void remove_node(NodeId id);
    void rebuild_label_index();

    LabelMode mode_ = LabelMode::unordered;
    TimeModel time_ = TimeModel::continuous;
    NodeId root_ = kNoNode;
    std::vector<Node> nodes_;
    std::vector<NodeId> leaves_;
    std::vector<NodeId> label_index_;  ///< label -> leaf node, kNoNode when absent
    std::int64_t max_label_ = 0;
};

/// CTCS(n) by recursive splitting; n = 1 gives a bare root leaf.
/// Per clade the stream is consumed as: split size, then holding time. In unordered
/// mode one uniform permutation of the labels is drawn after the build.
CladeTree sample_ctcs(std::int64_t n, LabelMode mode, Rng& rng);

/// DTCS(n): sample_ctcs followed by replacing every birth height by the hop depth.
CladeTree sample_dtcs(std::int64_t n, LabelMode mode, Rng& rng);

/// Replaces edge lengths by 1 (CTCS -> DTCS).
void erase_edge_lengths(CladeTree& tree);

/// One step of the growth algorithm: walk toward a uniform bud with stop rate
/// 1/(clade size) and attach a new bud at the stop height on a uniform side.
/// Returns the label of the new bud (max label + 1). Existing branchpoints never move.
/// Requires an unordered continuous-time tree.
std::int64_t grow_step(CladeTree& tree, Rng& rng);

/// Grows CTCS(1) -> CTCS(n).
CladeTree grow_tree(std::int64_t n, Rng& rng);

/// Removes the leaf and its mother; the sibling inherits the mother's birth height.
void delete_and_prune(CladeTree& tree, std::int64_t label,
                      LabelCompaction compaction = LabelCompaction::keep);

}  // namespace critsplit
