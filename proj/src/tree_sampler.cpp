// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "critsplit/clade_tree.hpp"
#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "tree_builder.hpp"

namespace critsplit {

namespace {

struct PendingClade {
    NodeId id;
    std::int64_t size;
    std::int64_t first_label;  // ordered labels first_label .. first_label + size - 1
};

}  // namespace

CladeTree sample_ctcs(std::int64_t n, LabelMode mode, Rng& rng) {
    if (n < 1) throw DomainError("sample_ctcs: need n >= 1");
    if (n > (std::int64_t{1} << 30)) throw ResourceError("sample_ctcs: n too large");
    TreeBuilder b(mode, TimeModel::continuous);
    b.reserve(static_cast<std::size_t>(2 * n - 1));
    Node root;
    root.n_leaves = n;
    b.set_root(b.add(root));

    // Explicit stack: combs of depth n-1 must not recurse.
    std::vector<PendingClade> stack{{0, n, 1}};
    while (!stack.empty()) {
        const PendingClade c = stack.back();
        stack.pop_back();
        if (c.size == 1) {
            b.at(c.id).label = mode == LabelMode::unlabelled ? 0 : c.first_label;
            continue;
        }
        const std::int64_t left_size = sample_split(c.size, rng);
        const double hold = rng.exponential(harmonic(c.size - 1));
        const Node parent = b.at(c.id);

        Node child;
        child.parent = c.id;
        child.birth_height = parent.birth_height + hold;
        child.hop_depth = parent.hop_depth + 1;
        child.n_leaves = left_size;
        const NodeId left = b.add(child);
        child.n_leaves = c.size - left_size;
        const NodeId right = b.add(child);
        b.at(c.id).left = left;
        b.at(c.id).right = right;
        stack.push_back({right, c.size - left_size, c.first_label + left_size});
        stack.push_back({left, left_size, c.first_label});
    }

    CladeTree tree = b.finish();
    if (mode == LabelMode::unordered && n > 1) {
        // One uniform relabelling is equivalent to uniform subset choice at every split.
        std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), std::int64_t{1});
        for (std::size_t k = perm.size() - 1; k > 0; --k) {
            std::swap(perm[k], perm[rng.below(k + 1)]);
        }
        TreeBuilder relabel(mode, TimeModel::continuous);
        relabel.reserve(tree.node_count());
        for (const Node& nd : tree.nodes()) {
            Node copy = nd;
            if (copy.is_leaf()) copy.label = perm[static_cast<std::size_t>(copy.label - 1)];
            relabel.add(copy);
        }
        relabel.set_root(tree.root());
        tree = relabel.finish();
    }
    return tree;
}

void erase_edge_lengths(CladeTree& tree) {
    for (Node& n : tree.nodes_) n.birth_height = static_cast<double>(n.hop_depth);
    tree.time_ = TimeModel::discrete;
}

CladeTree sample_dtcs(std::int64_t n, LabelMode mode, Rng& rng) {
    CladeTree tree = sample_ctcs(n, mode, rng);
    erase_edge_lengths(tree);
    return tree;
}

std::int64_t grow_step(CladeTree& tree, Rng& rng) {
    if (tree.label_mode() != LabelMode::unordered) {
        throw ContractError("grow_step: growth is defined for unordered trees only");
    }
    if (tree.time_model() != TimeModel::continuous) {
        throw ContractError("grow_step: growth needs continuous-time edge lengths");
    }
    const auto n = static_cast<std::uint64_t>(tree.leaf_count());
    const NodeId target = tree.leaves_[rng.below(n)];
    double budget = rng.exponential(1.0);  // cumulative stop hazard until the stop event
    const bool new_on_left = rng.coin();

    // Walk root -> target; the clade of node v is alive on [birth(v), split(v)).
    thread_local std::vector<NodeId> path;
    path.clear();
    for (NodeId v = target; v != kNoNode; v = tree.node(v).parent) path.push_back(v);

    NodeId stop_clade = target;
    double stop_height = 0.0;
    for (std::size_t k = path.size(); k-- > 0;) {
        const NodeId v = path[k];
        const Node& nd = tree.node(v);
        const double size = static_cast<double>(nd.n_leaves);
        if (nd.is_leaf()) {
            stop_clade = v;
            stop_height = nd.birth_height + budget * size;
            break;
        }
        const double hazard = (tree.split_height(v) - nd.birth_height) / size;
        if (budget <= hazard) {
            stop_clade = v;
            stop_height = nd.birth_height + budget * size;
            // Guard against rounding onto the branchpoint itself.
            stop_height = std::min(stop_height, std::nextafter(tree.split_height(v), 0.0));
            break;
        }
        budget -= hazard;
    }
    const Node old = tree.node(stop_clade);
    if (!(stop_height > old.birth_height)) stop_height = std::nextafter(old.birth_height, INFINITY);

    // The clade v becomes the child of a new mother w born where v was; the new bud
    // and v are both born at the stop height.
    const std::int64_t new_label = tree.max_label_ + 1;
    Node mother;
    mother.parent = old.parent;
    mother.birth_height = old.birth_height;
    mother.hop_depth = old.hop_depth;
    mother.n_leaves = old.n_leaves + 1;
    const NodeId w = tree.add_node(mother);

    Node bud;
    bud.parent = w;
    bud.birth_height = stop_height;
    bud.hop_depth = old.hop_depth + 1;
    bud.n_leaves = 1;
    bud.label = new_label;
    bud.leaf_slot = static_cast<std::int32_t>(tree.leaves_.size());
    const NodeId b = tree.add_node(bud);
    tree.leaves_.push_back(b);

    if (old.parent == kNoNode) {
        tree.root_ = w;
    } else {
        Node& p = tree.nodes_[static_cast<std::size_t>(old.parent)];
        if (p.left == stop_clade) p.left = w; else p.right = w;
    }
    Node& wn = tree.nodes_[static_cast<std::size_t>(w)];
    wn.left = new_on_left ? b : stop_clade;
    wn.right = new_on_left ? stop_clade : b;
    Node& vn = tree.nodes_[static_cast<std::size_t>(stop_clade)];
    vn.parent = w;
    vn.birth_height = stop_height;
    tree.shift_depths(stop_clade, +1);
    for (NodeId a = tree.node(w).parent; a != kNoNode; a = tree.node(a).parent) {
        tree.nodes_[static_cast<std::size_t>(a)].n_leaves += 1;
    }

    tree.max_label_ = new_label;
    if (tree.label_index_.size() <= static_cast<std::size_t>(new_label)) {
        tree.label_index_.resize(static_cast<std::size_t>(new_label) + 1, kNoNode);
    }
    tree.label_index_[static_cast<std::size_t>(new_label)] = b;
    return new_label;
}

CladeTree grow_tree(std::int64_t n, Rng& rng) {
    if (n < 1) throw DomainError("grow_tree: need n >= 1");
    CladeTree tree = CladeTree::single_leaf(LabelMode::unordered, TimeModel::continuous);
    tree.reserve_leaves(n);
    for (std::int64_t k = 1; k < n; ++k) grow_step(tree, rng);
    return tree;
}

void delete_and_prune(CladeTree& tree, std::int64_t label, LabelCompaction compaction) {
    if (tree.label_mode() == LabelMode::unlabelled) {
        throw NotFoundError("delete_and_prune: unlabelled tree has no label " + std::to_string(label));
    }
    const NodeId x = tree.leaf_of(label);
    if (tree.leaf_count() < 2) throw DomainError("delete_and_prune: cannot delete the only leaf");

    const NodeId w = tree.node(x).parent;
    const Node mother = tree.node(w);
    const NodeId s = mother.left == x ? mother.right : mother.left;

    // Sibling line merges with the mother's line.
    Node& sn = tree.nodes_[static_cast<std::size_t>(s)];
    sn.parent = mother.parent;
    sn.birth_height = mother.birth_height;
    if (mother.parent == kNoNode) {
        tree.root_ = s;
    } else {
        Node& g = tree.nodes_[static_cast<std::size_t>(mother.parent)];
        if (g.left == w) g.left = s; else g.right = s;
    }
    tree.shift_depths(s, -1);
    for (NodeId a = mother.parent; a != kNoNode; a = tree.node(a).parent) {
        tree.nodes_[static_cast<std::size_t>(a)].n_leaves -= 1;
    }

    // Drop x from the leaf list.
    const auto slot = static_cast<std::size_t>(tree.node(x).leaf_slot);
    const NodeId last_leaf = tree.leaves_.back();
    tree.leaves_[slot] = last_leaf;
    tree.nodes_[static_cast<std::size_t>(last_leaf)].leaf_slot = static_cast<std::int32_t>(slot);
    tree.leaves_.pop_back();
    tree.label_index_[static_cast<std::size_t>(label)] = kNoNode;

    // Unlink x and w, then compact storage (higher index first so the other stays valid).
    tree.nodes_[static_cast<std::size_t>(x)].parent = kNoNode;
    tree.nodes_[static_cast<std::size_t>(w)].left = kNoNode;
    tree.nodes_[static_cast<std::size_t>(w)].right = kNoNode;
    tree.nodes_[static_cast<std::size_t>(w)].parent = kNoNode;
    tree.nodes_[static_cast<std::size_t>(w)].label = 0;
    tree.nodes_[static_cast<std::size_t>(x)].label = 0;
    const NodeId first = std::max(x, w);
    const NodeId second = std::min(x, w);
    tree.remove_node(first);
    tree.remove_node(second);

    if (compaction == LabelCompaction::compact) {
        for (NodeId id : tree.leaves_) {
            Node& nd = tree.nodes_[static_cast<std::size_t>(id)];
            if (nd.label > label) --nd.label;
        }
        tree.rebuild_label_index();
    } else if (label == tree.max_label_) {
        while (tree.max_label_ > 0 && !tree.has_label(tree.max_label_)) --tree.max_label_;
        tree.label_index_.resize(static_cast<std::size_t>(tree.max_label_) + 1);
    }
}

}  // namespace critsplit
