// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/tree_stats.hpp"

#include <algorithm>
#include <string>

#include "critsplit/errors.hpp"

namespace critsplit {

namespace {

void check_height(double t) {
    if (!(t >= 0.0)) throw DomainError("level_cut: need t >= 0");
}

// Alive clades at t, as node ids in preorder.
std::vector<NodeId> alive_clades(const CladeTree& tree, double t) {
    std::vector<NodeId> alive;
    std::vector<NodeId> stack{tree.root()};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        const Node& n = tree.node(v);
        if (n.is_leaf() || tree.split_height(v) > t) {
            alive.push_back(v);
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    return alive;
}

}  // namespace

LeafHeight leaf_height(const CladeTree& tree, std::int64_t label) {
    const Node& n = tree.node(tree.leaf_of(label));
    return {n.birth_height, n.hop_depth};
}

double max_height(const CladeTree& tree) {
    double h = 0.0;
    for (NodeId id : tree.leaves()) h = std::max(h, tree.node(id).birth_height);
    return h;
}

std::vector<ShapeId> clade_shapes(const CladeTree& tree, ShapeInterner& shapes, std::int64_t size_cap) {
    std::vector<ShapeId> out(tree.node_count(), kNoShape);
    // Postorder: a node is finished once both children are.
    std::vector<std::pair<NodeId, bool>> stack{{tree.root(), false}};
    while (!stack.empty()) {
        auto [v, expanded] = stack.back();
        stack.pop_back();
        const Node& n = tree.node(v);
        if (n.is_leaf()) {
            out[static_cast<std::size_t>(v)] = kLeafShape;
            continue;
        }
        if (!expanded) {
            stack.emplace_back(v, true);
            stack.emplace_back(n.right, false);
            stack.emplace_back(n.left, false);
            continue;
        }
        if (n.n_leaves > size_cap) continue;
        out[static_cast<std::size_t>(v)] =
            shapes.join(out[static_cast<std::size_t>(n.left)], out[static_cast<std::size_t>(n.right)]);
    }
    return out;
}

ShapeId clade_shape(const CladeTree& tree, NodeId top, ShapeInterner& shapes) {
    std::vector<ShapeId> done;
    std::vector<std::pair<NodeId, bool>> stack{{top, false}};
    while (!stack.empty()) {
        auto [v, expanded] = stack.back();
        stack.pop_back();
        const Node& n = tree.node(v);
        if (n.is_leaf()) {
            done.push_back(kLeafShape);
        } else if (!expanded) {
            stack.emplace_back(v, true);
            stack.emplace_back(n.right, false);
            stack.emplace_back(n.left, false);
        } else {
            const ShapeId r = done.back();
            done.pop_back();
            done.back() = shapes.join(done.back(), r);
        }
    }
    return done.back();
}

std::int64_t SubtreeCensus::count_of_size(std::int64_t j) const {
    if (j < 1 || j >= static_cast<std::int64_t>(counts.size())) return 0;
    return counts[static_cast<std::size_t>(j)];
}

std::int64_t SubtreeCensus::count_of_shape(std::string_view canonical) const {
    const ShapeId id = shapes->parse(canonical);
    auto it = shape_counts.find(id);
    return it == shape_counts.end() ? 0 : it->second;
}

SubtreeCensus subtree_census(const CladeTree& tree, std::shared_ptr<ShapeInterner> shapes,
                             std::int64_t size_cap) {
    SubtreeCensus c;
    c.n = tree.leaf_count();
    c.shapes = shapes ? std::move(shapes) : std::make_shared<ShapeInterner>();
    c.counts.assign(static_cast<std::size_t>(c.n) + 1, 0);
    const std::vector<ShapeId> ids = clade_shapes(tree, *c.shapes, size_cap);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const Node& n = tree.nodes()[k];
        ++c.counts[static_cast<std::size_t>(n.n_leaves)];
        if (ids[k] != kNoShape) ++c.shape_counts[ids[k]];
    }
    return c;
}

ExploratoryStats exploratory_stats(const SubtreeCensus& census) {
    ExploratoryStats s;
    s.distinct_shapes = census.distinct_shapes();
    std::vector<std::int64_t> present(static_cast<std::size_t>(census.n) + 2, 0);
    for (const auto& [id, count] : census.shape_counts) {
        const std::int64_t size = census.shapes->size(id);
        if (count >= 2) s.largest_repeated = std::max(s.largest_repeated, size);
        ++present[static_cast<std::size_t>(size)];
    }
    s.smallest_absent = census.n + 1;
    for (std::int64_t m = 1; m <= census.n && m <= 60; ++m) {
        if (present[static_cast<std::size_t>(m)] < shape_count(m)) {
            s.smallest_absent = m;
            break;
        }
    }
    return s;
}

std::vector<double> LevelPartition::proportions() const {
    std::vector<double> p;
    p.reserve(blocks.size());
    for (const auto& b : blocks) p.push_back(static_cast<double>(b.size()) / static_cast<double>(n));
    return p;
}

std::vector<std::int64_t> LevelPartition::sizes() const {
    std::vector<std::int64_t> s;
    s.reserve(blocks.size());
    for (const auto& b : blocks) s.push_back(static_cast<std::int64_t>(b.size()));
    return s;
}

LevelPartition level_cut(const CladeTree& tree, double t) {
    check_height(t);
    LevelPartition p;
    p.t = t;
    p.n = tree.leaf_count();
    for (NodeId v : alive_clades(tree, t)) {
        std::vector<std::int64_t> block = tree.clade_labels(v);
        std::sort(block.begin(), block.end());
        p.blocks.push_back(std::move(block));
    }
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return p;
}

std::vector<std::int64_t> level_cut_sizes(const CladeTree& tree, double t) {
    check_height(t);
    std::vector<std::int64_t> sizes;
    for (NodeId v : alive_clades(tree, t)) sizes.push_back(tree.node(v).n_leaves);
    return sizes;
}

std::int64_t sum_of_squares(const CladeTree& tree, double t) {
    std::int64_t q = 0;
    for (std::int64_t s : level_cut_sizes(tree, t)) q += s * s;
    return q;
}

NodeId lowest_common_ancestor(const CladeTree& tree, NodeId a, NodeId b) {
    while (tree.node(a).hop_depth > tree.node(b).hop_depth) a = tree.node(a).parent;
    while (tree.node(b).hop_depth > tree.node(a).hop_depth) b = tree.node(b).parent;
    while (a != b) {
        a = tree.node(a).parent;
        b = tree.node(b).parent;
    }
    return a;
}

double branchpoint_height(const CladeTree& tree, std::int64_t label1, std::int64_t label2) {
    if (label1 == label2) throw DomainError("branchpoint_height: labels must differ");
    const NodeId u = lowest_common_ancestor(tree, tree.leaf_of(label1), tree.leaf_of(label2));
    return tree.split_height(u);
}

}  // namespace critsplit
