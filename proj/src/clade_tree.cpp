// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/clade_tree.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "json.hpp"

#include "critsplit/errors.hpp"
#include "tree_builder.hpp"

namespace critsplit {

CladeTree CladeTree::single_leaf(LabelMode mode, TimeModel time) {
    TreeBuilder b(mode, time);
    Node leaf;
    leaf.label = mode == LabelMode::unlabelled ? 0 : 1;
    b.set_root(b.add(leaf));
    return b.finish();
}

double CladeTree::split_height(NodeId id) const {
    const Node& n = node(id);
    if (n.is_leaf()) return std::numeric_limits<double>::infinity();
    return node(n.left).birth_height;
}

NodeId CladeTree::leaf_of(std::int64_t label) const {
    if (!has_label(label)) throw NotFoundError("no leaf with label " + std::to_string(label));
    return label_index_[static_cast<std::size_t>(label)];
}

bool CladeTree::has_label(std::int64_t label) const noexcept {
    return label >= 1 && label < static_cast<std::int64_t>(label_index_.size()) &&
           label_index_[static_cast<std::size_t>(label)] != kNoNode;
}

std::vector<std::int64_t> CladeTree::labels() const {
    std::vector<std::int64_t> out;
    out.reserve(leaves_.size());
    for (NodeId id : leaves_) out.push_back(node(id).label);
    return out;
}

std::vector<std::int64_t> CladeTree::clade_labels(NodeId id) const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(node(id).n_leaves));
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        const Node& n = node(v);
        if (n.is_leaf()) {
            out.push_back(n.label);
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    return out;
}

double CladeTree::total_edge_length() const {
    double total = 0.0;
    for (const Node& n : nodes_) {
        if (n.parent != kNoNode) total += n.birth_height - node(n.parent).birth_height;
    }
    return total;
}

std::vector<NodeId> CladeTree::path_from_root(NodeId id) const {
    std::vector<NodeId> path;
    for (NodeId v = id; v != kNoNode; v = node(v).parent) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

void CladeTree::reserve_leaves(std::int64_t n) {
    if (n < 1) return;
    nodes_.reserve(static_cast<std::size_t>(2 * n - 1));
    leaves_.reserve(static_cast<std::size_t>(n));
    label_index_.reserve(static_cast<std::size_t>(n) + 1);
}

void CladeTree::check_invariants() const {
    auto fail = [](const std::string& what) { throw ContractError("CladeTree invariant: " + what); };
    if (root_ == kNoNode) fail("no root");
    if (node(root_).parent != kNoNode) fail("root has a parent");
    if (node(root_).birth_height != 0.0) fail("root birth height is not 0");
    if (node(root_).hop_depth != 0) fail("root hop depth is not 0");
    std::int64_t leaf_total = 0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const Node& n = nodes_[k];
        const auto id = static_cast<NodeId>(k);
        if (n.is_leaf()) {
            ++leaf_total;
            if (n.right != kNoNode) fail("half-leaf node " + std::to_string(k));
            if (n.n_leaves != 1) fail("leaf n_leaves != 1");
            if (n.leaf_slot < 0 || static_cast<std::size_t>(n.leaf_slot) >= leaves_.size() ||
                leaves_[static_cast<std::size_t>(n.leaf_slot)] != id) {
                fail("leaf slot out of sync");
            }
            continue;
        }
        const Node& l = node(n.left);
        const Node& r = node(n.right);
        if (l.parent != id || r.parent != id) fail("child/parent link broken at " + std::to_string(k));
        if (n.n_leaves != l.n_leaves + r.n_leaves) fail("n_leaves cache at " + std::to_string(k));
        if (l.hop_depth != n.hop_depth + 1 || r.hop_depth != n.hop_depth + 1) fail("hop depth");
        if (!(l.birth_height > n.birth_height)) fail("birth heights not increasing at " + std::to_string(k));
        if (l.birth_height != r.birth_height) fail("siblings born at different heights");
    }
    if (leaf_total != leaf_count()) fail("leaf list size");
    if (node(root_).n_leaves != leaf_count()) fail("root n_leaves");
    if (mode_ != LabelMode::unlabelled) {
        std::vector<std::int64_t> ls = labels();
        std::sort(ls.begin(), ls.end());
        if (std::adjacent_find(ls.begin(), ls.end()) != ls.end()) fail("duplicate labels");
        if (!ls.empty() && ls.front() < 1) fail("non-positive label");
        for (std::int64_t l : ls) {
            if (!has_label(l) || node(leaf_of(l)).label != l) fail("label index out of sync");
        }
    }
}

bool CladeTree::operator==(const CladeTree& other) const {
    if (mode_ != other.mode_ || time_ != other.time_ || leaf_count() != other.leaf_count()) return false;
    std::vector<std::pair<NodeId, NodeId>> stack{{root_, other.root_}};
    while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const Node& x = node(a);
        const Node& y = other.node(b);
        if (x.is_leaf() != y.is_leaf() || x.birth_height != y.birth_height ||
            x.hop_depth != y.hop_depth || x.n_leaves != y.n_leaves || x.label != y.label) {
            return false;
        }
        if (!x.is_leaf()) {
            stack.emplace_back(x.right, y.right);
            stack.emplace_back(x.left, y.left);
        }
    }
    return true;
}

std::string CladeTree::to_json() const {
    // Preorder renumbering so the dump does not depend on internal storage order.
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    std::vector<std::int64_t> new_id(nodes_.size(), -1);
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        new_id[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(order.size());
        order.push_back(v);
        const Node& n = node(v);
        if (!n.is_leaf()) {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId v : order) {
        const Node& n = node(v);
        nlohmann::json entry;
        entry["id"] = new_id[static_cast<std::size_t>(v)];
        entry["parent"] = n.parent == kNoNode ? nlohmann::json(nullptr)
                                              : nlohmann::json(new_id[static_cast<std::size_t>(n.parent)]);
        entry["birth_height"] = n.birth_height;
        entry["label"] = n.is_leaf() && mode_ != LabelMode::unlabelled ? nlohmann::json(n.label)
                                                                        : nlohmann::json(nullptr);
        nodes.push_back(std::move(entry));
    }
    nlohmann::json doc;
    doc["schema"] = "v1";
    doc["n_leaves"] = leaf_count();
    doc["nodes"] = std::move(nodes);
    return doc.dump();
}

NodeId CladeTree::add_node(const Node& n) {
    nodes_.push_back(n);
    return static_cast<NodeId>(nodes_.size() - 1);
}

void CladeTree::shift_depths(NodeId top, std::int32_t delta) {
    thread_local std::vector<NodeId> stack;
    stack.clear();
    stack.push_back(top);
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        Node& n = nodes_[static_cast<std::size_t>(v)];
        n.hop_depth += delta;
        if (time_ == TimeModel::discrete) n.birth_height = n.hop_depth;
        if (!n.is_leaf()) {
            stack.push_back(n.left);
            stack.push_back(n.right);
        }
    }
}

// Swap-with-last removal; `id` must already be unlinked from the tree.
void CladeTree::remove_node(NodeId id) {
    const auto last = static_cast<NodeId>(nodes_.size() - 1);
    if (id != last) {
        Node moved = nodes_[static_cast<std::size_t>(last)];
        nodes_[static_cast<std::size_t>(id)] = moved;
        if (moved.parent != kNoNode) {
            Node& p = nodes_[static_cast<std::size_t>(moved.parent)];
            if (p.left == last) p.left = id;
            if (p.right == last) p.right = id;
        }
        if (root_ == last) root_ = id;
        if (moved.is_leaf()) {
            leaves_[static_cast<std::size_t>(moved.leaf_slot)] = id;
            if (moved.label >= 1 && static_cast<std::size_t>(moved.label) < label_index_.size()) {
                label_index_[static_cast<std::size_t>(moved.label)] = id;
            }
        } else {
            nodes_[static_cast<std::size_t>(moved.left)].parent = id;
            nodes_[static_cast<std::size_t>(moved.right)].parent = id;
        }
    }
    nodes_.pop_back();
}

void CladeTree::rebuild_label_index() {
    max_label_ = 0;
    for (NodeId id : leaves_) max_label_ = std::max(max_label_, node(id).label);
    label_index_.assign(static_cast<std::size_t>(max_label_) + 1, kNoNode);
    if (mode_ == LabelMode::unlabelled) return;
    for (NodeId id : leaves_) {
        const std::int64_t l = node(id).label;
        if (l >= 1) label_index_[static_cast<std::size_t>(l)] = id;
    }
}

}  // namespace critsplit
