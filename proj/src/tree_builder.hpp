// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "critsplit/clade_tree.hpp"

namespace critsplit {

// Low-level access used by the samplers and by format converters.
class TreeBuilder {
public:
    TreeBuilder(LabelMode mode, TimeModel time) {
        tree_.mode_ = mode;
        tree_.time_ = time;
    }

    void reserve(std::size_t nodes) { tree_.nodes_.reserve(nodes); }

    NodeId add(const Node& n) { return tree_.add_node(n); }
    Node& at(NodeId id) { return tree_.nodes_[static_cast<std::size_t>(id)]; }

    void set_root(NodeId id) { tree_.root_ = id; }

    /// Registers leaves in node order and builds the label index.
    CladeTree finish() {
        tree_.leaves_.clear();
        for (std::size_t k = 0; k < tree_.nodes_.size(); ++k) {
            Node& n = tree_.nodes_[k];
            if (n.is_leaf()) {
                n.leaf_slot = static_cast<std::int32_t>(tree_.leaves_.size());
                tree_.leaves_.push_back(static_cast<NodeId>(k));
            }
        }
        tree_.rebuild_label_index();
        return std::move(tree_);
    }

private:
    CladeTree tree_;
};

}  // namespace critsplit
