// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace critsplit {

/// Interned id of an unordered, label-free binary tree shape.
using ShapeId = std::int32_t;
inline constexpr ShapeId kLeafShape = 0;
inline constexpr ShapeId kNoShape = -1;

/// Hash-consing table for shapes. A shape is either the leaf or an unordered pair of
/// shapes stored as (small, large) in canonical order, so mirror images share an id.
///
/// Canonical order: by size, then by the small child, then by the large child.
/// The canonical string puts the smaller child first, e.g. "(.,(.,.))".
///
/// All members are safe to call concurrently.
class ShapeInterner {
public:
    ShapeInterner();
    ShapeInterner(const ShapeInterner&) = delete;
    ShapeInterner& operator=(const ShapeInterner&) = delete;

    /// Process-wide table used by the exact shape distributions and reports.
    static ShapeInterner& global();
    static std::shared_ptr<ShapeInterner> global_ptr();

    /// Shape with subtrees a and b (order irrelevant).
    ShapeId join(ShapeId a, ShapeId b);

    std::int64_t size(ShapeId id) const;
    ShapeId small_child(ShapeId id) const;
    ShapeId large_child(ShapeId id) const;
    std::size_t count() const;

    /// Three-way canonical comparison: <0, 0, >0.
    int compare(ShapeId a, ShapeId b) const;
    bool less(ShapeId a, ShapeId b) const { return compare(a, b) < 0; }

    std::string to_string(ShapeId id) const;

    /// Inverse of to_string; accepts either child order. Throws DomainError.
    ShapeId parse(std::string_view text);

    /// Left-leaning caterpillar with n leaves.
    ShapeId comb(std::int64_t n);

private:
    struct Entry {
        std::int64_t size;
        ShapeId small;
        ShapeId large;
    };
    Entry entry(ShapeId id) const;

    mutable std::shared_mutex mutex_;
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, ShapeId> index_;
};

/// Number of distinct shapes with n leaves (Wedderburn-Etherington numbers).
std::int64_t shape_count(std::int64_t n);

}  // namespace critsplit
