// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/shape.hpp"

#include <mutex>
#include <utility>

#include "critsplit/errors.hpp"

namespace critsplit {

ShapeInterner::ShapeInterner() { entries_.push_back({1, kNoShape, kNoShape}); }

std::shared_ptr<ShapeInterner> ShapeInterner::global_ptr() {
    static const std::shared_ptr<ShapeInterner> table = std::make_shared<ShapeInterner>();
    return table;
}

ShapeInterner& ShapeInterner::global() { return *global_ptr(); }

ShapeInterner::Entry ShapeInterner::entry(ShapeId id) const {
    std::shared_lock lock(mutex_);
    if (id < 0 || static_cast<std::size_t>(id) >= entries_.size()) {
        throw DomainError("unknown shape id " + std::to_string(id));
    }
    return entries_[static_cast<std::size_t>(id)];
}

std::int64_t ShapeInterner::size(ShapeId id) const { return entry(id).size; }
ShapeId ShapeInterner::small_child(ShapeId id) const { return entry(id).small; }
ShapeId ShapeInterner::large_child(ShapeId id) const { return entry(id).large; }

std::size_t ShapeInterner::count() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

int ShapeInterner::compare(ShapeId a, ShapeId b) const {
    std::shared_lock lock(mutex_);
    // Lexicographic over (size, small, large), depth-first without recursion.
    std::vector<std::pair<ShapeId, ShapeId>> stack{{a, b}};
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        if (x == y) continue;
        const Entry& ex = entries_.at(static_cast<std::size_t>(x));
        const Entry& ey = entries_.at(static_cast<std::size_t>(y));
        if (ex.size != ey.size) return ex.size < ey.size ? -1 : 1;
        stack.emplace_back(ex.large, ey.large);
        stack.emplace_back(ex.small, ey.small);
    }
    return 0;
}

ShapeId ShapeInterner::join(ShapeId a, ShapeId b) {
    if (compare(b, a) < 0) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
                              static_cast<std::uint32_t>(b);
    {
        std::shared_lock lock(mutex_);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (entries_.size() >= static_cast<std::size_t>(INT32_MAX)) throw ResourceError("shape table full");
    const auto id = static_cast<ShapeId>(entries_.size());
    entries_.push_back({entries_[static_cast<std::size_t>(a)].size + entries_[static_cast<std::size_t>(b)].size,
                        a, b});
    index_.emplace(key, id);
    return id;
}

std::string ShapeInterner::to_string(ShapeId id) const {
    std::string out;
    // Work items: a shape to print, or a literal character.
    struct Item {
        ShapeId shape;
        char literal;
    };
    std::vector<Item> stack{{id, 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        if (it.shape == kNoShape) {
            out.push_back(it.literal);
            continue;
        }
        const Entry e = entry(it.shape);
        if (e.size == 1) {
            out.push_back('.');
            continue;
        }
        stack.push_back({kNoShape, ')'});
        stack.push_back({e.large, 0});
        stack.push_back({kNoShape, ','});
        stack.push_back({e.small, 0});
        stack.push_back({kNoShape, '('});
    }
    return out;
}

ShapeId ShapeInterner::parse(std::string_view text) {
    std::vector<ShapeId> values;
    std::vector<std::size_t> opens;
    auto bad = [&](std::size_t pos) {
        throw DomainError("malformed shape string '" + std::string(text) + "' at offset " +
                          std::to_string(pos));
    };
    for (std::size_t k = 0; k < text.size(); ++k) {
        switch (text[k]) {
            case '.': values.push_back(kLeafShape); break;
            case '(': opens.push_back(values.size()); break;
            case ',': break;
            case ')': {
                if (opens.empty() || values.size() != opens.back() + 2) bad(k);
                const ShapeId r = values.back();
                values.pop_back();
                const ShapeId l = values.back();
                values.pop_back();
                opens.pop_back();
                values.push_back(join(l, r));
                break;
            }
            default: bad(k);
        }
    }
    if (!opens.empty() || values.size() != 1) bad(text.size());
    return values.front();
}

ShapeId ShapeInterner::comb(std::int64_t n) {
    if (n < 1) throw DomainError("comb: need n >= 1");
    ShapeId s = kLeafShape;
    for (std::int64_t k = 2; k <= n; ++k) s = join(kLeafShape, s);
    return s;
}

std::int64_t shape_count(std::int64_t n) {
    if (n < 1) throw DomainError("shape_count: need n >= 1");
    if (n > 60) throw ResourceError("shape_count: n too large for 64-bit counts");
    std::vector<std::int64_t> w(static_cast<std::size_t>(n) + 1, 0);
    w[1] = 1;
    for (std::int64_t m = 2; m <= n; ++m) {
        std::int64_t total = 0;
        for (std::int64_t a = 1; 2 * a < m; ++a) {
            total += w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(m - a)];
        }
        if (m % 2 == 0) {
            const std::int64_t h = w[static_cast<std::size_t>(m / 2)];
            total += h * (h + 1) / 2;
        }
        w[static_cast<std::size_t>(m)] = total;
    }
    return w[static_cast<std::size_t>(n)];
}

}  // namespace critsplit
