// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/fringe.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "critsplit/tree_stats.hpp"

namespace critsplit {

namespace {

std::mutex g_cache_mutex;
std::map<std::int64_t, std::unique_ptr<ShapeDistribution>> g_cache;

const ShapeDistribution& cached(std::int64_t n);

// P(chi) = c q(n, a) P(chi_small) P(chi_large), summed over child splits.
std::unique_ptr<ShapeDistribution> build(std::int64_t n) {
    auto out = std::make_unique<ShapeDistribution>();
    out->n = n;
    ShapeInterner& shapes = ShapeInterner::global();
    if (n == 1) {
        out->probs.emplace_back(kLeafShape, 1.0);
        return out;
    }
    std::unordered_map<ShapeId, double> acc;
    for (std::int64_t a = 1; 2 * a <= n; ++a) {
        const ShapeDistribution& small = cached(a);
        const ShapeDistribution& large = cached(n - a);
        if (2 * a < n) {
            const double w = split_prob(n, a) + split_prob(n, n - a);
            for (const auto& [s, ps] : small.probs) {
                for (const auto& [l, pl] : large.probs) acc[shapes.join(s, l)] += w * ps * pl;
            }
        } else {
            const double w = split_prob(n, a);
            const auto& half = small.probs;
            for (std::size_t x = 0; x < half.size(); ++x) {
                for (std::size_t y = x; y < half.size(); ++y) {
                    const double c = x == y ? 1.0 : 2.0;
                    acc[shapes.join(half[x].first, half[y].first)] += c * w * half[x].second * half[y].second;
                }
            }
        }
    }
    out->probs.assign(acc.begin(), acc.end());
    std::sort(out->probs.begin(), out->probs.end(),
              [&](const auto& x, const auto& y) { return shapes.less(x.first, y.first); });
    return out;
}

// Caller holds g_cache_mutex.
const ShapeDistribution& cached(std::int64_t n) {
    auto it = g_cache.find(n);
    if (it != g_cache.end()) return *it->second;
    auto dist = build(n);
    const ShapeDistribution& ref = *dist;
    g_cache.emplace(n, std::move(dist));
    return ref;
}

}  // namespace

double ShapeDistribution::prob(ShapeId shape) const {
    for (const auto& [id, p] : probs) {
        if (id == shape) return p;
    }
    return 0.0;
}

const ShapeDistribution& shape_distribution(std::int64_t n) {
    if (n < 1) throw DomainError("shape_distribution: need n >= 1");
    if (n > kShapeDistributionCap) {
        throw ResourceError("shape_distribution: n = " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(kShapeDistributionCap));
    }
    std::lock_guard lock(g_cache_mutex);
    return cached(n);
}

double leaf_in_shape_prob(ShapeId shape) {
    const std::int64_t n = ShapeInterner::global().size(shape);
    if (n < 2) throw DomainError("leaf_in_shape_prob: need a shape with at least 2 leaves");
    return limit_occupation(n) * shape_distribution(n).prob(shape);
}

double leaf_in_shape_prob(std::string_view canonical) {
    return leaf_in_shape_prob(ShapeInterner::global().parse(canonical));
}

bool FringeSample::visits(std::int64_t size) const {
    if (size == 1) return true;
    return std::any_of(steps.begin(), steps.end(), [&](const FringeStep& s) { return s.to == size; });
}

ShapeId FringeSample::clade_shape(std::int64_t size, ShapeInterner& shapes) const {
    ShapeId current = kLeafShape;
    if (size == 1) return current;
    for (const FringeStep& s : steps) {
        const ShapeId sib = clade_shapes(s.sibling, shapes)[static_cast<std::size_t>(s.sibling.root())];
        current = shapes.join(current, sib);
        if (s.to == size) return current;
        if (s.to > size) break;
    }
    return kNoShape;
}

FringeSample sample_fringe(std::int64_t size_cap, Rng& rng) {
    if (size_cap < 1) throw DomainError("sample_fringe: need size_cap >= 1");
    FringeSample out;
    out.size_cap = size_cap;
    std::int64_t i = 1;
    for (;;) {
        const std::int64_t j = sample_fringe_up(i, rng);
        if (j == kFringeUpOverflow || j > size_cap) break;
        FringeStep step;
        step.from = i;
        step.to = j;
        step.sibling = sample_dtcs(j - i, LabelMode::unlabelled, rng);
        step.sibling_left = rng.coin();
        out.steps.push_back(std::move(step));
        i = j;
    }
    return out;
}

}  // namespace critsplit
