// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/rng.hpp"
#include "critsplit/shape.hpp"

namespace critsplit {

/// Largest n accepted by shape_distribution.
inline constexpr std::int64_t kShapeDistributionCap = 20;

/// Exact law of the unordered shape of DTCS(n). Shapes live in ShapeInterner::global().
struct ShapeDistribution {
    std::int64_t n = 1;
    std::vector<std::pair<ShapeId, double>> probs;  ///< canonical order

    /// 0 for shapes of another size or unknown ids.
    double prob(ShapeId shape) const;
};

/// Cached; throws ResourceError above kShapeDistributionCap.
const ShapeDistribution& shape_distribution(std::int64_t n);

/// p(chi) = a(|chi|) P(DTCS(|chi|) has shape chi): chance that a typical leaf of a
/// large tree lies in a clade of shape chi.
double leaf_in_shape_prob(ShapeId shape);
double leaf_in_shape_prob(std::string_view canonical);

/// One step i -> j of the upward chain from a typical leaf, with the sibling clade.
struct FringeStep {
    std::int64_t from = 1;
    std::int64_t to = 2;
    CladeTree sibling;          ///< DTCS(to - from), unlabelled
    bool sibling_left = false;  ///< side of the sibling relative to the spine
};

struct FringeSample {
    std::int64_t size_cap = 1;
    std::vector<FringeStep> steps;

    std::int64_t top() const { return steps.empty() ? 1 : steps.back().to; }
    bool visits(std::int64_t size) const;
    /// Shape of the clade of the given spine size; kNoShape if not visited.
    ShapeId clade_shape(std::int64_t size, ShapeInterner& shapes) const;
};

/// Upward chain from state 1 with draws j ~ q_up(i,.), stopping before the first
/// j > size_cap. Per step the stream is consumed as: j, sibling tree, side.
FringeSample sample_fringe(std::int64_t size_cap, Rng& rng);

}  // namespace critsplit
