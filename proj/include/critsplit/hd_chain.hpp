// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "critsplit/rng.hpp"

namespace critsplit {

/// Trajectory of the harmonic descent chain: states n = x_0 > x_1 > ... > 1 and the
/// holding time spent in each state except the absorbing state 1.
struct HDPath {
    std::vector<std::int64_t> states;
    std::vector<double> holds;

    double absorption_time() const;
    std::int64_t jumps() const { return static_cast<std::int64_t>(holds.size()); }
};

/// Jumps m -> i with probability q*(m,i) after an Exp(h_{m-1}) hold.
/// Per state the stream is consumed as: hold, then next state.
HDPath simulate_hd(std::int64_t n, Rng& rng);

/// Absorption time and jump count only, without storing the path (same draws as simulate_hd).
struct HDSummary {
    double height = 0.0;
    std::int64_t hops = 0;
};
HDSummary simulate_hd_summary(std::int64_t n, Rng& rng);

/// a(n,i): probability that the chain started at n ever visits i. Entry 0 is unused.
struct OccupationTable {
    std::int64_t n = 1;
    std::vector<double> a;

    double at(std::int64_t i) const;
};

/// Backward DP a(n,i) = sum_{m>i} a(n,m) q*(m,i), a(n,n) = 1. O(n^2) time, O(n) memory.
OccupationTable occupation_dp(std::int64_t n);

/// a(n,1) for every n <= n_max by first-step analysis (an independent O(n_max^2) route).
std::vector<double> absorption_probabilities(std::int64_t n_max);

/// t_n = E[D_n] for n = 0..n_max (entry 0 unused, t_1 = 0).
std::vector<double> mean_height_recursion(std::int64_t n_max);

/// Var(D_n) for n = 0..n_max from the companion second-moment recursion.
std::vector<double> height_variance_recursion(std::int64_t n_max);

/// |a(n,i) - a(i)|.
double occupation_limit_gap(std::int64_t n, std::int64_t i);

}  // namespace critsplit
