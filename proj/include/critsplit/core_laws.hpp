// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "critsplit/rng.hpp"

namespace critsplit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPiSquared = std::numbers::pi * std::numbers::pi;
/// zeta(2) = pi^2/6, the mean rate of the limit subordinator.
inline constexpr double kZeta2 = 1.6449340668482264365;
inline constexpr double kZeta3 = 1.2020569031595942854;
inline constexpr double kEulerGamma = std::numbers::egamma;

/// h_m = 1 + 1/2 + ... + 1/m, with h_0 = 0. Exact table up to 2^20, asymptotic beyond.
double harmonic(std::int64_t m);

/// h_b - h_a for 0 <= a <= b, accurate when the difference is small relative to h_b.
double harmonic_diff(std::int64_t a, std::int64_t b);

/// Size of the precomputed harmonic table.
std::int64_t harmonic_table_size() noexcept;

/// q(m,i): probability that a clade of size m splits into a left clade of size i.
double split_prob(std::int64_t m, std::int64_t i);

/// m/(2 i (m-i)): rate of the (i, m-i) split in continuous time.
double split_rate(std::int64_t m, std::int64_t i);

/// q*(m,i) = 1/(h_{m-1} (m-i)): harmonic descent transition m -> i.
double hd_transition(std::int64_t m, std::int64_t i);

/// a(i): limit probability that the descent chain ever visits i.
double limit_occupation(std::int64_t i);

/// q_up(i,j): upward transition of the reversed chain seen from a typical leaf.
double fringe_up_transition(std::int64_t i, std::int64_t j);

/// Sum_{j > J} q_up(i,j), in closed form.
double fringe_up_tail(std::int64_t i, std::int64_t J);

/// Levy tail -log(1 - e^{-a}); an involution on (0, inf).
double levy_tail(double a);

/// Levy density e^{-a}/(1 - e^{-a}).
double levy_density(double a);

/// Draws D in 1..M with P(D = d) proportional to 1/d.
std::int64_t sample_harmonic_index(std::int64_t M, Rng& rng);

/// Draws the left clade size of a split of an m-clade from q(m,.).
std::int64_t sample_split(std::int64_t m, Rng& rng);

/// Draws the next state of the descent chain from state m >= 2.
std::int64_t sample_hd_transition(std::int64_t m, Rng& rng);

/// Returned by sample_fringe_up when the draw exceeds the representable range.
inline constexpr std::int64_t kFringeUpOverflow = INT64_MAX;

/// Draws j ~ q_up(i,.). Never truncates mass: very large draws return kFringeUpOverflow.
std::int64_t sample_fringe_up(std::int64_t i, Rng& rng);

/// The full split law of an m-clade.
struct SplitLaw {
    std::int64_t m = 2;
    std::vector<double> probabilities;  ///< entry i-1 is q(m,i)
    double rate = 1.0;                  ///< h_{m-1}

    static SplitLaw of(std::int64_t m);
};

/// Closed-form limit constants.
struct LimitConstants {
    double rho = kZeta2;
    std::vector<double> s_roots;  ///< filled from find_roots() by the caller

    double a(std::int64_t i) const { return limit_occupation(i); }
};

}  // namespace critsplit
