// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/core_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "critsplit/errors.hpp"

namespace critsplit {

namespace {

constexpr std::int64_t kHarmonicTableSize = std::int64_t{1} << 20;
constexpr std::int64_t kFringeCdfSize = 1'000'000;

// Two-sum based accumulation: hi + lo carries the exact running sum to ~2^-106.
struct CompensatedSum {
    double hi = 0.0;
    double lo = 0.0;

    void add(double x) {
        const double s = hi + x;
        const double bp = s - hi;
        const double err = (hi - (s - bp)) + (x - bp);
        hi = s;
        lo += err;
    }
    double value() const { return hi + lo; }
};

const std::vector<double>& harmonic_table() {
    static const std::vector<double> table = [] {
        std::vector<double> h(static_cast<std::size_t>(kHarmonicTableSize) + 1);
        CompensatedSum acc;
        h[0] = 0.0;
        for (std::int64_t k = 1; k <= kHarmonicTableSize; ++k) {
            acc.add(1.0 / static_cast<double>(k));
            h[static_cast<std::size_t>(k)] = acc.value();
        }
        return h;
    }();
    return table;
}

// Cumulative q_up(1, .) indexed by k = j - 1.
const std::vector<double>& fringe_first_step_cdf() {
    static const std::vector<double> cdf = [] {
        std::vector<double> c(static_cast<std::size_t>(kFringeCdfSize) + 1);
        CompensatedSum acc;
        const double scale = 6.0 / kPiSquared;
        c[0] = 0.0;
        for (std::int64_t k = 1; k <= kFringeCdfSize; ++k) {
            const double kd = static_cast<double>(k);
            acc.add(scale / (kd * kd));
            c[static_cast<std::size_t>(k)] = acc.value();
        }
        return c;
    }();
    return cdf;
}

double asymptotic_harmonic(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return std::log(x) + kEulerGamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0 -
           inv2 * inv2 * inv2 / 252.0;
}

// Sum_{k >= J} 1/k^2 for J >= 1.
double inverse_square_tail(std::int64_t J) {
    if (J < 16) {
        double s = kZeta2;
        for (std::int64_t k = 1; k < J; ++k) s -= 1.0 / static_cast<double>(k * k);
        return s;
    }
    const double x = static_cast<double>(J);
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return inv + 0.5 * inv2 + inv2 * inv / 6.0 - inv2 * inv2 * inv / 30.0 +
           inv2 * inv2 * inv2 * inv / 42.0;
}

void check_split_args(std::int64_t m, std::int64_t i, const char* what) {
    if (m < 2 || i < 1 || i > m - 1) {
        throw DomainError(std::string(what) + ": need m >= 2 and 1 <= i <= m-1 (m=" +
                          std::to_string(m) + ", i=" + std::to_string(i) + ")");
    }
}

}  // namespace

std::int64_t harmonic_table_size() noexcept { return kHarmonicTableSize; }

double harmonic(std::int64_t m) {
    if (m < 0) throw DomainError("harmonic: negative index " + std::to_string(m));
    if (m <= kHarmonicTableSize) return harmonic_table()[static_cast<std::size_t>(m)];
    return asymptotic_harmonic(static_cast<double>(m));
}

double harmonic_diff(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < a) throw DomainError("harmonic_diff: need 0 <= a <= b");
    if (a == b) return 0.0;
    if (b - a <= 64) {
        double s = 0.0;
        for (std::int64_t k = b; k > a; --k) s += 1.0 / static_cast<double>(k);
        return s;
    }
    if (b <= kHarmonicTableSize || a < 1024) return harmonic(b) - harmonic(a);
    // Both large: difference of the asymptotic expansions, leading term via log1p.
    const double da = static_cast<double>(a);
    const double db = static_cast<double>(b);
    const double lead = std::log1p((db - da) / da);
    const double c1 = 0.5 * (1.0 / db - 1.0 / da);
    const double c2 = -(1.0 / (db * db) - 1.0 / (da * da)) / 12.0;
    return lead + c1 + c2;
}

double split_prob(std::int64_t m, std::int64_t i) {
    check_split_args(m, i, "split_prob");
    // Symmetric form so q(m,i) == q(m,m-i) bit-exactly.
    const double lo = static_cast<double>(std::min(i, m - i));
    const double hi = static_cast<double>(std::max(i, m - i));
    return (1.0 / lo + 1.0 / hi) / (2.0 * harmonic(m - 1));
}

double split_rate(std::int64_t m, std::int64_t i) {
    check_split_args(m, i, "split_rate");
    const double lo = static_cast<double>(std::min(i, m - i));
    const double hi = static_cast<double>(std::max(i, m - i));
    return 0.5 / lo + 0.5 / hi;
}

double hd_transition(std::int64_t m, std::int64_t i) {
    check_split_args(m, i, "hd_transition");
    return 1.0 / (harmonic(m - 1) * static_cast<double>(m - i));
}

double limit_occupation(std::int64_t i) {
    if (i <= 0) throw DomainError("limit_occupation: need i >= 1");
    if (i == 1) return 1.0;
    return 6.0 * harmonic(i - 1) / (kPiSquared * static_cast<double>(i - 1));
}

double fringe_up_transition(std::int64_t i, std::int64_t j) {
    if (i < 1 || j <= i) {
        throw DomainError("fringe_up_transition: need 1 <= i < j (i=" + std::to_string(i) +
                          ", j=" + std::to_string(j) + ")");
    }
    const double jm1 = static_cast<double>(j - 1);
    if (i == 1) return 6.0 / (kPiSquared * jm1 * jm1);
    return static_cast<double>(i - 1) /
           (jm1 * static_cast<double>(j - i) * harmonic(i - 1));
}

double fringe_up_tail(std::int64_t i, std::int64_t J) {
    if (i < 1) throw DomainError("fringe_up_tail: need i >= 1");
    if (J <= i) return 1.0;
    if (i == 1) return 6.0 / kPiSquared * inverse_square_tail(J);
    return harmonic_diff(J - i, J - 1) / harmonic(i - 1);
}

double levy_tail(double a) {
    if (!(a > 0.0)) throw DomainError("levy_tail: need a > 0");
    if (a < std::numbers::ln2) return -std::log(-std::expm1(-a));
    return -std::log1p(-std::exp(-a));
}

double levy_density(double a) {
    if (!(a > 0.0)) throw DomainError("levy_density: need a > 0");
    return 1.0 / std::expm1(a);
}

std::int64_t sample_harmonic_index(std::int64_t M, Rng& rng) {
    if (M < 1) throw DomainError("sample_harmonic_index: need M >= 1");
    if (M == 1) {
        rng.uniform01();  // keep the draw count independent of M
        return 1;
    }
    const double target = rng.uniform01() * harmonic(M);
    if (M <= kHarmonicTableSize) {
        const auto& h = harmonic_table();
        const auto first = h.begin() + 1;
        const auto last = h.begin() + M + 1;
        const auto it = std::lower_bound(first, last, target);
        return std::min<std::int64_t>(M, static_cast<std::int64_t>(it - h.begin()));
    }
    // Smallest D with h_D >= target: invert the asymptotic form, then correct locally.
    double guess = std::exp(target - kEulerGamma);
    auto d = static_cast<std::int64_t>(std::clamp(guess, 1.0, static_cast<double>(M)));
    while (d > 1 && harmonic(d - 1) >= target) --d;
    while (d < M && harmonic(d) < target) ++d;
    return d;
}

std::int64_t sample_split(std::int64_t m, Rng& rng) {
    if (m < 2) throw DomainError("sample_split: need m >= 2");
    // q(m,i) is an even mixture of i ~ 1/i and m-i ~ 1/(m-i), each on 1..m-1.
    const std::int64_t d = sample_harmonic_index(m - 1, rng);
    return rng.coin() ? d : m - d;
}

std::int64_t sample_hd_transition(std::int64_t m, Rng& rng) {
    if (m < 2) throw DomainError("sample_hd_transition: need m >= 2");
    return m - sample_harmonic_index(m - 1, rng);
}

std::int64_t sample_fringe_up(std::int64_t i, Rng& rng) {
    if (i < 1) throw DomainError("sample_fringe_up: need i >= 1");
    const double u = rng.uniform01();
    if (i == 1) {
        const auto& cdf = fringe_first_step_cdf();
        if (u <= cdf.back()) {
            const auto it = std::lower_bound(cdf.begin() + 1, cdf.end(), u);
            return static_cast<std::int64_t>(it - cdf.begin()) + 1;
        }
        // Tail k > K: Pareto proposal P(k = m) = K/(m(m-1)), accepted with (m-1)/m.
        const double K = static_cast<double>(kFringeCdfSize);
        for (;;) {
            const double y = K / rng.uniform01();
            if (y >= 9.0e18) return kFringeUpOverflow;
            const double k = std::ceil(y);
            if (rng.uniform01() * k <= k - 1.0) return static_cast<std::int64_t>(k) + 1;
        }
    }
    // Survival S(D) = P(j - i > D) = (h_{D+i-1} - h_D)/h_{i-1}; find the smallest D with S(D) <= u.
    const double hi1 = harmonic(i - 1);
    auto survival = [&](std::int64_t D) { return harmonic_diff(D, D + i - 1) / hi1; };
    std::int64_t lo = 0;  // S(lo) > u
    std::int64_t hi = 1;
    constexpr std::int64_t kCap = std::int64_t{1} << 60;
    while (survival(hi) > u) {
        lo = hi;
        if (hi >= kCap) return kFringeUpOverflow;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (survival(mid) > u) lo = mid; else hi = mid;
    }
    return i + hi;
}

SplitLaw SplitLaw::of(std::int64_t m) {
    if (m < 2) throw DomainError("SplitLaw: need m >= 2");
    SplitLaw law;
    law.m = m;
    law.rate = harmonic(m - 1);
    law.probabilities.resize(static_cast<std::size_t>(m - 1));
    for (std::int64_t i = 1; i < m; ++i) law.probabilities[static_cast<std::size_t>(i - 1)] = split_prob(m, i);
    return law;
}

}  // namespace critsplit
