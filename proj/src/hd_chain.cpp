// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/hd_chain.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"

namespace critsplit {

namespace {

constexpr std::int64_t kCompensateAbove = 1000;

// Neumaier summation.
class Accumulator {
public:
    explicit Accumulator(bool compensated) : compensated_(compensated) {}
    void add(double x) {
        if (!compensated_) {
            sum_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            c_ += (sum_ - t) + x;
        } else {
            c_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    bool compensated_;
    double sum_ = 0.0;
    double c_ = 0.0;
};

void check_start(std::int64_t n, const char* what) {
    if (n < 1) throw DomainError(std::string(what) + ": need n >= 1");
}

}  // namespace

double HDPath::absorption_time() const { return std::accumulate(holds.begin(), holds.end(), 0.0); }

HDPath simulate_hd(std::int64_t n, Rng& rng) {
    check_start(n, "simulate_hd");
    HDPath path;
    path.states.push_back(n);
    for (std::int64_t m = n; m > 1;) {
        path.holds.push_back(rng.exponential(harmonic(m - 1)));
        m = sample_hd_transition(m, rng);
        path.states.push_back(m);
    }
    return path;
}

HDSummary simulate_hd_summary(std::int64_t n, Rng& rng) {
    check_start(n, "simulate_hd_summary");
    HDSummary s;
    for (std::int64_t m = n; m > 1;) {
        s.height += rng.exponential(harmonic(m - 1));
        m = sample_hd_transition(m, rng);
        ++s.hops;
    }
    return s;
}

double OccupationTable::at(std::int64_t i) const {
    if (i < 1 || i > n) throw DomainError("OccupationTable: state out of range");
    return a[static_cast<std::size_t>(i)];
}

OccupationTable occupation_dp(std::int64_t n) {
    check_start(n, "occupation_dp");
    OccupationTable t;
    t.n = n;
    t.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
    // b[m] = a(n,m)/h_{m-1}, so a(n,i) = sum_{m>i} b[m]/(m-i).
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    t.a[static_cast<std::size_t>(n)] = 1.0;
    if (n >= 2) b[static_cast<std::size_t>(n)] = 1.0 / harmonic(n - 1);
    const bool compensated = n > kCompensateAbove;
    for (std::int64_t i = n - 1; i >= 1; --i) {
        Accumulator acc(compensated);
        for (std::int64_t m = i + 1; m <= n; ++m) acc.add(b[static_cast<std::size_t>(m)] / static_cast<double>(m - i));
        const double ai = acc.value();
        t.a[static_cast<std::size_t>(i)] = ai;
        if (i >= 2) b[static_cast<std::size_t>(i)] = ai / harmonic(i - 1);
    }
    return t;
}

std::vector<double> absorption_probabilities(std::int64_t n_max) {
    check_start(n_max, "absorption_probabilities");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    p[1] = 1.0;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        Accumulator acc(n > kCompensateAbove);
        for (std::int64_t i = 1; i < n; ++i) acc.add(p[static_cast<std::size_t>(i)] / static_cast<double>(n - i));
        p[static_cast<std::size_t>(n)] = acc.value() / harmonic(n - 1);
    }
    return p;
}

std::vector<double> mean_height_recursion(std::int64_t n_max) {
    check_start(n_max, "mean_height_recursion");
    std::vector<double> t(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::int64_t n = 2; n <= n_max; ++n) {
        Accumulator acc(n > kCompensateAbove);
        acc.add(1.0);
        for (std::int64_t i = 2; i < n; ++i) acc.add(t[static_cast<std::size_t>(i)] / static_cast<double>(n - i));
        t[static_cast<std::size_t>(n)] = acc.value() / harmonic(n - 1);
    }
    return t;
}

std::vector<double> height_variance_recursion(std::int64_t n_max) {
    check_start(n_max, "height_variance_recursion");
    const std::vector<double> t = mean_height_recursion(n_max);
    // s_n = E[D_n^2] = 2/h^2 + (2/h) sum q* t_i + sum q* s_i, with q* = 1/(h (n-i)).
    std::vector<double> s(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> var(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::int64_t n = 2; n <= n_max; ++n) {
        const double h = harmonic(n - 1);
        Accumulator tt(n > kCompensateAbove);
        Accumulator ss(n > kCompensateAbove);
        for (std::int64_t i = 2; i < n; ++i) {
            const double w = 1.0 / static_cast<double>(n - i);
            tt.add(w * t[static_cast<std::size_t>(i)]);
            ss.add(w * s[static_cast<std::size_t>(i)]);
        }
        const auto k = static_cast<std::size_t>(n);
        s[k] = 2.0 / (h * h) + 2.0 * tt.value() / (h * h) + ss.value() / h;
        var[k] = s[k] - t[k] * t[k];
    }
    return var;
}

double occupation_limit_gap(std::int64_t n, std::int64_t i) {
    if (i < 2 || i > n) throw DomainError("occupation_limit_gap: need 2 <= i <= n");
    return std::abs(occupation_dp(n).at(i) - limit_occupation(i));
}

}  // namespace critsplit
