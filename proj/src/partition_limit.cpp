// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/partition_limit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "critsplit/special_functions.hpp"
#include "critsplit/tree_stats.hpp"

namespace critsplit {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("subordinator: need 0 < eps < 1");
}

}  // namespace

double PaintboxWeights::total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

PaintboxWeights block_proportions(const CladeTree& tree, double t, BlockOrder order) {
    PaintboxWeights w;
    w.order = order;
    w.weights = level_cut(tree, t).proportions();
    if (order == BlockOrder::by_size) std::sort(w.weights.begin(), w.weights.end(), std::greater<>());
    return w;
}

PaintboxWeights block_proportions(std::int64_t n_target, double t, Rng& rng, BlockOrder order) {
    if (n_target < 1) throw DomainError("block_proportions: need n_target >= 1");
    if (!(t >= 0.0)) throw DomainError("block_proportions: need t >= 0");
    return block_proportions(grow_tree(n_target, rng), t, order);
}

NodeId block_of(const CladeTree& tree, std::int64_t label, double t) {
    if (!(t >= 0.0)) throw DomainError("block_of: need t >= 0");
    NodeId v = tree.leaf_of(label);
    while (tree.node(v).birth_height > t) v = tree.node(v).parent;
    return v;
}

double first_block_moment_exact(std::int64_t n, int k, double t) {
    if (n < 1 || k < 0) throw DomainError("first_block_moment_exact: need n >= 1, k >= 0");
    if (!(t >= 0.0)) throw DomainError("first_block_moment_exact: need t >= 0");
    const double nd = static_cast<double>(n);
    // Falling moments of Y = X - 1, scaled by n^-j to stay in range.
    std::vector<double> falling(static_cast<std::size_t>(k) + 1, 0.0);
    double ff = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) ff *= (nd - static_cast<double>(j)) / nd;
        falling[static_cast<std::size_t>(j)] = ff * std::exp(-harmonic(j) * t);
    }
    // Stirling numbers of the second kind turn falling moments into raw moments E[(Y/n)^m].
    std::vector<std::vector<double>> stirling(static_cast<std::size_t>(k) + 1,
                                              std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0));
    stirling[0][0] = 1.0;
    for (int m = 1; m <= k; ++m) {
        for (int j = 1; j <= m; ++j) {
            stirling[m][j] = j * stirling[m - 1][j] + stirling[m - 1][j - 1];
        }
    }
    std::vector<double> raw(static_cast<std::size_t>(k) + 1, 0.0);
    for (int m = 0; m <= k; ++m) {
        double s = 0.0;
        for (int j = 0; j <= m; ++j) s += stirling[m][j] * falling[static_cast<std::size_t>(j)] * std::pow(nd, j - m);
        raw[static_cast<std::size_t>(m)] = s;
    }
    // (X/n)^k = sum_m C(k,m) (Y/n)^m n^{-(k-m)}.
    double out = 0.0;
    double binom = 1.0;
    for (int m = 0; m <= k; ++m) {
        if (m > 0) binom = binom * (k - m + 1) / m;
        out += binom * raw[static_cast<std::size_t>(m)] * std::pow(nd, -(k - m));
    }
    return out;
}

std::vector<std::vector<std::int64_t>> paintbox_sample(const PaintboxWeights& weights, std::int64_t n, Rng& rng) {
    if (n < 0) throw DomainError("paintbox_sample: need n >= 0");
    const double total = weights.total();
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("paintbox_sample: weights sum to " + std::to_string(total) + ", dust is not supported");
    }
    std::vector<double> cum(weights.weights.size());
    std::partial_sum(weights.weights.begin(), weights.weights.end(), cum.begin());
    std::vector<std::int64_t> block_of_colour(weights.weights.size(), -1);
    std::vector<std::vector<std::int64_t>> blocks;
    for (std::int64_t i = 1; i <= n; ++i) {
        const double u = rng.uniform_half_open() * total;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        if (it == cum.end()) --it;
        const auto colour = static_cast<std::size_t>(it - cum.begin());
        if (block_of_colour[colour] < 0) {
            block_of_colour[colour] = static_cast<std::int64_t>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(block_of_colour[colour])].push_back(i);
    }
    return blocks;
}

std::complex<double> moment_law(std::complex<double> s, double t) {
    if (!(s.real() > -1.0)) throw DomainError("moment_law: need Re s > -1");
    if (!(t >= 0.0)) throw DomainError("moment_law: need t >= 0");
    if (s == 0.0) return 1.0;
    return std::exp(-t * (digamma(s + 1.0) - digamma(1.0)));
}

double jump_rate(const std::vector<std::vector<std::int64_t>>& parts) {
    std::int64_t n = 0;
    for (const auto& p : parts) {
        if (p.empty()) throw DomainError("jump_rate: empty part");
        n += static_cast<std::int64_t>(p.size());
    }
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& p : parts) {
        for (std::int64_t x : p) {
            if (x < 1 || x > n || seen[static_cast<std::size_t>(x)]) {
                throw DomainError("jump_rate: parts are not a partition of 1.." + std::to_string(n));
            }
            seen[static_cast<std::size_t>(x)] = 1;
        }
    }
    if (parts.size() < 2) throw DomainError("jump_rate: need at least two parts");
    if (parts.size() > 2) return 0.0;
    return jump_rate_by_size(n, static_cast<std::int64_t>(parts[0].size()));
}

double jump_rate_by_size(std::int64_t n, std::int64_t i) {
    if (n < 2 || i < 1 || i > n - 1) throw DomainError("jump_rate_by_size: need 1 <= i <= n-1");
    return boost::math::beta(static_cast<double>(i), static_cast<double>(n - i));
}

std::pair<double, double> dislocation_check(std::int64_t n, std::int64_t i) {
    if (n < 2 || i < 1 || i > n - 1) throw DomainError("dislocation_check: need 1 <= i <= n-1");
    const double a = static_cast<double>(i);
    const double b = static_cast<double>(n - i);
    auto f = [&](double x) {
        const double y = 1.0 - x;
        return (std::pow(x, a) * std::pow(y, b) + std::pow(x, b) * std::pow(y, a)) / (x * y);
    };
    double error = 0.0;
    const double lhs = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.5, 1.0, 15, 1e-14, &error);
    if (!(error <= 1e-10 * std::max(1.0, std::abs(lhs)))) {
        throw NumericError("dislocation_check: quadrature did not converge (error estimate " +
                           std::to_string(error) + ")");
    }
    return {lhs, boost::math::beta(a, b)};
}

double levy_mean_quadrature() {
    auto f = [](double a) { return levy_tail(a); };
    boost::math::quadrature::tanh_sinh<double> near;
    boost::math::quadrature::exp_sinh<double> far;
    double e1 = 0.0;
    double e2 = 0.0;
    const double head = near.integrate(f, 0.0, 1.0, 1e-14, &e1);
    const double tail = far.integrate(f, 1.0, std::numeric_limits<double>::infinity(), 1e-14, &e2);
    if (e1 + e2 > 1e-10) throw NumericError("levy_mean_quadrature: no convergence");
    return head + tail;
}

double small_jump_drift(double eps) {
    check_eps(eps);
    // a/(e^a - 1) = sum_k B_k a^k/k!, integrated termwise: sum_k B_k eps^{k+1}/((k+1) k!).
    double sum = eps - eps * eps / 4.0;
    double power = eps;       // eps^{2m+1}
    double factorial = 1.0;   // (2m)!
    for (int m = 1; m < 40; ++m) {
        power *= eps * eps;
        factorial *= (2.0 * m - 1.0) * (2.0 * m);
        const double term = boost::math::bernoulli_b2n<double>(m) * power / ((2.0 * m + 1.0) * factorial);
        sum += term;
        if (std::abs(term) < 1e-18 * eps) break;
    }
    return sum;
}

SubordinatorStream::SubordinatorStream(double eps, Rng& rng)
    : eps_(eps), drift_(small_jump_drift(eps)), rate_(levy_tail(eps)), rng_(&rng) {}

std::pair<double, double> SubordinatorStream::next() {
    const double wait = rng_->exponential(rate_);
    // The tail is an involution, so the inverse of the normalised tail is levy_tail itself.
    const double size = levy_tail(rng_->uniform01() * rate_);
    return {wait, size};
}

double SubordinatorPath::value_at(double t) const {
    const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
    const auto k = static_cast<std::size_t>(it - jump_times.begin());
    double y = drift * t;
    for (std::size_t j = 0; j < k; ++j) y += jump_sizes[j];
    return y;
}

std::vector<double> SubordinatorPath::on_grid(const std::vector<double>& times) const {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(value_at(t));
    return out;
}

SubordinatorPath simulate_subordinator(double t_max, double eps, Rng& rng) {
    if (!(t_max > 0.0)) throw DomainError("simulate_subordinator: need t_max > 0");
    check_eps(eps);
    SubordinatorStream stream(eps, rng);
    SubordinatorPath p;
    p.t_max = t_max;
    p.eps = eps;
    p.drift = stream.drift();
    double t = 0.0;
    for (;;) {
        const auto [wait, size] = stream.next();
        t += wait;
        if (t > t_max) break;
        p.jump_times.push_back(t);
        p.jump_sizes.push_back(size);
    }
    return p;
}

double small_jump_exponent(int k, double eps) {
    double c = 0.0;
    for (int j = 1; j <= k; ++j) c += -std::expm1(-j * eps) / j;
    return c;
}

double truncated_moment(int k, double t, double eps) {
    check_eps(eps);
    return std::exp(-t * (harmonic(k) - small_jump_exponent(k, eps) + k * small_jump_drift(eps)));
}

double truncation_bias(int k, double t, double eps) {
    check_eps(eps);
    const double d = small_jump_exponent(k, eps) - k * small_jump_drift(eps);
    return std::abs(std::exp(-t * harmonic(k)) * std::expm1(t * d));
}

std::vector<double> truncation_bias_crn(int k, double t, const std::vector<double>& eps_values,
                                        std::int64_t reps, std::uint64_t seed) {
    if (eps_values.empty() || reps < 1) throw DomainError("truncation_bias_crn: need eps values and reps >= 1");
    for (double e : eps_values) check_eps(e);
    const double eps_min = *std::min_element(eps_values.begin(), eps_values.end());
    std::vector<double> factor;
    for (double e : eps_values) {
        const double d = small_jump_exponent(k, e) - k * small_jump_drift(e);
        // e^{-k mu t} - e^{-t c_k} = e^{-k mu t} (1 - e^{t (k mu - c_k)})
        factor.push_back(-std::exp(-k * small_jump_drift(e) * t) * std::expm1(-t * d));
    }
    std::vector<double> sum(eps_values.size(), 0.0);
    std::vector<double> big(eps_values.size(), 0.0);
    for (std::int64_t r = 0; r < reps; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        SubordinatorStream stream(eps_min, rng);
        std::fill(big.begin(), big.end(), 0.0);
        double clock = 0.0;
        for (;;) {
            const auto [wait, size] = stream.next();
            clock += wait;
            if (clock > t) break;
            for (std::size_t e = 0; e < eps_values.size(); ++e) {
                if (size >= eps_values[e]) big[e] += size;
            }
        }
        for (std::size_t e = 0; e < eps_values.size(); ++e) sum[e] += std::exp(-k * big[e]) * factor[e];
    }
    for (double& s : sum) s /= static_cast<double>(reps);
    return sum;
}

}  // namespace critsplit
