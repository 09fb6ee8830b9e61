// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "critsplit/errors.hpp"

namespace critsplit {

void RunningStats::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double d = o.mean_ - mean_;
    const double n = na + nb;
    mean_ += d * nb / n;
    m2_ += o.m2_ + d * d * na * nb / n;
    n_ += o.n_;
}

double RunningStats::variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::stderr_mean() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    if (lambda < 1.0) {
        // Small-lambda form converges faster: 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2/(8 lambda^2))
        const double c = std::sqrt(2.0 * std::numbers::pi) / lambda;
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double a = (2.0 * k - 1.0) * std::numbers::pi / lambda;
            s += std::exp(-a * a / 8.0);
        }
        return std::clamp(1.0 - c * s, 0.0, 1.0);
    }
    double s = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

TestResult ks_from_d(double d, double n_eff) {
    const double root = std::sqrt(n_eff);
    TestResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
    return r;
}

}  // namespace

TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t k = 0; k < sample.size(); ++k) {
        const double f = cdf(sample[k]);
        d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
    }
    return ks_from_d(d, n);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return ks_from_d(d, na * nb / (na + nb));
}

double chi_square_sf(double x, double dof) {
    if (dof <= 0) throw DomainError("chi_square_sf: need dof > 0");
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

TestResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                          double min_expected) {
    if (observed.size() != probs.size() || observed.empty()) {
        throw DomainError("chi_square_gof: size mismatch");
    }
    double total = 0.0;
    for (std::int64_t o : observed) total += static_cast<double>(o);
    if (total <= 0) throw DomainError("chi_square_gof: no observations");

    std::vector<double> obs;
    std::vector<double> exp;
    double acc_o = 0.0;
    double acc_e = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        acc_o += static_cast<double>(observed[k]);
        acc_e += probs[k] * total;
        if (acc_e >= min_expected) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
            acc_o = acc_e = 0.0;
        }
    }
    if (acc_e > 0.0 || acc_o > 0.0) {
        if (exp.empty()) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
        } else {
            obs.back() += acc_o;
            exp.back() += acc_e;
        }
    }
    TestResult r;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        if (exp[k] <= 0.0) {
            if (obs[k] > 0.0) {
                r.statistic = INFINITY;
                r.p_value = 0.0;
                r.dof = static_cast<std::int64_t>(obs.size()) - 1;
                return r;
            }
            continue;
        }
        const double d = obs[k] - exp[k];
        r.statistic += d * d / exp[k];
    }
    r.dof = static_cast<std::int64_t>(obs.size()) - 1;
    r.p_value = r.dof > 0 ? chi_square_sf(r.statistic, static_cast<double>(r.dof)) : 1.0;
    return r;
}

TestResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 double min_expected) {
    if (a.size() != b.size() || a.empty()) throw DomainError("chi_square_two_sample: size mismatch");
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        na += static_cast<double>(a[k]);
        nb += static_cast<double>(b[k]);
    }
    if (na <= 0 || nb <= 0) throw DomainError("chi_square_two_sample: empty sample");
    // Pool sparse cells, then the usual 2 x K contingency statistic.
    std::vector<double> ca;
    std::vector<double> cb;
    double acc_a = 0.0;
    double acc_b = 0.0;
    const double smaller = std::min(na, nb) / (na + nb);
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc_a += static_cast<double>(a[k]);
        acc_b += static_cast<double>(b[k]);
        if ((acc_a + acc_b) * smaller >= min_expected) {
            ca.push_back(acc_a);
            cb.push_back(acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a + acc_b > 0.0) {
        if (ca.empty()) {
            ca.push_back(acc_a);
            cb.push_back(acc_b);
        } else {
            ca.back() += acc_a;
            cb.back() += acc_b;
        }
    }
    TestResult r;
    const double n = na + nb;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        const double col = ca[k] + cb[k];
        const double ea = col * na / n;
        const double eb = col * nb / n;
        r.statistic += (ca[k] - ea) * (ca[k] - ea) / ea + (cb[k] - eb) * (cb[k] - eb) / eb;
    }
    r.dof = static_cast<std::int64_t>(ca.size()) - 1;
    r.p_value = r.dof > 0 ? chi_square_sf(r.statistic, static_cast<double>(r.dof)) : 1.0;
    return r;
}

}  // namespace critsplit
