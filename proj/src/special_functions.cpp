// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "critsplit/errors.hpp"
#include "critsplit/parallel.hpp"
#include "critsplit/partition_limit.hpp"

namespace critsplit {

namespace {

constexpr double kPiD = std::numbers::pi;
constexpr double kReflectBelow = -20.0;

// B_{2k}/(2k) and B_{2k} for k = 1..7.
constexpr double kDigammaCoef[DigammaEngine::kSeriesOrder] = {
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
constexpr double kTrigammaCoef[DigammaEngine::kSeriesOrder] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};

template <class T>
void check_pole(const T& s, const char* what) {
    const std::complex<double> z(s);
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw DomainError(std::string(what) + ": pole at " + std::to_string(z.real()));
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError(std::string(what) + ": non-finite argument");
    }
}

template <class T>
T digamma_impl(T z) {
    if (std::real(z) < kReflectBelow) {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma_impl(T(1.0) - z) - kPiD / std::tan(kPiD * z);
    }
    T shift = 0.0;
    while (std::real(z) < DigammaEngine::kShiftThreshold) {
        shift -= T(1.0) / z;
        z += 1.0;
    }
    const T inv = T(1.0) / z;
    const T inv2 = inv * inv;
    T series = 0.0;
    for (int k = DigammaEngine::kSeriesOrder - 1; k >= 0; --k) series = (series + kDigammaCoef[k]) * inv2;
    return shift + std::log(z) - 0.5 * inv - series;
}

template <class T>
T trigamma_impl(T z) {
    if (std::real(z) < kReflectBelow) {
        // psi'(1 - z) + psi'(z) = pi^2 / sin^2(pi z)
        const T sn = std::sin(kPiD * z);
        return kPiD * kPiD / (sn * sn) - trigamma_impl(T(1.0) - z);
    }
    T shift = 0.0;
    while (std::real(z) < DigammaEngine::kShiftThreshold) {
        shift += T(1.0) / (z * z);
        z += 1.0;
    }
    const T inv = T(1.0) / z;
    const T inv2 = inv * inv;
    T series = 0.0;
    for (int k = DigammaEngine::kSeriesOrder - 1; k >= 0; --k) series = (series + kTrigammaCoef[k]) * inv2;
    return shift + inv + 0.5 * inv2 + series * inv;
}

}  // namespace

std::complex<double> digamma(std::complex<double> s) {
    check_pole(s, "digamma");
    return digamma_impl(s);
}

double digamma(double s) {
    check_pole(s, "digamma");
    return digamma_impl(s);
}

std::complex<double> trigamma(std::complex<double> s) {
    check_pole(s, "trigamma");
    return trigamma_impl(s);
}

double trigamma(double s) {
    check_pole(s, "trigamma");
    return trigamma_impl(s);
}

RootTable find_roots(int count) {
    if (count < 0) throw DomainError("find_roots: need count >= 0");
    RootTable table;
    const double psi1 = digamma(1.0);
    table.s.push_back(1.0);
    table.residues.push_back(1.0 / trigamma(1.0));
    for (int i = 1; i <= count; ++i) {
        const double left_pole = -static_cast<double>(i);
        const double right_pole = left_pole + 1.0;
        auto f = [&](double s) { return digamma(s) - psi1; };
        // psi runs from -inf to +inf between consecutive poles; shrink the offset until it brackets.
        double delta = 1e-2;
        double lo = left_pole + delta;
        double hi = right_pole - delta;
        int tries = 0;
        while (!(f(lo) < 0.0 && f(hi) > 0.0)) {
            if (++tries > 60) {
                throw NumericError("find_roots: no bracket in (" + std::to_string(left_pole) + ", " +
                                   std::to_string(right_pole) + "); last offset " + std::to_string(delta) +
                                   ", f(lo) = " + std::to_string(f(lo)) + ", f(hi) = " + std::to_string(f(hi)));
            }
            delta *= 0.5;
            lo = left_pole + delta;
            hi = right_pole - delta;
        }
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) < 0.0 ? lo : hi) = mid;
        }
        double s = 0.5 * (lo + hi);
        for (int it = 0; it < 50; ++it) {
            const double step = f(s) / trigamma(s);
            double next = s - step;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            (f(next) < 0.0 ? lo : hi) = next;
            const bool done = std::abs(next - s) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(s);
            s = next;
            if (done) break;
        }
        if (!(std::abs(f(s)) < 1e-10)) {
            throw NumericError("find_roots: Newton did not converge near " + std::to_string(s) +
                               " (residual " + std::to_string(f(s)) + ")");
        }
        table.s.push_back(s);
        table.residues.push_back(1.0 / trigamma(s));
    }
    return table;
}

double digamma_difference_integral(double s) {
    if (!(s > -1.0)) throw DomainError("digamma_difference_integral: need s > -1");
    auto f = [s](double x) {
        if (x < 1e-8) return s * (1.0 - 0.5 * (s + 1.0) * x);
        if (x > 30.0) return (std::exp(-x) - std::exp(-(s + 1.0) * x)) / (1.0 - std::exp(-x));
        return std::exp(-x) * std::expm1(-s * x) / std::expm1(-x);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    const double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14, &error);
    if (!(error <= 1e-10 * std::max(1.0, std::abs(value)))) {
        throw NumericError("digamma_difference_integral: error estimate " + std::to_string(error));
    }
    return value;
}

double DensityEstimate::truncated_fraction() const {
    return reps > 0 ? static_cast<double>(truncated) / static_cast<double>(reps) : 0.0;
}

std::vector<double> log_spaced_edges(double x_min, int bins) {
    if (!(x_min > 0.0 && x_min < 1.0) || bins < 1) throw DomainError("log_spaced_edges: need 0 < x_min < 1, bins >= 1");
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    const double l = std::log(x_min);
    for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = std::exp(l * (1.0 - static_cast<double>(k) / bins));
    edges.back() = 1.0;
    return edges;
}

namespace {

struct ChunkResult {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::vector<double> mellin_sum;
    std::vector<double> mellin_sum_sq;
    std::int64_t truncated = 0;
};

}  // namespace

DensityEstimate estimate_occupation_density(const std::vector<double>& x_edges, std::int64_t reps,
                                            const DensityOptions& options) {
    if (x_edges.size() < 2) throw DomainError("estimate_occupation_density: need at least one bin");
    for (std::size_t k = 0; k < x_edges.size(); ++k) {
        if (!(x_edges[k] > 0.0 && x_edges[k] <= 1.0) || (k > 0 && !(x_edges[k] > x_edges[k - 1]))) {
            throw DomainError("estimate_occupation_density: edges must increase within (0, 1]");
        }
    }
    if (reps < 1) throw DomainError("estimate_occupation_density: need reps >= 1");
    if (!(options.t_max > 0.0)) throw DomainError("estimate_occupation_density: need t_max > 0");
    for (double s : options.mellin_s) {
        if (!(s > 1.0)) throw DomainError("estimate_occupation_density: Mellin points need s > 1");
    }

    const std::size_t nbins = x_edges.size() - 1;
    // y-edges ascending: bin b covers y in [y_edge[b], y_edge[b+1]), i.e. x bin nbins-1-b.
    std::vector<double> y_edge(nbins + 1);
    for (std::size_t k = 0; k <= nbins; ++k) y_edge[k] = -std::log(x_edges[nbins - k]);
    const double y_exit = y_edge.back();
    double y_stop = y_exit;
    for (double s : options.mellin_s) y_stop = std::max(y_stop, 40.0 / (s - 1.0));
    const std::size_t nm = options.mellin_s.size();
    const double drift = small_jump_drift(options.eps);

    constexpr std::int64_t kChunk = 256;
    const std::int64_t chunks = (reps + kChunk - 1) / kChunk;
    std::vector<ChunkResult> results(static_cast<std::size_t>(chunks));

    parallel_for(chunks, options.threads, [&](std::int64_t c) {
        ChunkResult& out = results[static_cast<std::size_t>(c)];
        out.sum.assign(nbins, 0.0);
        out.sum_sq.assign(nbins, 0.0);
        out.mellin_sum.assign(nm, 0.0);
        out.mellin_sum_sq.assign(nm, 0.0);
        std::vector<double> sojourn(nbins);
        std::vector<double> mellin(nm);
        const std::int64_t end = std::min(reps, (c + 1) * kChunk);
        for (std::int64_t r = c * kChunk; r < end; ++r) {
            Rng rng(options.seed, static_cast<std::uint64_t>(r));
            SubordinatorStream stream(options.eps, rng);
            std::fill(sojourn.begin(), sojourn.end(), 0.0);
            std::fill(mellin.begin(), mellin.end(), 0.0);
            double t = 0.0;
            double y = 0.0;
            while (y < y_stop && t < options.t_max) {
                const auto [wait, size] = stream.next();
                const double span = std::min(wait, options.t_max - t);
                const double y_end = y + drift * span;
                // Sojourn per bin along the linear drift segment [y, y_end].
                if (y < y_exit) {
                    auto b = static_cast<std::size_t>(std::upper_bound(y_edge.begin(), y_edge.end(), y) - y_edge.begin()) - 1;
                    double y_cur = y;
                    double time_left = span;
                    while (b < nbins && time_left > 0.0) {
                        const double edge = y_edge[b + 1];
                        if (y_end < edge || drift <= 0.0) {
                            sojourn[b] += time_left;
                            break;
                        }
                        const double dt = (edge - y_cur) / drift;
                        sojourn[b] += dt;
                        time_left -= dt;
                        y_cur = edge;
                        ++b;
                    }
                }
                for (std::size_t m = 0; m < nm; ++m) {
                    const double a = options.mellin_s[m] - 1.0;
                    const double rate = a * drift;
                    const double part = rate * span < 1e-12 ? span * (1.0 - 0.5 * rate * span)
                                                            : -std::expm1(-rate * span) / rate;
                    mellin[m] += std::exp(-a * y) * part;
                }
                t += span;
                y = y_end;
                if (wait <= span) y += size;
            }
            if (y < y_exit) ++out.truncated;
            for (std::size_t b = 0; b < nbins; ++b) {
                out.sum[b] += sojourn[b];
                out.sum_sq[b] += sojourn[b] * sojourn[b];
            }
            for (std::size_t m = 0; m < nm; ++m) {
                out.mellin_sum[m] += mellin[m];
                out.mellin_sum_sq[m] += mellin[m] * mellin[m];
            }
        }
    });

    std::vector<double> sum(nbins, 0.0);
    std::vector<double> sum_sq(nbins, 0.0);
    std::vector<double> msum(nm, 0.0);
    std::vector<double> msum_sq(nm, 0.0);
    DensityEstimate est;
    est.reps = reps;
    for (const ChunkResult& c : results) {
        for (std::size_t b = 0; b < nbins; ++b) {
            sum[b] += c.sum[b];
            sum_sq[b] += c.sum_sq[b];
        }
        for (std::size_t m = 0; m < nm; ++m) {
            msum[m] += c.mellin_sum[m];
            msum_sq[m] += c.mellin_sum_sq[m];
        }
        est.truncated += c.truncated;
    }
    const double n = static_cast<double>(reps);
    auto stderr_of = [n](double s, double s2) {
        if (n < 2) return 0.0;
        const double mean = s / n;
        return std::sqrt(std::max(0.0, (s2 / n - mean * mean) * n / (n - 1)) / n);
    };
    for (std::size_t k = 0; k < nbins; ++k) {
        const std::size_t b = nbins - 1 - k;  // y-bin of x-bin k
        DensityBin bin;
        bin.x_lo = x_edges[k];
        bin.x_hi = x_edges[k + 1];
        bin.x_mid = std::sqrt(bin.x_lo * bin.x_hi);
        const double width = bin.x_hi - bin.x_lo;
        bin.u_hat = sum[b] / n / width;
        bin.std_error = stderr_of(sum[b], sum_sq[b]) / width;
        est.bins.push_back(bin);
    }
    est.mellin_s = options.mellin_s;
    for (std::size_t m = 0; m < nm; ++m) {
        est.mellin_hat.push_back(msum[m] / n);
        est.mellin_stderr.push_back(stderr_of(msum[m], msum_sq[m]));
    }
    return est;
}

}  // namespace critsplit
