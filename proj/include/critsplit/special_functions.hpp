// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "critsplit/rng.hpp"

namespace critsplit {

/// Recurrence shift threshold and number of asymptotic terms used by digamma/trigamma.
struct DigammaEngine {
    static constexpr double kShiftThreshold = 8.0;
    static constexpr int kSeriesOrder = 7;
};

/// psi(s). Throws DomainError at the poles 0, -1, -2, ...
std::complex<double> digamma(std::complex<double> s);
double digamma(double s);

/// psi'(s). Throws DomainError at the poles.
std::complex<double> trigamma(std::complex<double> s);
double trigamma(double s);

/// s[0] = 1 and s[i] the unique root of psi(s) = psi(1) in (-i, -(i-1)); r[i] = 1/psi'(s[i]).
struct RootTable {
    std::vector<double> s;
    std::vector<double> residues;
};

/// count roots besides s[0]. Throws NumericError when a bracket cannot be found.
RootTable find_roots(int count);

/// Quadrature of int_0^inf (e^{-x} - e^{-(s+1)x})/(1 - e^{-x}) dx, which equals
/// psi(s+1) - psi(1). Throws NumericError if the error estimate exceeds 1e-10.
double digamma_difference_integral(double s);

/// Log-binned sojourn estimate of the occupation density u(x) of x = e^{-Y_t}.
struct DensityBin {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double x_mid = 0.0;    ///< geometric centre
    double u_hat = 0.0;    ///< mean sojourn time in the bin / bin width
    double std_error = 0.0;
};

struct DensityEstimate {
    std::vector<DensityBin> bins;
    std::vector<double> mellin_s;
    std::vector<double> mellin_hat;     ///< per-path exact int_0^inf e^{-(s-1) Y_t} dt, averaged
    std::vector<double> mellin_stderr;
    std::int64_t reps = 0;
    std::int64_t truncated = 0;         ///< paths that had not left the grid by t_max
    double truncated_fraction() const;
};

struct DensityOptions {
    double t_max = 200.0;
    double eps = 1e-7;
    std::vector<double> mellin_s{1.5, 2.0, 3.0};
    std::uint64_t seed = 1;
    int threads = 1;
};

/// x_edges: increasing bin edges in (0, 1]. Replicate i uses Rng(seed, i); the result does
/// not depend on the thread count.
DensityEstimate estimate_occupation_density(const std::vector<double>& x_edges, std::int64_t reps,
                                            const DensityOptions& options);

/// n log-spaced edges from x_min to 1 (n bins).
std::vector<double> log_spaced_edges(double x_min, int bins);

}  // namespace critsplit
