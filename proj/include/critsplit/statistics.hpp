// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace critsplit {

/// Welford mean and variance; merge() is exact up to rounding and order-independent
/// in distribution.
class RunningStats {
public:
    void add(double x);
    void merge(const RunningStats& other);

    std::int64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept;  ///< unbiased
    double stderr_mean() const noexcept;

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::int64_t dof = 0;  ///< chi-square only
};

/// Kolmogorov distribution survival function Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);

/// One-sample KS against a continuous CDF (Stephens' small-sample correction).
TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample KS with effective size n m / (n + m).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson goodness of fit. Cells with expected count below min_expected are pooled
/// (in the given order) into their neighbours before testing.
TestResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

/// Two-sample chi-square homogeneity test on paired count vectors.
TestResult chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                 double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double x, double dof);

}  // namespace critsplit
