// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/rng.hpp"

namespace critsplit {

enum class BlockOrder { least_element, by_size };

/// Block proportions of an exchangeable partition.
struct PaintboxWeights {
    std::vector<double> weights;
    BlockOrder order = BlockOrder::least_element;

    double total() const;
};

/// Grows CTCS(n_target) with grow_step and returns its level-cut proportions at t.
PaintboxWeights block_proportions(std::int64_t n_target, double t, Rng& rng,
                                  BlockOrder order = BlockOrder::least_element);

/// Level-cut proportions of an existing tree.
PaintboxWeights block_proportions(const CladeTree& tree, double t,
                                  BlockOrder order = BlockOrder::least_element);

/// Node of the clade containing `label` that is alive at t.
NodeId block_of(const CladeTree& tree, std::int64_t label, double t);

/// Exact E[(X/n)^k] for X the size of the block of a fixed leaf of CTCS(n) at time t.
/// Follows from E[(X-1)(X-2)...(X-k)] = (n-1)(n-2)...(n-k) e^{-h_k t}.
double first_block_moment_exact(std::int64_t n, int k, double t);

/// Colours 1..n i.i.d. by the weights; blocks in least-element order.
/// Throws DomainError when the weights do not sum to 1 within 1e-9.
std::vector<std::vector<std::int64_t>> paintbox_sample(const PaintboxWeights& weights, std::int64_t n, Rng& rng);

/// E[P_{t,1}^s] = exp(-t (psi(s+1) - psi(1))) for Re s > -1.
std::complex<double> moment_law(std::complex<double> s, double t);

/// Rate at which [n] splits into the two given parts: (|p1|-1)!(|p2|-1)!/(n-1)!.
/// Partitions with three or more parts have rate 0. Throws DomainError on non-partitions.
double jump_rate(const std::vector<std::vector<std::int64_t>>& parts);

/// Rate of one particular split of [n] into blocks of sizes i and n - i.
double jump_rate_by_size(std::int64_t n, std::int64_t i);

/// (adaptive quadrature of the dislocation integral, Gamma(i)Gamma(n-i)/Gamma(n)).
std::pair<double, double> dislocation_check(std::int64_t n, std::int64_t i);

/// int_0^inf -log(1 - e^{-a}) da by quadrature (equals pi^2/6).
double levy_mean_quadrature();

/// mu(eps) = int_0^eps a e^{-a}/(1 - e^{-a}) da, by its Bernoulli series.
double small_jump_drift(double eps);

/// Jump sizes >= eps of the subordinator, with Y_t = drift t + sum of jumps before t.
class SubordinatorStream {
public:
    SubordinatorStream(double eps, Rng& rng);

    double eps() const noexcept { return eps_; }
    double drift() const noexcept { return drift_; }
    double jump_rate() const noexcept { return rate_; }

    /// (waiting time, jump size) of the next jump; time first, then size.
    std::pair<double, double> next();

private:
    double eps_;
    double drift_;
    double rate_;
    Rng* rng_;
};

/// Truncated subordinator path on [0, t_max].
struct SubordinatorPath {
    double t_max = 0.0;
    double eps = 0.0;
    double drift = 0.0;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;

    /// Y(t), right-continuous.
    double value_at(double t) const;
    std::vector<double> on_grid(const std::vector<double>& times) const;
};

SubordinatorPath simulate_subordinator(double t_max, double eps, Rng& rng);

/// sum_{j=1}^{k} (1 - e^{-j eps})/j: the part of h_k carried by jumps below eps.
double small_jump_exponent(int k, double eps);

/// E[e^{-k Y_t}] of the truncated process, in closed form.
double truncated_moment(int k, double t, double eps);

/// |truncated_moment - e^{-h_k t}|.
double truncation_bias(int k, double t, double eps);

/// Common-random-number Monte-Carlo estimate of the truncation bias of E[e^{-k Y_t}] for
/// each eps; one path per replicate with cutoff min(eps). Replicate i uses Rng(seed, i).
std::vector<double> truncation_bias_crn(int k, double t, const std::vector<double>& eps_values,
                                        std::int64_t reps, std::uint64_t seed);

}  // namespace critsplit
