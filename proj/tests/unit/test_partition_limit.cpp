// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "critsplit/fringe.hpp"
#include "critsplit/partition_limit.hpp"
#include "critsplit/shape.hpp"
#include "critsplit/statistics.hpp"
#include "critsplit/tree_stats.hpp"
#include "doctest.h"

using namespace critsplit;

namespace {

using Parts = std::vector<std::vector<std::int64_t>>;

// Size of the first block of a grown tree: the clade of leaf 1 alive at t.
double first_block_fraction(const CladeTree& tree, double t) {
    const NodeId v = block_of(tree, 1, t);
    return static_cast<double>(tree.node(v).n_leaves) / static_cast<double>(tree.leaf_count());
}

std::vector<CladeTree>& grown_pool() {
    static std::vector<CladeTree> pool = [] {
        std::vector<CladeTree> p;
        for (std::uint64_t r = 0; r < 3000; ++r) {
            Rng rng(404, r);
            p.push_back(grow_tree(2000, rng));
        }
        return p;
    }();
    return pool;
}

}  // namespace

TEST_CASE("paintbox sampling") {
    Rng rng(1);
    PaintboxWeights one{{1.0}};
    const Parts p = paintbox_sample(one, 5, rng);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == std::vector<std::int64_t>{1, 2, 3, 4, 5});

    PaintboxWeights half{{0.5, 0.5}};
    int same = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) same += paintbox_sample(half, 2, rng).size() == 1;
    CHECK(std::abs(same / double(reps) - 0.5) < 3 * std::sqrt(0.25 / reps));

    const Parts q = paintbox_sample(PaintboxWeights{{0.2, 0.3, 0.5}}, 50, rng);
    CHECK(q[0][0] == 1);
    for (std::size_t b = 1; b < q.size(); ++b) CHECK(q[b][0] > q[b - 1][0]);

    CHECK_THROWS_AS(paintbox_sample(PaintboxWeights{{0.5, 0.4}}, 3, rng), DomainError);
}

TEST_CASE("block proportions of grown trees") {
    Rng rng(2);
    const PaintboxWeights w0 = block_proportions(50, 0.0, rng);
    REQUIRE(w0.weights.size() == 1);
    CHECK(w0.weights[0] == 1.0);
    const PaintboxWeights w = block_proportions(500, 0.7, rng);
    CHECK(std::abs(w.total() - 1.0) < 1e-9);
    const PaintboxWeights ws = block_proportions(grow_tree(500, rng), 0.7, BlockOrder::by_size);
    CHECK(std::is_sorted(ws.weights.rbegin(), ws.weights.rend()));
    CHECK_THROWS_AS(block_proportions(0, 1.0, rng), DomainError);
    CHECK_THROWS_AS(block_proportions(5, -1.0, rng), DomainError);

    const CladeTree tree = grow_tree(300, rng);
    const LevelPartition cut = level_cut(tree, 0.4);
    const NodeId v = block_of(tree, 1, 0.4);
    CHECK(tree.node(v).n_leaves == static_cast<std::int64_t>(cut.blocks[0].size()));
}

TEST_CASE("paintbox reconstructs the level cut of CTCS(6)") {
    const int reps = 4000;
    std::vector<std::int64_t> from_paintbox(7, 0);
    std::vector<std::int64_t> direct(7, 0);
    for (int r = 0; r < reps; ++r) {
        Rng rng(77, static_cast<std::uint64_t>(r));
        const PaintboxWeights w = block_proportions(2000, 0.5, rng);
        ++from_paintbox[paintbox_sample(w, 6, rng)[0].size()];
        const CladeTree t = sample_ctcs(6, LabelMode::unordered, rng);
        ++direct[level_cut(t, 0.5).blocks[0].size()];
    }
    const auto res = chi_square_two_sample(std::span(from_paintbox).subspan(1), std::span(direct).subspan(1));
    CHECK(res.p_value > 0.001);
}

TEST_CASE("exact first-block moments at finite n") {
    for (double t : {0.0, 0.3, 2.0}) {
        CHECK(first_block_moment_exact(1, 3, t) == doctest::Approx(1.0));
        CHECK(first_block_moment_exact(7, 0, t) == doctest::Approx(1.0));
        CHECK(first_block_moment_exact(2, 2, t) == doctest::Approx(std::exp(-t) + (1 - std::exp(-t)) / 4));
        CHECK(first_block_moment_exact(9, 1, t) == doctest::Approx((1 + 8 * std::exp(-t)) / 9));
    }
    CHECK(std::abs(first_block_moment_exact(1000000, 3, 1.0) - std::exp(-harmonic(3))) < 1e-5);

    // Against CTCS(12) simulation.
    const int reps = 40000;
    const double t = 0.5;
    RunningStats m[4];
    Rng rng(3);
    for (int r = 0; r < reps; ++r) {
        const CladeTree tree = sample_ctcs(12, LabelMode::unordered, rng);
        const double x = static_cast<double>(level_cut(tree, t).blocks[0].size()) / 12.0;
        for (int k = 1; k <= 3; ++k) m[k].add(std::pow(x, k));
    }
    for (int k = 1; k <= 3; ++k) {
        CHECK(std::abs(m[k].mean() - first_block_moment_exact(12, k, t)) < 3.5 * m[k].stderr_mean());
    }
}

TEST_CASE("first-block moments of grown trees") {
    const auto& pool = grown_pool();
    for (double t : {0.5, 1.0}) {
        RunningStats m[4];
        for (const CladeTree& tree : pool) {
            const double x = first_block_fraction(tree, t);
            for (int k = 1; k <= 3; ++k) m[k].add(std::pow(x, k));
        }
        for (int k = 1; k <= 3; ++k) {
            const double limit = std::exp(-harmonic(k) * t);
            const double bias = std::abs(first_block_moment_exact(2000, k, t) - limit);
            CHECK(std::abs(m[k].mean() - limit) < 3.5 * m[k].stderr_mean() + bias);
        }
    }
}

TEST_CASE("multiplicativity of the first block") {
    const auto& pool = grown_pool();
    std::vector<double> whole;
    std::vector<double> product;
    for (std::size_t r = 0; r + 1 < pool.size(); r += 2) {
        whole.push_back(first_block_fraction(pool[r], 1.0));
        product.push_back(first_block_fraction(pool[r], 0.5) * first_block_fraction(pool[r + 1], 0.5));
    }
    CHECK(ks_two_sample(whole, product).p_value > 0.001);
}

TEST_CASE("first block versus the subordinator") {
    const auto& pool = grown_pool();
    std::vector<double> tree_side;
    for (const CladeTree& tree : pool) tree_side.push_back(first_block_fraction(tree, 1.0));
    std::vector<double> sub_side;
    for (std::uint64_t r = 0; r < pool.size(); ++r) {
        Rng rng(55, r);
        sub_side.push_back(std::exp(-simulate_subordinator(1.0, 1e-6, rng).value_at(1.0)));
    }
    CHECK(ks_two_sample(tree_side, sub_side).p_value > 0.001);
}

// Blocks of the cut at n = 100 that gained leaves by n = N. The restriction of CTCS(N) to
// labels 1..100 is CTCS(100), so direct sampling gives the same law as growth.
bool all_blocks_grew_direct(std::int64_t n_big, Rng& rng) {
    const LevelPartition cut = level_cut(sample_ctcs(n_big, LabelMode::unordered, rng), 0.5);
    for (const auto& block : cut.blocks) {
        if (block.front() <= 100 && block.back() <= 100) return false;
    }
    return true;
}

TEST_CASE("blocks keep growing") {
    const int runs = 1000;
    int grown = 0;
    for (int r = 0; r < runs; ++r) {
        Rng rng(88, static_cast<std::uint64_t>(r));
        CladeTree tree = grow_tree(100, rng);
        const LevelPartition before = level_cut(tree, 0.5);
        while (tree.leaf_count() < 2000) grow_step(tree, rng);
        bool ok = true;
        for (const auto& block : before.blocks) {
            ok = ok && tree.node(block_of(tree, block.front(), 0.5)).n_leaves > static_cast<std::int64_t>(block.size());
        }
        grown += ok;
    }
    const int direct_runs = 4000;
    int direct = 0;
    for (int r = 0; r < direct_runs; ++r) {
        Rng rng(89, static_cast<std::uint64_t>(r));
        direct += all_blocks_grew_direct(2000, rng);
    }
    const double p1 = grown / double(runs);
    const double p2 = direct / double(direct_runs);
    const double pooled = (grown + direct) / double(runs + direct_runs);
    const double se = std::sqrt(pooled * (1 - pooled) * (1.0 / runs + 1.0 / direct_runs));
    CHECK(std::abs(p1 - p2) < 3.5 * se);
    CHECK(p1 > 0.85);

    int later = 0;
    const int later_runs = 300;
    for (int r = 0; r < later_runs; ++r) {
        Rng rng(90, static_cast<std::uint64_t>(r));
        later += all_blocks_grew_direct(20000, rng);
    }
    CHECK(later / double(later_runs) > p2);
}

TEST_CASE("self-similar growth of the clade of leaf 1") {
    const double t = 0.5;
    const int reps = 10000;
    auto shapes = std::make_shared<ShapeInterner>();
    std::map<std::int64_t, std::map<std::string, std::int64_t>> seen;
    for (int r = 0; r < reps; ++r) {
        Rng rng(99, static_cast<std::uint64_t>(r));
        CladeTree tree = CladeTree::single_leaf();
        std::int64_t last = 0;
        while (tree.leaf_count() < 20000) {
            const NodeId v = block_of(tree, 1, t);
            const std::int64_t m = tree.node(v).n_leaves;
            if (m != last && m >= 2 && m <= 5) seen[m][shapes->to_string(clade_shape(tree, v, *shapes))]++;
            last = m;
            if (m >= 5) break;
            grow_step(tree, rng);
        }
    }
    for (std::int64_t m = 2; m <= 5; ++m) {
        const ShapeDistribution& d = shape_distribution(m);
        std::vector<std::int64_t> obs;
        std::vector<double> probs;
        for (const auto& [id, p] : d.probs) {
            obs.push_back(seen[m][ShapeInterner::global().to_string(id)]);
            probs.push_back(p);
        }
        std::int64_t total = 0;
        for (const auto& [key, c] : seen[m]) total += c;
        CHECK(total >= reps * 9 / 10);
        if (probs.size() > 1) CHECK(chi_square_gof(obs, probs).p_value > 0.001);
    }
}

TEST_CASE("moment_law basics") {
    CHECK(moment_law(0.0, 3.0) == std::complex<double>(1.0));
    CHECK(std::abs(moment_law(2.0, 1.0).real() - std::exp(-1.5)) < 1e-12);
    CHECK_THROWS_AS(moment_law(-1.5, 1.0), DomainError);
    CHECK_THROWS_AS(moment_law(1.0, -1.0), DomainError);
}

TEST_CASE("jump rates") {
    CHECK(jump_rate({{1}, {2}}) == doctest::Approx(1.0));
    CHECK(jump_rate({{1, 2}, {3}}) == doctest::Approx(0.5));
    CHECK(jump_rate({{1}, {2}, {3}}) == 0.0);
    CHECK_THROWS_AS(jump_rate({{1, 2}, {2, 3}}), DomainError);
    CHECK_THROWS_AS(jump_rate({{1, 2, 3}}), DomainError);
    CHECK_THROWS_AS(jump_rate({{1}, {3}}), DomainError);

    for (std::int64_t n = 2; n <= 10; ++n) {
        // Every two-block partition, listed by the block of 1.
        double total = 0.0;
        for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (n - 1)); ++mask) {
            Parts parts(2);
            parts[0].push_back(1);
            for (std::int64_t x = 2; x <= n; ++x) parts[(mask >> (x - 2)) & 1 ? 0 : 1].push_back(x);
            total += jump_rate(parts);
        }
        CHECK(std::abs(total - harmonic(n - 1)) < 1e-12);
        for (std::int64_t i = 1; i < n; ++i) {
            const double binom = std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0)));
            CHECK(std::abs(jump_rate_by_size(n, i) - 2 * split_rate(n, i) / binom) < 1e-12);
        }
    }
}

TEST_CASE("dislocation identity") {
    for (std::int64_t n = 2; n <= 10; ++n) {
        for (std::int64_t i = 1; i < n; ++i) {
            const auto [lhs, rhs] = dislocation_check(n, i);
            CHECK(std::abs(lhs - rhs) < 1e-8);
        }
    }
    CHECK(dislocation_check(4, 2).second == doctest::Approx(1.0 / 6));
    CHECK(dislocation_check(5, 1).second == doctest::Approx(0.25));
    CHECK_THROWS_AS(dislocation_check(4, 4), DomainError);
}

TEST_CASE("Levy measure mean and drift") {
    CHECK(std::abs(levy_mean_quadrature() - std::numbers::pi * std::numbers::pi / 6) < 1e-8);
    CHECK(std::abs(small_jump_drift(1e-6) / 9.9999975000002777778e-7 - 1) < 1e-14);
    CHECK(std::abs(small_jump_drift(1e-3) / 0.0009997500277777775 - 1) < 1e-14);
    // Compare with the integral of a/(e^a - 1) at a larger cutoff.
    const double eps = 0.5;
    double ref = 0.0;
    const int steps = 20000;
    for (int k = 0; k < steps; ++k) {
        const double a = (k + 0.5) * eps / steps;
        ref += a / std::expm1(a) * eps / steps;
    }
    CHECK(std::abs(small_jump_drift(eps) - ref) < 1e-9);
    CHECK_THROWS_AS(small_jump_drift(0.0), DomainError);
    CHECK_THROWS_AS(small_jump_drift(1.0), DomainError);
}

TEST_CASE("subordinator paths") {
    Rng rng(5);
    const SubordinatorPath p = simulate_subordinator(10.0, 1e-3, rng);
    CHECK(p.value_at(0.0) == 0.0);
    CHECK(std::is_sorted(p.jump_times.begin(), p.jump_times.end()));
    const auto grid = p.on_grid({0.0, 1.0, 2.0, 5.0, 10.0});
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK_THROWS_AS(simulate_subordinator(0.0, 1e-3, rng), DomainError);
    CHECK_THROWS_AS(simulate_subordinator(1.0, 2.0, rng), DomainError);

    // Moments E[e^{-k Y_1}] = e^{-h_k}.
    const int reps = 20000;
    RunningStats m1;
    RunningStats m2;
    std::vector<double> inc;
    std::vector<double> head;
    for (int r = 0; r < reps; ++r) {
        Rng path_rng(6, static_cast<std::uint64_t>(r));
        const SubordinatorPath q = simulate_subordinator(2.0, 1e-6, path_rng);
        const double y1 = q.value_at(1.0);
        m1.add(std::exp(-y1));
        m2.add(std::exp(-2 * y1));
        head.push_back(y1);
        inc.push_back(q.value_at(2.0) - y1);
    }
    CHECK(std::abs(m1.mean() - std::exp(-1.0)) < 3.5 * m1.stderr_mean() + truncation_bias(1, 1.0, 1e-6));
    CHECK(std::abs(m2.mean() - std::exp(-1.5)) < 3.5 * m2.stderr_mean() + truncation_bias(2, 1.0, 1e-6));
    CHECK(ks_two_sample(head, inc).p_value > 0.001);
    CHECK(std::abs(truncated_moment(1, 1.0, 1e-6) - std::exp(-1.0)) <= truncation_bias(1, 1.0, 1e-6) * 1.001 + 1e-15);
}

TEST_CASE("law of large numbers for the subordinator") {
    RunningStats s;
    for (int r = 0; r < 1000; ++r) {
        Rng rng(7, static_cast<std::uint64_t>(r));
        s.add(simulate_subordinator(50.0, 1e-6, rng).value_at(50.0) / 50.0);
    }
    const double rho = std::numbers::pi * std::numbers::pi / 6;
    CHECK(std::abs(s.mean() / rho - 1) < 0.05);
}

TEST_CASE("truncation bias shrinks with the cutoff") {
    CHECK(truncation_bias(1, 1.0, 1e-3) > truncation_bias(1, 1.0, 1e-6));
    const auto crn = truncation_bias_crn(1, 1.0, {1e-3, 1e-6}, 2000, 8);
    CHECK(std::abs(crn[0]) > std::abs(crn[1]));
    CHECK(std::abs(std::abs(crn[0]) - truncation_bias(1, 1.0, 1e-3)) < 0.05 * truncation_bias(1, 1.0, 1e-3));
}
