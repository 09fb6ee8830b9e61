// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance <path-to-critsplit-cli>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/core_laws.hpp"
#include "critsplit/fringe.hpp"
#include "critsplit/hd_chain.hpp"
#include "critsplit/newick_io.hpp"
#include "critsplit/parallel.hpp"
#include "critsplit/partition_limit.hpp"
#include "critsplit/shape.hpp"
#include "critsplit/special_functions.hpp"
#include "critsplit/statistics.hpp"
#include "critsplit/tree_stats.hpp"
#include "support/newick_corpus.hpp"

namespace {

using namespace critsplit;

constexpr double kPiSq = std::numbers::pi * std::numbers::pi;

// Pinned tolerances and sizes.
namespace tol {
constexpr double kFourDecimals = 5e-5;
constexpr double kOracle = 1e-11;
constexpr double kShapeProbsSeconds = 1.0;
constexpr double kA1 = 1e-10;
constexpr double kMeanHeightIdentity = 1e-8;
constexpr double kOccupationSeconds = 30.0;
constexpr double kRateSlack = 1.5;
constexpr double kAlpha = 1e-3;
constexpr double kBranchpointSeconds = 10.0;
constexpr double kWindow = 1.0;
constexpr double kVarLo = 0.7;
constexpr double kVarHi = 1.3;
constexpr double kSigmas = 3.0;
constexpr double kLln = 0.05;
constexpr double kRootTol = 1e-3;
constexpr double kTrigamma = 1e-12;
constexpr double kQuadrature = 1e-8;
constexpr double kDensity = 0.10;
constexpr double kResidualGate = 0.25;
constexpr double kDislocation = 1e-8;
constexpr double kJumpSum = 1e-12;
}  // namespace tol

struct Outcome {
    bool pass = true;
    std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int threads() { return resolve_threads(0); }

// shape-probs through the command-line tool.
Outcome shape_constants(const std::string& cli) {
    const double published[] = {0.6079, 0.4559, 0.2702, 0.1013, 0.1382, 0.0518, 0.1267,
                            0.0637, 0.0239, 0.0584, 0.0663, 0.0249, 0.0405};
    const double oracle[] = {0.607927101854, 0.455945326391, 0.270189823046, 0.101321183642, 0.138165250421,
                             0.051811968908, 0.126651479553, 0.0636665473942, 0.0238749552728, 0.058361001778,
                             0.0663193202023, 0.0248697450758, 0.0405284734569};
    if (cli.empty()) return {false, "no CLI path given"};
    const auto t0 = std::chrono::steady_clock::now();
    FILE* p = popen((cli + " shape-probs --n-max 6 --threads 1").c_str(), "r");
    if (p == nullptr) return {false, "cannot start " + cli};
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p) != nullptr) out += buf;
    const int rc = pclose(p);
    const double secs = seconds_since(t0);
    if (rc != 0) return {false, fmt("shape-probs exited with status %d", rc)};
    std::vector<double> leaf;
    std::istringstream lines(out);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) leaf.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    if (leaf.size() != 13) return {false, fmt("expected 13 rows, got %zu", leaf.size())};
    double worst_published = 0.0;
    double worst_oracle = 0.0;
    for (std::size_t k = 0; k < 13; ++k) {
        worst_published = std::max(worst_published, std::abs(leaf[k] - published[k]));
        worst_oracle = std::max(worst_oracle, std::abs(leaf[k] - oracle[k]));
    }
    const bool ok = worst_published <= tol::kFourDecimals && worst_oracle <= tol::kOracle &&
                    secs < tol::kShapeProbsSeconds;
    return {ok, fmt("13 values, max |v - published| = %.2e, max |v - oracle| = %.2e, %.3f s", worst_published,
                    worst_oracle, secs)};
}

Outcome occupation_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t n_all = 10'000;
    const std::int64_t n_identity = 1'000;
    double worst_a1 = 0.0;
    const std::vector<double> absorb = absorption_probabilities(n_all);
    for (std::int64_t n = 1; n <= n_all; ++n) {
        worst_a1 = std::max(worst_a1, std::abs(absorb[static_cast<std::size_t>(n)] - 1.0));
    }
    const std::vector<double> t = mean_height_recursion(n_identity);
    double worst_t = 0.0;
    for (std::int64_t n = 1; n <= n_identity; ++n) {
        const OccupationTable occ = occupation_dp(n);
        worst_a1 = std::max(worst_a1, std::abs(occ.at(1) - 1.0));
        double sum = 0.0;
        for (std::int64_t i = 2; i <= n; ++i) sum += occ.at(i) / harmonic(i - 1);
        worst_t = std::max(worst_t, std::abs(sum - t[static_cast<std::size_t>(n)]));
    }
    for (std::int64_t n : {2'000, 5'000, 10'000}) worst_a1 = std::max(worst_a1, std::abs(occupation_dp(n).at(1) - 1.0));
    const double secs = seconds_since(t0);
    const bool ok = worst_a1 <= tol::kA1 && worst_t <= tol::kMeanHeightIdentity && secs < tol::kOccupationSeconds;
    return {ok, fmt("max |a(n,1) - 1| = %.2e (n <= 1e4), max |sum a/h - t_n| = %.2e (n <= 1e3), %.1f s",
                    worst_a1, worst_t, secs)};
}

Outcome occupation_limit() {
    const double s1 = find_roots(1).s[1];
    const double rate = s1 - 1.0;
    double c = 0.0;
    double gap200 = 0.0;
    double gap2000 = 0.0;
    for (std::int64_t i = 2; i <= 10; ++i) {
        const double g = occupation_limit_gap(200, i);
        c = std::max(c, g / std::pow(200.0, rate));
        gap200 = std::max(gap200, g);
    }
    bool ok = true;
    double worst = 0.0;
    for (std::int64_t i = 2; i <= 10; ++i) {
        const double g = occupation_limit_gap(2000, i);
        gap2000 = std::max(gap2000, g);
        worst = std::max(worst, g / (std::pow(2000.0, rate) * c));
        ok = ok && g <= std::pow(2000.0, rate) * c;
    }
    const double ratio = gap2000 / gap200;
    const double bound = std::pow(10.0, rate) * tol::kRateSlack;
    ok = ok && ratio <= bound;
    return {ok, fmt("C = %.4g, max gap(2000,i) / (2000^(s1-1) C) = %.3f, gap ratio %.4g <= %.4g", c, worst, ratio,
                    bound)};
}

Outcome branchpoint_law() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t reps = 10'000;
    std::string detail;
    bool ok = true;
    for (std::int64_t n : {2, 5, 50}) {
        std::vector<double> b(static_cast<std::size_t>(reps));
        parallel_for(reps, threads(), [&](std::int64_t r) {
            Rng rng(1000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
            const CladeTree tree = sample_ctcs(n, LabelMode::unordered, rng);
            b[static_cast<std::size_t>(r)] = branchpoint_height(tree, 1, 2);
        });
        const TestResult ks = ks_one_sample(b, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-x); });
        ok = ok && ks.p_value > tol::kAlpha;
        detail += fmt("n=%lld p=%.3f; ", static_cast<long long>(n), ks.p_value);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < tol::kBranchpointSeconds;
    return {ok, detail + fmt("%.2f s", secs)};
}

Outcome consistency() {
    const std::int64_t reps = 100'000;
    ShapeInterner& shapes = ShapeInterner::global();
    std::vector<ShapeId> pruned(static_cast<std::size_t>(reps));
    std::vector<ShapeId> direct(static_cast<std::size_t>(reps));
    std::vector<double> len_pruned(static_cast<std::size_t>(reps));
    std::vector<double> len_direct(static_cast<std::size_t>(reps));
    for (std::int64_t r = 0; r < reps; ++r) {
        const auto k = static_cast<std::size_t>(r);
        Rng a(5001, static_cast<std::uint64_t>(r));
        CladeTree six = sample_ctcs(6, LabelMode::unordered, a);
        delete_and_prune(six, 6);
        pruned[k] = clade_shape(six, six.root(), shapes);
        len_pruned[k] = six.total_edge_length();
        Rng b(5002, static_cast<std::uint64_t>(r));
        const CladeTree five = sample_ctcs(5, LabelMode::unordered, b);
        direct[k] = clade_shape(five, five.root(), shapes);
        len_direct[k] = five.total_edge_length();
    }
    const auto& dist = shape_distribution(5).probs;
    std::vector<std::int64_t> ca(dist.size()), cb(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        ca[j] = std::count(pruned.begin(), pruned.end(), dist[j].first);
        cb[j] = std::count(direct.begin(), direct.end(), dist[j].first);
    }
    const TestResult chi = chi_square_two_sample(ca, cb);
    const TestResult ks = ks_two_sample(len_pruned, len_direct);
    const bool ok = chi.p_value > tol::kAlpha && ks.p_value > tol::kAlpha;
    return {ok, fmt("1e5 reps: shape chi-square p = %.3f, edge-length KS p = %.3f", chi.p_value, ks.p_value)};
}

Outcome growth_law() {
    const std::int64_t reps = 100'000;
    ShapeInterner& shapes = ShapeInterner::global();
    const auto& dist = shape_distribution(6).probs;
    std::map<ShapeId, std::size_t> index;
    for (std::size_t j = 0; j < dist.size(); ++j) index[dist[j].first] = j;
    std::vector<std::int64_t> counts(dist.size());
    std::vector<double> probs;
    for (const auto& [id, p] : dist) probs.push_back(p);
    for (std::int64_t r = 0; r < reps; ++r) {
        Rng rng(6001, static_cast<std::uint64_t>(r));
        const CladeTree tree = grow_tree(6, rng);
        ++counts[index.at(clade_shape(tree, tree.root(), shapes))];
    }
    const TestResult chi = chi_square_gof(counts, probs);
    return {chi.p_value > tol::kAlpha,
            fmt("1e5 grown CTCS(6): chi-square %.2f on %lld dof, p = %.3f", chi.statistic,
                static_cast<long long>(chi.dof), chi.p_value)};
}

Outcome heights() {
    const std::vector<double> t = mean_height_recursion(10'000);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::int64_t n = 10; n <= 10'000; ++n) {
        const double c = t[static_cast<std::size_t>(n)] - 6.0 / kPiSq * std::log(static_cast<double>(n));
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    const std::int64_t n = 100'000;
    const std::int64_t reps = 10'000;
    std::vector<double> d(static_cast<std::size_t>(reps));
    parallel_for(reps, threads(), [&](std::int64_t r) {
        Rng rng(7001, static_cast<std::uint64_t>(r));
        d[static_cast<std::size_t>(r)] = simulate_hd_summary(n, rng).height;
    });
    RunningStats s;
    for (double x : d) s.add(x);
    const double zeta3 = 1.2020569031595942854;
    const double zeta2 = kPiSq / 6.0;
    const double ratio = s.variance() / (2.0 * zeta3 / (zeta2 * zeta2 * zeta2) * std::log(static_cast<double>(n)));
    const bool ok = hi - lo <= tol::kWindow && ratio >= tol::kVarLo && ratio <= tol::kVarHi;
    return {ok, fmt("window width %.4f over [10, 1e4]; var ratio at n=1e5 = %.4f", hi - lo, ratio)};
}

Outcome sum_of_squares_mean() {
    const std::int64_t reps = 100'000;
    const double ts[] = {0.25, 0.5, 1.0, 2.0};
    bool ok = true;
    double worst = 0.0;
    for (std::int64_t n : {10, 20, 50}) {
        std::vector<std::array<double, 4>> q(static_cast<std::size_t>(reps));
        parallel_for(reps, threads(), [&](std::int64_t r) {
            Rng rng(8000 + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
            const CladeTree tree = sample_ctcs(n, LabelMode::unlabelled, rng);
            for (int j = 0; j < 4; ++j) q[static_cast<std::size_t>(r)][j] = static_cast<double>(sum_of_squares(tree, ts[j]));
        });
        for (int j = 0; j < 4; ++j) {
            RunningStats s;
            for (const auto& row : q) s.add(row[static_cast<std::size_t>(j)]);
            const double nn = static_cast<double>(n);
            const double exact = nn + (nn * nn - nn) * std::exp(-ts[j]);
            const double z = std::abs(s.mean() - exact) / s.stderr_mean();
            worst = std::max(worst, z);
            ok = ok && z <= tol::kSigmas;
        }
    }
    return {ok, fmt("12 grid points, 1e5 reps each, max |z| = %.2f", worst)};
}

Outcome limit_moments() {
    bool ok = true;
    std::string detail;
    // First block at n = 1e4.
    const std::int64_t n = 10'000;
    const std::int64_t trees = 4'000;
    const double ts[] = {0.5, 1.0};
    std::vector<std::array<double, 2>> x(static_cast<std::size_t>(trees));
    parallel_for(trees, threads(), [&](std::int64_t r) {
        Rng rng(9001, static_cast<std::uint64_t>(r));
        const CladeTree tree = sample_ctcs(n, LabelMode::unordered, rng);
        for (int j = 0; j < 2; ++j) {
            x[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                static_cast<double>(tree.node(block_of(tree, 1, ts[j])).n_leaves) / static_cast<double>(n);
        }
    });
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 1; k <= 3; ++k) {
            RunningStats s;
            for (const auto& row : x) s.add(std::pow(row[static_cast<std::size_t>(j)], k));
            const double lim = std::exp(-harmonic(k) * ts[j]);
            const double bias = std::abs(first_block_moment_exact(n, k, ts[j]) - lim);
            const double excess = std::abs(s.mean() - lim) / (tol::kSigmas * s.stderr_mean() + bias);
            worst = std::max(worst, excess);
            ok = ok && excess <= 1.0;
        }
    }
    detail += fmt("first block (4000 trees): worst |dev|/(3 se + bias) = %.3f; ", worst);

    // Subordinator with eps = 1e-6.
    const double eps = 1e-6;
    const std::int64_t paths = 20'000;
    std::vector<std::array<double, 2>> y(static_cast<std::size_t>(paths));
    parallel_for(paths, threads(), [&](std::int64_t r) {
        Rng rng(9002, static_cast<std::uint64_t>(r));
        const SubordinatorPath p = simulate_subordinator(1.0, eps, rng);
        y[static_cast<std::size_t>(r)] = {p.value_at(0.5), p.value_at(1.0)};
    });
    worst = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 1; k <= 3; ++k) {
            RunningStats s;
            for (const auto& row : y) s.add(std::exp(-k * row[static_cast<std::size_t>(j)]));
            const double lim = std::exp(-harmonic(k) * ts[j]);
            const double excess = std::abs(s.mean() - lim) /
                                  (tol::kSigmas * s.stderr_mean() + truncation_bias(k, ts[j], eps));
            worst = std::max(worst, excess);
            ok = ok && excess <= 1.0;
        }
    }
    detail += fmt("subordinator (2e4 paths): worst = %.3f; ", worst);

    // Law of large numbers at t = 50, averaged over paths.
    const std::int64_t lln_paths = 1'000;
    std::vector<double> ratio(static_cast<std::size_t>(lln_paths));
    parallel_for(lln_paths, threads(), [&](std::int64_t r) {
        Rng rng(9003, static_cast<std::uint64_t>(r));
        ratio[static_cast<std::size_t>(r)] = simulate_subordinator(50.0, eps, rng).value_at(50.0) / 50.0;
    });
    RunningStats s;
    for (double v : ratio) s.add(v);
    const double rel = std::abs(s.mean() / (kPiSq / 6.0) - 1.0);
    ok = ok && rel <= tol::kLln;
    detail += fmt("mean Y_50/50 = %.4f (rel. dev. %.4f)", s.mean(), rel);
    return {ok, detail};
}

Outcome special_functions() {
    const RootTable roots = find_roots(2);
    const double s1 = roots.s[1];
    const double s2 = roots.s[2];
    const double tri = trigamma(1.0);
    double worst = 0.0;
    for (double s : {0.25, 0.5, 1.0, 2.0, 3.5, 10.0}) {
        worst = std::max(worst, std::abs(digamma_difference_integral(s) - (digamma(s + 1.0) - digamma(1.0))));
    }
    const double oracle_s1 = -0.56735375310165533255;
    const double oracle_s2 = -1.6284608732901229275;
    const bool ok = std::abs(s1 + 0.567) <= tol::kRootTol && std::abs(s2 + 1.628) <= tol::kRootTol &&
                    std::abs(s1 - oracle_s1) <= 1e-9 && std::abs(s2 - oracle_s2) <= 1e-9 &&
                    std::abs(tri - kPiSq / 6.0) <= tol::kTrigamma && worst <= tol::kQuadrature;
    return {ok, fmt("s1 = %.6f, s2 = %.6f, |trigamma(1) - pi^2/6| = %.1e, quadrature max err %.1e", s1, s2,
                    std::abs(tri - kPiSq / 6.0), worst)};
}

Outcome density() {
    DensityOptions o;
    o.seed = 11'001;
    o.threads = threads();
    const std::int64_t reps = 10'000;
    // 31 bins over four decades put the middle bin's centre on x = 0.01.
    const DensityEstimate est = estimate_occupation_density(log_spaced_edges(1e-4, 31), reps, o);
    const DensityBin* at = &est.bins.front();
    for (const DensityBin& b : est.bins) {
        if (std::abs(std::log(b.x_mid / 0.01)) < std::abs(std::log(at->x_mid / 0.01))) at = &b;
    }
    const double lead = 6.0 / kPiSq;
    const double xu = at->x_mid * at->u_hat;
    const double rel = std::abs(xu / lead - 1.0);
    std::size_t m = 0;
    while (est.mellin_s[m] != 2.0) ++m;
    const double z = std::abs(est.mellin_hat[m] - 1.0) / est.mellin_stderr[m];
    const RootTable roots = find_roots(1);
    const double resid = (at->u_hat - lead / at->x_mid) * std::pow(at->x_mid, roots.s[1]);
    const double resid_se = at->std_error * std::pow(at->x_mid, roots.s[1]);
    const bool gate = std::abs(resid / roots.residues[1] - 1.0) <= tol::kResidualGate;
    const bool ok = rel <= tol::kDensity && z <= tol::kSigmas && est.truncated == 0;
    return {ok, fmt("x = %.4f: x u_hat = %.4f (rel. dev. %.3f); Mellin(2) = %.4f, |z| = %.2f; "
                    "residual gate %s (non-blocking): %.3g +- %.3g vs r1 = %.4f",
                    at->x_mid, xu, rel, est.mellin_hat[m], z, gate ? "met" : "not met", resid, resid_se,
                    roots.residues[1])};
}

Outcome dislocation() {
    double worst_d = 0.0;
    double worst_j = 0.0;
    for (std::int64_t n = 2; n <= 10; ++n) {
        for (std::int64_t i = 1; i < n; ++i) {
            const auto [lhs, rhs] = dislocation_check(n, i);
            worst_d = std::max(worst_d, std::abs(lhs - rhs));
        }
        // Every two-block partition of [n], listed by the block of 1.
        double total = 0.0;
        for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (n - 1)); ++mask) {
            std::vector<std::vector<std::int64_t>> parts(2);
            parts[0].push_back(1);
            for (std::int64_t x = 2; x <= n; ++x) parts[(mask >> (x - 2)) & 1 ? 0 : 1].push_back(x);
            total += jump_rate(parts);
        }
        worst_j = std::max(worst_j, std::abs(total - harmonic(n - 1)));
    }
    const bool ok = worst_d <= tol::kDislocation && worst_j <= tol::kJumpSum;
    return {ok, fmt("n <= 10: dislocation max err %.1e, jump-rate sum max err %.1e", worst_d, worst_j)};
}

Outcome newick() {
    std::string detail;
    bool ok = true;
    // Round trip.
    const std::vector<std::string> corpus = testing::grammar_corpus();
    std::int64_t fixed = 0;
    for (const std::string& text : corpus) {
        const NewickDocument a = parse_newick(text);
        const std::string once = to_newick(a);
        const NewickDocument b = parse_newick(once);
        bool same = a.ok() && b.ok() && a.trees.size() == b.trees.size() && to_newick(b) == once;
        for (std::size_t k = 0; same && k < a.trees.size(); ++k) same = a.trees[k].same_as(b.trees[k]);
        fixed += same;
    }
    ok = ok && fixed == static_cast<std::int64_t>(corpus.size()) && corpus.size() == 100;
    detail += fmt("round trip %lld/%zu; ", static_cast<long long>(fixed), corpus.size());

    // Fuzz.
    const std::int64_t cases = 10'000;
    std::int64_t survived = 0;
    std::size_t largest = 0;
    Rng rng(13'001);
    for (std::int64_t k = 0; k < cases; ++k) {
        const std::string input = testing::fuzz_case(rng, 1u << 20);
        largest = std::max(largest, input.size());
        try {
            const NewickDocument d = parse_newick(input, "fuzz");
            (void)to_newick(d);
            ++survived;
        } catch (const std::exception&) {
        }
    }
    ok = ok && survived == cases;
    detail += fmt("fuzz %lld/%lld clean (largest %zu bytes); ", static_cast<long long>(survived),
                  static_cast<long long>(cases), largest);

    // Model corpus.
    const int trees = 1000;
    const std::int64_t n = 100;
    std::vector<NewickDocument> docs;
    Rng mr(13'002);
    for (int k = 0; k < trees; ++k) {
        docs.push_back(parse_newick(to_newick(sample_dtcs(n, LabelMode::unlabelled, mr), false)));
    }
    const ShapeReport all = shape_report(docs, 4);
    const OccupationTable occ = occupation_dp(n);
    std::vector<ShapeReport> single;
    for (const NewickDocument& d : docs) single.push_back(shape_report({&d, 1}, 4));
    double worst = 0.0;
    for (std::size_t r = 0; r < all.rows.size(); ++r) {
        const ShapeReportRow& row = all.rows[r];
        RunningStats per_tree;
        for (const ShapeReport& one : single) per_tree.add(one.rows[r].p_empirical);
        const double slack = std::abs(row.p_model * occ.at(row.size) / limit_occupation(row.size) - row.p_model);
        const double excess = std::abs(row.p_empirical - row.p_model) / (tol::kSigmas * per_tree.stderr_mean() + slack);
        worst = std::max(worst, excess);
        ok = ok && excess <= 1.0;
    }
    detail += fmt("shape report on 1000 DTCS(100): %zu shapes, worst |dev|/(3 se + slack) = %.3f", all.rows.size(),
                  worst);
    return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"shape-probs constants", [&] { return shape_constants(cli); }},
        {"occupation DP identities", occupation_identities},
        {"occupation limit rate", occupation_limit},
        {"branchpoint law", branchpoint_law},
        {"delete-and-prune consistency", consistency},
        {"growth algorithm", growth_law},
        {"mean height and variance", heights},
        {"sum of squared block sizes", sum_of_squares_mean},
        {"limit-object moments", limit_moments},
        {"digamma roots and quadrature", special_functions},
        {"occupation density", density},
        {"dislocation and jump rates", dislocation},
        {"newick round trip, fuzz, shape report", newick},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
