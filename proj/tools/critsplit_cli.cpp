// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

// Command-line front end. Talks to the library only through critsplit.h.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "critsplit/critsplit.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;
constexpr double kSixOverPiSq = 6.0 / (std::numbers::pi * std::numbers::pi);

struct Failure : std::runtime_error {
    int code;
    Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void usage_error(const std::string& msg) { throw Failure(kExitUsage, msg); }

void check(critsplit_status s) {
    if (s == CRITSPLIT_OK) return;
    const std::string msg = std::string(critsplit_status_name(s)) + ": " + critsplit_last_error();
    const bool bad_input = s == CRITSPLIT_E_DOMAIN || s == CRITSPLIT_E_INVALID_ARGUMENT;
    throw Failure(bad_input ? kExitUsage : kExitFailure, msg);
}

template <class T, void (*Free)(T*)>
struct Freer {
    void operator()(T* p) const { Free(p); }
};
using Rng = std::unique_ptr<critsplit_rng, Freer<critsplit_rng, critsplit_rng_free>>;
using Tree = std::unique_ptr<critsplit_tree, Freer<critsplit_tree, critsplit_tree_free>>;
using Fringe = std::unique_ptr<critsplit_fringe, Freer<critsplit_fringe, critsplit_fringe_free>>;
using ShapeTable = std::unique_ptr<critsplit_shape_table, Freer<critsplit_shape_table, critsplit_shape_table_free>>;
using Newick = std::unique_ptr<critsplit_newick, Freer<critsplit_newick, critsplit_newick_free>>;
using Report = std::unique_ptr<critsplit_report, Freer<critsplit_report, critsplit_report_free>>;
using Density = std::unique_ptr<critsplit_density, Freer<critsplit_density, critsplit_density_free>>;

Rng make_rng(std::uint64_t seed, std::uint64_t index) {
    critsplit_rng* r = nullptr;
    check(critsplit_rng_new(seed, index, &r));
    return Rng(r);
}

std::string take(char* s) {
    std::string out(s);
    critsplit_string_free(s);
    return out;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json jnum(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(num(x).c_str(), nullptr);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

template <class... Fields>
std::string csv_row(const Fields&... fields) {
    std::string line;
    auto add = [&line](const std::string& f) {
        if (!line.empty()) line += ',';
        line += f;
    };
    (add(fields), ...);
    return line + '\n';
}

std::string str(std::int64_t v) { return std::to_string(v); }

// Mean and standard error accumulated in replicate order.
struct Moments {
    double sum = 0.0;
    double sumsq = 0.0;
    std::int64_t n = 0;

    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : std::nan(""); }
    double variance() const {
        if (n < 2) return std::nan("");
        const double m = mean();
        return std::max(0.0, (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    }
    double std_error() const { return std::sqrt(variance() / static_cast<double>(n)); }
};

struct Common {
    int threads = 0;
    std::string output;
    std::string format;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c, std::vector<std::string> formats, bool seeded) {
    c.format = formats.front();
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    sub->add_option("-o,--output", c.output, "Write to this file instead of stdout");
    sub->add_option("--threads", c.threads, "Worker threads (0: CRITSPLIT_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    if (seeded) sub->add_option("--seed", c.seed, "Base seed; replicate i uses stream i")->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw Failure(kExitFailure, "write to stdout failed");
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw Failure(kExitFailure, "cannot write " + c.output);
}

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

Json header(const char* command) {
    Json j;
    j["schema"] = "v1";
    j["command"] = command;
    return j;
}

// Runs fn(i) for i in [0, count) on `threads` workers. The first failure by index is rethrown.
template <class Fn>
void parallel_for(std::int64_t count, int requested, Fn fn) {
    const int threads = static_cast<int>(
        std::min<std::int64_t>(critsplit_resolve_threads(requested), std::max<std::int64_t>(count, 1)));
    std::atomic<std::int64_t> next{0};
    std::mutex mu;
    std::int64_t failed_at = count;
    std::exception_ptr failure;
    auto work = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int k = 0; k < threads; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

void require_positive(std::int64_t v, const char* flag) {
    if (v < 1) usage_error(std::string(flag) + " must be at least 1");
}

critsplit_tree_kind parse_kind(const std::string& s) { return s == "dtcs" ? CRITSPLIT_DTCS : CRITSPLIT_CTCS; }

critsplit_labels parse_labels(const std::string& s) {
    if (s == "ordered") return CRITSPLIT_LABELS_ORDERED;
    if (s == "none") return CRITSPLIT_LABELS_NONE;
    return CRITSPLIT_LABELS_UNORDERED;
}

// sample-tree

struct SampleTreeArgs {
    Common c;
    std::int64_t n = 0;
    std::string mode = "ctcs";
    std::string labels = "unordered";
    std::int64_t reps = 1;
    bool no_lengths = false;
};

void run_sample_tree(const SampleTreeArgs& a) {
    require_positive(a.n, "--n");
    require_positive(a.reps, "--reps");
    std::vector<std::string> out(static_cast<std::size_t>(a.reps));
    const bool json = a.c.format == "json";
    parallel_for(a.reps, a.c.threads, [&](std::int64_t r) {
        Rng rng = make_rng(a.c.seed, static_cast<std::uint64_t>(r));
        critsplit_tree* raw = nullptr;
        check(critsplit_tree_sample(a.n, parse_kind(a.mode), parse_labels(a.labels), rng.get(), &raw));
        Tree tree(raw);
        char* s = nullptr;
        check(json ? critsplit_tree_json(tree.get(), &s) : critsplit_tree_newick(tree.get(), !a.no_lengths, &s));
        out[static_cast<std::size_t>(r)] = take(s);
    });
    if (!json) {
        std::string text;
        for (const auto& s : out) text += s + '\n';
        emit(a.c, text);
        return;
    }
    Json j = header("sample-tree");
    j["n"] = a.n;
    j["mode"] = a.mode;
    j["labels"] = a.labels;
    j["seed"] = a.c.seed;
    j["reps"] = a.reps;
    j["trees"] = Json::array();
    for (const auto& s : out) j["trees"].push_back(Json::parse(s));
    emit(a.c, dump(j));
}

// grow

struct GrowArgs {
    Common c;
    std::int64_t n_max = 0;
    std::int64_t emit_every = 1;
    bool no_lengths = false;
};

void run_grow(const GrowArgs& a) {
    require_positive(a.n_max, "--n-max");
    require_positive(a.emit_every, "--emit-every");
    Rng rng = make_rng(a.c.seed, 0);
    critsplit_tree* raw = nullptr;
    check(critsplit_tree_new_leaf(&raw));
    Tree tree(raw);
    std::string csv = csv_row(std::string("n"), std::string("total_length"), std::string("max_height"),
                              std::string("newick"));
    Json snaps = Json::array();
    for (std::int64_t n = 1;; ++n) {
        if (n % a.emit_every == 0 || n == a.n_max) {
            double total = 0.0;
            double height = 0.0;
            char* s = nullptr;
            check(critsplit_tree_total_length(tree.get(), &total));
            check(critsplit_tree_max_height(tree.get(), &height));
            check(critsplit_tree_newick(tree.get(), !a.no_lengths, &s));
            const std::string nwk = take(s);
            csv += csv_row(str(n), num(total), num(height), quote(nwk));
            snaps.push_back({{"n", n}, {"total_length", jnum(total)}, {"max_height", jnum(height)},
                             {"newick", nwk}});
        }
        if (n == a.n_max) break;
        check(critsplit_tree_grow(tree.get(), 1, rng.get()));
    }
    if (a.c.format == "csv") {
        emit(a.c, csv);
        return;
    }
    Json j = header("grow");
    j["n_max"] = a.n_max;
    j["seed"] = a.c.seed;
    j["snapshots"] = std::move(snaps);
    emit(a.c, dump(j));
}

// occupancy

struct OccupancyArgs {
    Common c;
    std::int64_t n = 0;
    std::int64_t i_max = 0;
};

void run_occupancy(const OccupancyArgs& a) {
    require_positive(a.n, "--n");
    const std::int64_t i_max = a.i_max > 0 ? std::min(a.i_max, a.n) : a.n;
    std::vector<double> dp(static_cast<std::size_t>(a.n));
    check(critsplit_occupation_dp(a.n, dp.data(), dp.size()));
    std::string csv = "i,a,limit,difference\n";
    Json rows = Json::array();
    for (std::int64_t i = 1; i <= i_max; ++i) {
        double lim = 0.0;
        check(critsplit_limit_occupation(i, &lim));
        const double v = dp[static_cast<std::size_t>(i - 1)];
        csv += csv_row(str(i), num(v), num(lim), num(v - lim));
        rows.push_back({{"i", i}, {"a", jnum(v)}, {"limit", jnum(lim)}, {"difference", jnum(v - lim)}});
    }
    if (a.c.format == "csv") {
        emit(a.c, csv);
        return;
    }
    Json j = header("occupancy");
    j["n"] = a.n;
    j["rows"] = std::move(rows);
    emit(a.c, dump(j));
}

// heights

struct HeightsArgs {
    Common c;
    std::int64_t n_max = 0;
    bool simulate = false;
    std::int64_t n = 0;
    std::int64_t reps = 1000;
    bool per_rep = false;
};

void run_height_table(const HeightsArgs& a) {
    require_positive(a.n_max, "--n-max");
    std::vector<double> t(static_cast<std::size_t>(a.n_max));
    std::vector<double> v(static_cast<std::size_t>(a.n_max));
    check(critsplit_mean_heights(a.n_max, t.data(), t.size()));
    check(critsplit_height_variances(a.n_max, v.data(), v.size()));
    std::string csv = "n,t_n,var_n,t_n_minus_log\n";
    Json rows = Json::array();
    for (std::int64_t n = 1; n <= a.n_max; ++n) {
        const double tn = t[static_cast<std::size_t>(n - 1)];
        const double vn = v[static_cast<std::size_t>(n - 1)];
        const double centred = tn - kSixOverPiSq * std::log(static_cast<double>(n));
        csv += csv_row(str(n), num(tn), num(vn), num(centred));
        rows.push_back({{"n", n}, {"t_n", jnum(tn)}, {"var_n", jnum(vn)}, {"t_n_minus_log", jnum(centred)}});
    }
    if (a.c.format == "csv") {
        emit(a.c, csv);
        return;
    }
    Json j = header("heights");
    j["n_max"] = a.n_max;
    j["rows"] = std::move(rows);
    emit(a.c, dump(j));
}

void run_height_simulation(const HeightsArgs& a) {
    require_positive(a.n, "--n");
    require_positive(a.reps, "--reps");
    std::vector<double> height(static_cast<std::size_t>(a.reps));
    std::vector<std::int64_t> hops(static_cast<std::size_t>(a.reps));
    parallel_for(a.reps, a.c.threads, [&](std::int64_t r) {
        Rng rng = make_rng(a.c.seed, static_cast<std::uint64_t>(r));
        const auto k = static_cast<std::size_t>(r);
        check(critsplit_hd_simulate(a.n, rng.get(), &height[k], &hops[k]));
    });
    if (a.per_rep) {
        std::string csv = "rep,height,hops\n";
        Json rows = Json::array();
        for (std::size_t r = 0; r < height.size(); ++r) {
            csv += csv_row(str(static_cast<std::int64_t>(r)), num(height[r]), str(hops[r]));
            rows.push_back({{"rep", r}, {"height", jnum(height[r])}, {"hops", hops[r]}});
        }
        if (a.c.format == "csv") return emit(a.c, csv);
        Json j = header("heights");
        j["n"] = a.n;
        j["seed"] = a.c.seed;
        j["rows"] = std::move(rows);
        return emit(a.c, dump(j));
    }
    Moments d;
    Moments dsq;
    Moments l;
    for (std::size_t r = 0; r < height.size(); ++r) {
        d.add(height[r]);
        l.add(static_cast<double>(hops[r]));
    }
    const double mean = d.mean();
    for (double h : height) dsq.add((h - mean) * (h - mean));
    std::vector<double> t(static_cast<std::size_t>(a.n));
    std::vector<double> v(static_cast<std::size_t>(a.n));
    check(critsplit_mean_heights(a.n, t.data(), t.size()));
    check(critsplit_height_variances(a.n, v.data(), v.size()));
    const double nan = std::nan("");
    struct Row {
        const char* name;
        double estimate, se, exact;
    };
    const Row rows[] = {
        {"D_n_mean", mean, d.std_error(), t.back()},
        {"D_n_variance", d.variance(), dsq.std_error(), v.back()},
        {"L_n_mean", l.mean(), l.std_error(), nan},
        {"L_n_variance", l.variance(), nan, nan},
    };
    std::string csv = "quantity,estimate,std_error,exact\n";
    Json jr = Json::array();
    for (const Row& r : rows) {
        csv += csv_row(std::string(r.name), num(r.estimate), num(r.se), num(r.exact));
        jr.push_back({{"quantity", r.name}, {"estimate", jnum(r.estimate)}, {"std_error", jnum(r.se)},
                      {"exact", jnum(r.exact)}});
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("heights");
    j["n"] = a.n;
    j["reps"] = a.reps;
    j["seed"] = a.c.seed;
    j["rows"] = std::move(jr);
    emit(a.c, dump(j));
}

void run_heights(const HeightsArgs& a) {
    if (a.simulate) {
        if (a.n_max != 0) usage_error("--n-max cannot be combined with --simulate");
        run_height_simulation(a);
    } else {
        if (a.n != 0) usage_error("--n needs --simulate (use --n-max for the exact table)");
        if (a.per_rep) usage_error("--per-rep needs --simulate");
        run_height_table(a);
    }
}

// Shape table rows, grouped by size.
struct ShapeRow {
    std::string key;
    std::int64_t size;
    double prob;
    double leaf_prob;
};

std::vector<ShapeRow> shape_rows(std::int64_t n_max) {
    critsplit_shape_table* raw = nullptr;
    check(critsplit_shape_table_new(n_max, &raw));
    ShapeTable table(raw);
    std::vector<ShapeRow> rows;
    for (std::size_t k = 0; k < critsplit_shape_table_size(table.get()); ++k) {
        const char* key = nullptr;
        ShapeRow r;
        check(critsplit_shape_table_row(table.get(), k, &key, &r.size, &r.prob, &r.leaf_prob));
        r.key = key;
        rows.push_back(std::move(r));
    }
    return rows;
}

// fringe

struct FringeArgs {
    Common c;
    std::int64_t size_cap = 0;
    std::int64_t reps = 1000;
    std::int64_t shape_max = 0;
    bool samples = false;
};

void run_fringe(const FringeArgs& a) {
    require_positive(a.size_cap, "--size-cap");
    require_positive(a.reps, "--reps");
    const std::int64_t shape_max = a.shape_max > 0 ? std::min(a.shape_max, a.size_cap) : std::min<std::int64_t>(a.size_cap, 5);
    if (shape_max > 12) usage_error("--shape-max must be at most 12");
    struct Step {
        std::int64_t from, to;
        int left;
    };
    struct Sample {
        std::vector<Step> steps;
        std::vector<std::string> shapes;  // index size - 2
    };
    std::vector<Sample> out(static_cast<std::size_t>(a.reps));
    parallel_for(a.reps, a.c.threads, [&](std::int64_t r) {
        Rng rng = make_rng(a.c.seed, static_cast<std::uint64_t>(r));
        critsplit_fringe* raw = nullptr;
        check(critsplit_fringe_sample(a.size_cap, rng.get(), &raw));
        Fringe f(raw);
        Sample& s = out[static_cast<std::size_t>(r)];
        for (std::size_t k = 0; k < critsplit_fringe_steps(f.get()); ++k) {
            Step st{};
            check(critsplit_fringe_step(f.get(), k, &st.from, &st.to, &st.left));
            s.steps.push_back(st);
        }
        for (std::int64_t m = 2; m <= shape_max; ++m) {
            char* key = nullptr;
            check(critsplit_fringe_clade_shape(f.get(), m, &key));
            s.shapes.push_back(take(key));
        }
    });
    if (a.samples) {
        std::string csv = "rep,step,from,to,sibling_left\n";
        Json reps = Json::array();
        for (std::size_t r = 0; r < out.size(); ++r) {
            Json steps = Json::array();
            for (std::size_t k = 0; k < out[r].steps.size(); ++k) {
                const Step& st = out[r].steps[k];
                csv += csv_row(str(static_cast<std::int64_t>(r)), str(static_cast<std::int64_t>(k)), str(st.from),
                               str(st.to), str(st.left));
                steps.push_back({{"from", st.from}, {"to", st.to}, {"sibling_left", st.left != 0}});
            }
            reps.push_back(std::move(steps));
        }
        if (a.c.format == "csv") return emit(a.c, csv);
        Json j = header("fringe");
        j["size_cap"] = a.size_cap;
        j["seed"] = a.c.seed;
        j["samples"] = std::move(reps);
        return emit(a.c, dump(j));
    }
    const double n = static_cast<double>(a.reps);
    auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
    std::string csv = "kind,size,shape_key,estimate,std_error,model\n";
    Json rows = Json::array();
    auto add = [&](const char* kind, std::int64_t size, const std::string& key, double est, double model) {
        csv += csv_row(std::string(kind), str(size), quote(key), num(est), num(se(est)), num(model));
        rows.push_back({{"kind", kind}, {"size", size}, {"shape_key", key}, {"estimate", jnum(est)},
                        {"std_error", jnum(se(est))}, {"model", jnum(model)}});
    };
    for (std::int64_t m = 2; m <= a.size_cap; ++m) {
        std::int64_t hits = 0;
        for (const Sample& s : out) {
            hits += std::any_of(s.steps.begin(), s.steps.end(), [m](const Step& st) { return st.to == m; });
        }
        double lim = 0.0;
        check(critsplit_limit_occupation(m, &lim));
        add("visit", m, "*", static_cast<double>(hits) / n, lim);
    }
    if (shape_max >= 2) {
        for (const ShapeRow& row : shape_rows(shape_max)) {
            std::int64_t hits = 0;
            for (const Sample& s : out) hits += s.shapes[static_cast<std::size_t>(row.size - 2)] == row.key;
            add("shape", row.size, row.key, static_cast<double>(hits) / n, row.leaf_prob);
        }
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("fringe");
    j["size_cap"] = a.size_cap;
    j["reps"] = a.reps;
    j["seed"] = a.c.seed;
    j["rows"] = std::move(rows);
    emit(a.c, dump(j));
}

// shape-probs

struct ShapeProbsArgs {
    Common c;
    std::int64_t n_max = 6;
};

void run_shape_probs(const ShapeProbsArgs& a) {
    if (a.n_max < 2 || a.n_max > 12) usage_error("--n-max must be in 2..12");
    std::string csv = "size,shape_key,p_shape,p_leaf\n";
    Json rows = Json::array();
    for (const ShapeRow& r : shape_rows(a.n_max)) {
        csv += csv_row(str(r.size), quote(r.key), num(r.prob), num(r.leaf_prob));
        rows.push_back({{"size", r.size}, {"shape_key", r.key}, {"p_shape", jnum(r.prob)},
                        {"p_leaf", jnum(r.leaf_prob)}});
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("shape-probs");
    j["n_max"] = a.n_max;
    j["rows"] = std::move(rows);
    emit(a.c, dump(j));
}

// partition

struct PartitionArgs {
    Common c;
    std::int64_t n = 0;
    std::vector<double> t{1.0};
    std::int64_t reps = 1000;
    int k_max = 3;
};

void run_partition(const PartitionArgs& a) {
    require_positive(a.n, "--n");
    require_positive(a.reps, "--reps");
    if (a.k_max < 1 || a.k_max > 20) usage_error("--k-max must be in 1..20");
    for (double t : a.t) {
        if (!(t >= 0.0) || !std::isfinite(t)) usage_error("--t must be finite and >= 0");
    }
    const std::size_t nt = a.t.size();
    std::vector<std::int64_t> block(static_cast<std::size_t>(a.reps) * nt);
    std::vector<std::int64_t> blocks(static_cast<std::size_t>(a.reps) * nt);
    parallel_for(a.reps, a.c.threads, [&](std::int64_t r) {
        Rng rng = make_rng(a.c.seed, static_cast<std::uint64_t>(r));
        critsplit_tree* raw = nullptr;
        check(critsplit_tree_sample(a.n, CRITSPLIT_CTCS, CRITSPLIT_LABELS_UNORDERED, rng.get(), &raw));
        Tree tree(raw);
        for (std::size_t q = 0; q < nt; ++q) {
            const std::size_t k = static_cast<std::size_t>(r) * nt + q;
            std::size_t count = 0;
            check(critsplit_tree_block_size(tree.get(), 1, a.t[q], &block[k]));
            check(critsplit_tree_level_cut(tree.get(), a.t[q], nullptr, 0, &count));
            blocks[k] = static_cast<std::int64_t>(count);
        }
    });
    std::string csv = "t,k,moment_hat,std_error,moment_exact_n,moment_limit\n";
    Json rows = Json::array();
    Json counts = Json::array();
    for (std::size_t q = 0; q < nt; ++q) {
        const double t = a.t[q];
        for (int k = 1; k <= a.k_max; ++k) {
            Moments m;
            for (std::int64_t r = 0; r < a.reps; ++r) {
                const double x = static_cast<double>(block[static_cast<std::size_t>(r) * nt + q]) /
                                 static_cast<double>(a.n);
                m.add(std::pow(x, k));
            }
            double exact = 0.0;
            double h = 0.0;
            check(critsplit_first_block_moment(a.n, k, t, &exact));
            check(critsplit_harmonic(k, &h));
            const double lim = std::exp(-h * t);
            csv += csv_row(num(t), std::to_string(k), num(m.mean()), num(m.std_error()), num(exact), num(lim));
            rows.push_back({{"t", jnum(t)}, {"k", k}, {"moment_hat", jnum(m.mean())},
                            {"std_error", jnum(m.std_error())}, {"moment_exact_n", jnum(exact)},
                            {"moment_limit", jnum(lim)}});
        }
        Moments c;
        for (std::int64_t r = 0; r < a.reps; ++r) c.add(static_cast<double>(blocks[static_cast<std::size_t>(r) * nt + q]));
        counts.push_back({{"t", jnum(t)}, {"mean_blocks", jnum(c.mean())}, {"std_error", jnum(c.std_error())}});
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("partition");
    j["n"] = a.n;
    j["reps"] = a.reps;
    j["seed"] = a.c.seed;
    j["moments"] = std::move(rows);
    j["block_counts"] = std::move(counts);
    emit(a.c, dump(j));
}

// subordinator

struct SubordinatorArgs {
    Common c;
    double t_max = 1.0;
    double eps = 1e-6;
    std::int64_t reps = 1000;
    int grid = 4;
    int k_max = 3;
    bool paths = false;
};

void run_subordinator(const SubordinatorArgs& a) {
    require_positive(a.reps, "--reps");
    if (!(a.t_max > 0.0) || !std::isfinite(a.t_max)) usage_error("--t-max must be positive");
    if (a.grid < 1) usage_error("--grid must be at least 1");
    if (a.k_max < 1 || a.k_max > 20) usage_error("--k-max must be in 1..20");
    const auto g = static_cast<std::size_t>(a.grid);
    std::vector<double> times(g);
    for (std::size_t q = 0; q < g; ++q) times[q] = a.t_max * static_cast<double>(q + 1) / static_cast<double>(g);
    times.back() = a.t_max;
    std::vector<double> y(static_cast<std::size_t>(a.reps) * g);
    parallel_for(a.reps, a.c.threads, [&](std::int64_t r) {
        Rng rng = make_rng(a.c.seed, static_cast<std::uint64_t>(r));
        check(critsplit_subordinator_path(a.t_max, a.eps, rng.get(), times.data(), g,
                                          y.data() + static_cast<std::size_t>(r) * g));
    });
    if (a.paths) {
        std::string csv = "rep,t,y\n";
        Json reps = Json::array();
        for (std::int64_t r = 0; r < a.reps; ++r) {
            Json path = Json::array();
            for (std::size_t q = 0; q < g; ++q) {
                const double v = y[static_cast<std::size_t>(r) * g + q];
                csv += csv_row(str(r), num(times[q]), num(v));
                path.push_back({{"t", jnum(times[q])}, {"y", jnum(v)}});
            }
            reps.push_back(std::move(path));
        }
        if (a.c.format == "csv") return emit(a.c, csv);
        Json j = header("subordinator");
        j["eps"] = jnum(a.eps);
        j["seed"] = a.c.seed;
        j["paths"] = std::move(reps);
        return emit(a.c, dump(j));
    }
    std::string csv = "t,statistic,estimate,std_error,exact,bias_bound\n";
    Json rows = Json::array();
    auto add = [&](double t, const std::string& stat, const Moments& m, double exact, double bias) {
        csv += csv_row(num(t), stat, num(m.mean()), num(m.std_error()), num(exact), num(bias));
        rows.push_back({{"t", jnum(t)}, {"statistic", stat}, {"estimate", jnum(m.mean())},
                        {"std_error", jnum(m.std_error())}, {"exact", jnum(exact)}, {"bias_bound", jnum(bias)}});
    };
    for (std::size_t q = 0; q < g; ++q) {
        const double t = times[q];
        for (int k = 1; k <= a.k_max; ++k) {
            Moments m;
            for (std::int64_t r = 0; r < a.reps; ++r) m.add(std::exp(-k * y[static_cast<std::size_t>(r) * g + q]));
            double h = 0.0;
            double bias = 0.0;
            check(critsplit_harmonic(k, &h));
            check(critsplit_truncation_bias(k, t, a.eps, &bias));
            add(t, "moment_" + std::to_string(k), m, std::exp(-h * t), bias);
        }
        Moments ratio;
        for (std::int64_t r = 0; r < a.reps; ++r) ratio.add(y[static_cast<std::size_t>(r) * g + q] / t);
        add(t, "y_over_t", ratio, std::numbers::pi * std::numbers::pi / 6.0, 0.0);
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("subordinator");
    j["t_max"] = jnum(a.t_max);
    j["eps"] = jnum(a.eps);
    j["reps"] = a.reps;
    j["seed"] = a.c.seed;
    j["rows"] = std::move(rows);
    emit(a.c, dump(j));
}

// roots

struct RootsArgs {
    Common c;
    int count = 5;
};

void run_roots(const RootsArgs& a) {
    if (a.count < 1 || a.count > 10000) usage_error("--count must be in 1..10000");
    std::vector<double> s(static_cast<std::size_t>(a.count) + 1);
    std::vector<double> res(s.size());
    check(critsplit_find_roots(a.count, s.data(), res.data()));
    std::string csv = "i,s,residue\n";
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        csv += csv_row(str(static_cast<std::int64_t>(i)), num(s[i]), num(res[i]));
        rows.push_back({{"i", i}, {"s", jnum(s[i])}, {"residue", jnum(res[i])}});
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json j = header("roots");
    j["count"] = a.count;
    j["roots"] = std::move(rows);
    emit(a.c, dump(j));
}

// density

struct DensityArgs {
    Common c;
    critsplit_density_options o{};
};

void run_density(DensityArgs& a) {
    a.o.seed = a.c.seed;
    a.o.threads = a.c.threads;
    critsplit_density* raw = nullptr;
    check(critsplit_density_estimate(&a.o, &raw));
    Density d(raw);
    double s1[2];
    double r1[2];
    check(critsplit_find_roots(1, s1, r1));
    std::string csv = "x,u_hat,stderr,u_leading,residual_scaled\n";
    Json rows = Json::array();
    for (std::size_t b = 0; b < critsplit_density_bins(d.get()); ++b) {
        double lo = 0.0, hi = 0.0, x = 0.0, u = 0.0, se = 0.0;
        check(critsplit_density_bin(d.get(), b, &lo, &hi, &x, &u, &se));
        const double lead = kSixOverPiSq / x;
        const double resid = (u - lead) * std::pow(x, s1[1]);
        csv += csv_row(num(x), num(u), num(se), num(lead), num(resid));
        rows.push_back({{"x", jnum(x)}, {"x_lo", jnum(lo)}, {"x_hi", jnum(hi)}, {"u_hat", jnum(u)},
                        {"stderr", jnum(se)}, {"u_leading", jnum(lead)}, {"residual_scaled", jnum(resid)}});
    }
    std::int64_t truncated = 0;
    std::int64_t reps = 0;
    check(critsplit_density_truncated(d.get(), &truncated, &reps));
    if (truncated > 0) {
        std::cerr << "warning: " << truncated << " of " << reps << " paths did not leave the grid by --t-max\n";
    }
    if (a.c.format == "csv") return emit(a.c, csv);
    Json mellin = Json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0, est = 0.0, se = 0.0;
        check(critsplit_density_mellin(d.get(), k, &s, &est, &se));
        double exact = 0.0;
        check(critsplit_digamma_difference_integral(s, &exact));
        double psi_s = 0.0, psi_1 = 0.0, im = 0.0;
        check(critsplit_digamma(s, 0.0, &psi_s, &im));
        check(critsplit_digamma(1.0, 0.0, &psi_1, &im));
        mellin.push_back({{"s", jnum(s)}, {"estimate", jnum(est)}, {"std_error", jnum(se)},
                          {"exact", jnum(1.0 / (psi_s - psi_1))}});
    }
    Json j = header("density");
    j["reps"] = a.o.reps;
    j["seed"] = a.o.seed;
    j["eps"] = jnum(a.o.eps);
    j["t_max"] = jnum(a.o.t_max);
    j["truncated"] = truncated;
    j["s1"] = jnum(s1[1]);
    j["r1"] = jnum(r1[1]);
    j["bins"] = std::move(rows);
    j["mellin"] = std::move(mellin);
    emit(a.c, dump(j));
}

// compare-newick

struct CompareArgs {
    Common c;
    std::vector<std::string> inputs;
    std::int64_t max_size = 4;
    std::string policy = "strict";
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Failure(kExitUsage, "cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

void run_compare(const CompareArgs& a) {
    if (std::count(a.inputs.begin(), a.inputs.end(), "-") > 1) usage_error("stdin ('-') may be given once");
    if (a.max_size < 2) usage_error("--max-size must be at least 2");
    std::vector<std::string> texts;
    for (const std::string& path : a.inputs) texts.push_back(read_all(path));
    std::vector<Newick> docs(a.inputs.size());
    parallel_for(static_cast<std::int64_t>(a.inputs.size()), a.c.threads, [&](std::int64_t k) {
        const auto i = static_cast<std::size_t>(k);
        const std::string source = a.inputs[i] == "-" ? "<stdin>" : a.inputs[i];
        critsplit_newick* raw = nullptr;
        check(critsplit_newick_parse(texts[i].data(), texts[i].size(), source.c_str(), &raw));
        docs[i] = Newick(raw);
    });
    std::size_t errors = 0;
    for (const Newick& d : docs) {
        for (std::size_t e = 0; e < critsplit_newick_error_count(d.get()); ++e) {
            char* msg = nullptr;
            check(critsplit_newick_error(d.get(), e, &msg));
            std::cerr << "error: " << take(msg) << '\n';
            ++errors;
        }
    }
    if (errors > 0) throw Failure(kExitFailure, std::to_string(errors) + " malformed tree(s)");
    std::vector<const critsplit_newick*> ptrs;
    for (const Newick& d : docs) ptrs.push_back(d.get());
    const critsplit_policy policy = a.policy == "skip"      ? CRITSPLIT_POLICY_SKIP
                                    : a.policy == "resolve" ? CRITSPLIT_POLICY_RESOLVE
                                                            : CRITSPLIT_POLICY_STRICT;
    critsplit_report* raw = nullptr;
    check(critsplit_shape_report(ptrs.data(), ptrs.size(), a.max_size, policy, a.c.seed, &raw));
    Report report(raw);
    char* s = nullptr;
    check(a.c.format == "csv" ? critsplit_report_csv(report.get(), &s) : critsplit_report_json(report.get(), &s));
    std::string text = take(s);
    if (text.empty() || text.back() != '\n') text += '\n';
    emit(a.c, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critsplit: the critical beta-splitting random tree"};
    app.require_subcommand(1);
    app.set_version_flag("--version", critsplit_version());
    app.footer("Exit codes: 0 success, 2 usage error, 3 numeric or validation failure.\n"
               "CRITSPLIT_THREADS sets the default worker count. Output does not depend on it.\n"
               "Floats are printed with 12 significant digits; JSON carries \"schema\": \"v1\".");

    SampleTreeArgs st;
    auto* sub = app.add_subcommand("sample-tree", "Sample CTCS(n) or DTCS(n) trees");
    sub->add_option("--n", st.n, "Leaves")->required();
    sub->add_option("--mode", st.mode, "Time model")->check(CLI::IsMember({"ctcs", "dtcs"}))->capture_default_str();
    sub->add_option("--labels", st.labels, "Leaf labels")
        ->check(CLI::IsMember({"unordered", "ordered", "none"}))
        ->capture_default_str();
    sub->add_option("--reps", st.reps, "Trees")->capture_default_str();
    sub->add_flag("--no-lengths", st.no_lengths, "Omit Newick branch lengths");
    add_common(sub, st.c, {"newick", "json"}, true);
    sub->footer("newick: one tree per line. json: {schema, trees: [{n_leaves, nodes: [{id, parent, "
                "birth_height, label}]}]}.");
    sub->callback([&] { run_sample_tree(st); });

    GrowArgs gr;
    sub = app.add_subcommand("grow", "Grow one tree leaf by leaf and emit snapshots");
    sub->add_option("--n-max", gr.n_max, "Final leaf count")->required();
    sub->add_option("--emit-every", gr.emit_every, "Snapshot every k leaves (and at --n-max)")->capture_default_str();
    sub->add_flag("--no-lengths", gr.no_lengths, "Omit Newick branch lengths");
    add_common(sub, gr.c, {"csv", "json"}, true);
    sub->footer("CSV columns: n, total_length, max_height, newick (quoted).");
    sub->callback([&] { run_grow(gr); });

    OccupancyArgs oc;
    sub = app.add_subcommand("occupancy", "Exact occupation probabilities a(n,i) and their limit");
    sub->add_option("--n", oc.n, "Leaves")->required();
    sub->add_option("--i-max", oc.i_max, "Last row (default n)");
    add_common(sub, oc.c, {"csv", "json"}, false);
    sub->footer("CSV columns: i, a (exact a(n,i)), limit (6 h_{i-1} / (pi^2 (i-1))), difference.");
    sub->callback([&] { run_occupancy(oc); });

    HeightsArgs he;
    sub = app.add_subcommand("heights", "Leaf heights: exact t_n table or simulated D_n, L_n");
    sub->add_option("--n-max", he.n_max, "Table of t_n and var D_n for n = 1..n-max");
    sub->add_flag("--simulate", he.simulate, "Simulate the descent chain instead");
    sub->add_option("--n", he.n, "Leaves (with --simulate)");
    sub->add_option("--reps", he.reps, "Replicates (with --simulate)")->capture_default_str();
    sub->add_flag("--per-rep", he.per_rep, "One row per replicate (with --simulate)");
    add_common(sub, he.c, {"csv", "json"}, true);
    sub->footer("CSV columns, table: n, t_n, var_n, t_n_minus_log (t_n - 6 ln(n) / pi^2).\n"
                "--simulate: quantity, estimate, std_error, exact (quantities D_n_mean, D_n_variance, "
                "L_n_mean, L_n_variance).\n--simulate --per-rep: rep, height, hops.");
    sub->callback([&] { run_heights(he); });

    FringeArgs fr;
    sub = app.add_subcommand("fringe", "Sample the fringe chain above a typical leaf");
    sub->add_option("--size-cap", fr.size_cap, "Stop before the first clade larger than this")->required();
    sub->add_option("--reps", fr.reps, "Replicates")->capture_default_str();
    sub->add_option("--shape-max", fr.shape_max, "Largest clade size whose shape is tallied (default min(cap, 5))");
    sub->add_flag("--samples", fr.samples, "Dump raw chain steps instead of the summary");
    add_common(sub, fr.c, {"csv", "json"}, true);
    sub->footer("CSV columns: kind (visit|shape), size, shape_key, estimate, std_error, model.\n"
                "visit rows compare the visit frequency with a(i); shape rows compare with p_leaf.\n"
                "--samples: rep, step, from, to, sibling_left.");
    sub->callback([&] { run_fringe(fr); });

    ShapeProbsArgs sp;
    sub = app.add_subcommand("shape-probs", "Exact clade shape probabilities");
    sub->add_option("--n-max", sp.n_max, "Largest clade size (2..12)")->capture_default_str();
    add_common(sub, sp.c, {"csv", "json"}, false);
    sub->footer("CSV columns: size, shape_key, p_shape (shape law of DTCS(size)), p_leaf (probability that a "
                "typical leaf sits in a clade of this shape).");
    sub->callback([&] { run_shape_probs(sp); });

    PartitionArgs pa;
    sub = app.add_subcommand("partition", "Level-cut block of leaf 1 in CTCS(n): moment checks");
    sub->add_option("--n", pa.n, "Leaves")->required();
    sub->add_option("--t", pa.t, "Cut heights (repeatable)")->capture_default_str();
    sub->add_option("--reps", pa.reps, "Replicates")->capture_default_str();
    sub->add_option("--k-max", pa.k_max, "Highest moment")->capture_default_str();
    add_common(sub, pa.c, {"csv", "json"}, true);
    sub->footer("CSV columns: t, k, moment_hat (mean of (X/n)^k), std_error, moment_exact_n, "
                "moment_limit (exp(-h_k t)).");
    sub->callback([&] { run_partition(pa); });

    SubordinatorArgs su;
    sub = app.add_subcommand("subordinator", "Simulate the limit subordinator Y");
    sub->add_option("--t-max", su.t_max, "Horizon")->capture_default_str();
    sub->add_option("--eps", su.eps, "Small-jump cutoff")->capture_default_str();
    sub->add_option("--reps", su.reps, "Paths")->capture_default_str();
    sub->add_option("--grid", su.grid, "Evaluation times t-max * j / grid, j = 1..grid")->capture_default_str();
    sub->add_option("--k-max", su.k_max, "Highest moment")->capture_default_str();
    sub->add_flag("--paths", su.paths, "Dump path values instead of the summary");
    add_common(sub, su.c, {"csv", "json"}, true);
    sub->footer("CSV columns: t, statistic (moment_k = E exp(-k Y_t), or y_over_t), estimate, std_error, "
                "exact, bias_bound.\n--paths: rep, t, y.");
    sub->callback([&] { run_subordinator(su); });

    RootsArgs ro;
    sub = app.add_subcommand("roots", "Roots of psi(s) = psi(1) on the negative axis and their residues");
    sub->add_option("--count", ro.count, "Negative roots")->capture_default_str();
    add_common(sub, ro.c, {"csv", "json"}, false);
    sub->footer("CSV columns: i, s, residue (1 / psi'(s)); row 0 is s = 1.");
    sub->callback([&] { run_roots(ro); });

    DensityArgs de;
    critsplit_density_options_init(&de.o);
    sub = app.add_subcommand("density", "Monte-Carlo occupation density u(x) of the limit chain");
    sub->add_option("--reps", de.o.reps, "Paths")->capture_default_str();
    sub->add_option("--bins", de.o.bins, "Log-spaced bins on [x-min, 1]")->capture_default_str();
    sub->add_option("--x-min", de.o.x_min, "Left end of the grid")->capture_default_str();
    sub->add_option("--t-max", de.o.t_max, "Time horizon per path")->capture_default_str();
    sub->add_option("--eps", de.o.eps, "Small-jump cutoff")->capture_default_str();
    add_common(sub, de.c, {"csv", "json"}, true);
    sub->footer("CSV columns: x (bin midpoint), u_hat, stderr, u_leading (6 / (pi^2 x)), residual_scaled "
                "((u_hat - u_leading) x^s1). JSON adds the Mellin checks.");
    sub->callback([&] { run_density(de); });

    CompareArgs cm;
    sub = app.add_subcommand("compare-newick", "Shape report of Newick trees against the model");
    sub->add_option("--input", cm.inputs, "Newick files; '-' reads stdin")->required();
    sub->add_option("--max-size", cm.max_size, "Largest clade size tallied")->capture_default_str();
    sub->add_option("--policy", cm.policy, "Polytomy handling")
        ->check(CLI::IsMember({"strict", "skip", "resolve"}))
        ->capture_default_str();
    add_common(sub, cm.c, {"csv", "json"}, true);
    sub->footer("CSV columns: shape_key, size, p_model, p_empirical, n_leaves_in_shape, total_leaves.\n"
                "--seed drives the resolve policy only.");
    sub->callback([&] { run_compare(cm); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const Failure& f) {
        std::cerr << "critsplit: " << f.what() << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "critsplit: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
