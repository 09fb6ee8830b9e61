// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/critsplit.h"

#include <complex>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "critsplit/fringe.hpp"
#include "critsplit/hd_chain.hpp"
#include "critsplit/newick_io.hpp"
#include "critsplit/parallel.hpp"
#include "critsplit/partition_limit.hpp"
#include "critsplit/shape.hpp"
#include "critsplit/special_functions.hpp"
#include "critsplit/tree_stats.hpp"

struct critsplit_rng {
    critsplit::Rng rng;
};

struct critsplit_tree {
    critsplit::CladeTree tree;
};

struct critsplit_fringe {
    critsplit::FringeSample sample;
};

struct critsplit_shape_table {
    struct Row {
        std::string shape;
        std::int64_t size;
        double prob;
        double leaf_prob;
    };
    std::vector<Row> rows;
};

struct critsplit_newick {
    critsplit::NewickDocument doc;
};

struct critsplit_report {
    critsplit::ShapeReport report;
};

struct critsplit_density {
    critsplit::DensityEstimate est;
};

namespace {

thread_local std::string g_last_error;

critsplit_status fail(critsplit_status s, const std::string& message) {
    g_last_error = message;
    return s;
}

template <class Fn>
critsplit_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CRITSPLIT_OK;
    } catch (const critsplit::DomainError& e) {
        return fail(CRITSPLIT_E_DOMAIN, e.what());
    } catch (const critsplit::NotFoundError& e) {
        return fail(CRITSPLIT_E_NOT_FOUND, e.what());
    } catch (const critsplit::ContractError& e) {
        return fail(CRITSPLIT_E_CONTRACT, e.what());
    } catch (const critsplit::ParseError& e) {
        return fail(CRITSPLIT_E_PARSE, e.what());
    } catch (const critsplit::ValidationError& e) {
        return fail(CRITSPLIT_E_VALIDATION, e.what());
    } catch (const critsplit::NumericError& e) {
        return fail(CRITSPLIT_E_NUMERIC, e.what());
    } catch (const critsplit::ResourceError& e) {
        return fail(CRITSPLIT_E_RESOURCE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CRITSPLIT_E_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(CRITSPLIT_E_INTERNAL, e.what());
    } catch (...) {
        return fail(CRITSPLIT_E_INTERNAL, "unknown error");
    }
}

#define CRITSPLIT_REQUIRE(cond)                                                         \
    do {                                                                                \
        if (!(cond)) return fail(CRITSPLIT_E_INVALID_ARGUMENT, "null argument: " #cond); \
    } while (0)

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

critsplit::LabelMode to_mode(critsplit_labels labels) {
    switch (labels) {
        case CRITSPLIT_LABELS_ORDERED: return critsplit::LabelMode::ordered;
        case CRITSPLIT_LABELS_UNORDERED: return critsplit::LabelMode::unordered;
        case CRITSPLIT_LABELS_NONE: return critsplit::LabelMode::unlabelled;
    }
    throw critsplit::DomainError("unknown label mode");
}

critsplit_status fill(const std::vector<double>& values, std::size_t first, double* out, std::size_t capacity) {
    const std::size_t need = values.size() - first;
    if (capacity < need) {
        return fail(CRITSPLIT_E_BUFFER_TOO_SMALL, "need " + std::to_string(need) + " entries");
    }
    std::copy(values.begin() + static_cast<std::ptrdiff_t>(first), values.end(), out);
    return CRITSPLIT_OK;
}

}  // namespace

extern "C" {

const char* critsplit_version(void) { return "0.1.0"; }

const char* critsplit_last_error(void) { return g_last_error.c_str(); }

const char* critsplit_status_name(critsplit_status status) {
    switch (status) {
        case CRITSPLIT_OK: return "ok";
        case CRITSPLIT_E_INVALID_ARGUMENT: return "invalid argument";
        case CRITSPLIT_E_DOMAIN: return "domain error";
        case CRITSPLIT_E_NOT_FOUND: return "not found";
        case CRITSPLIT_E_CONTRACT: return "contract violation";
        case CRITSPLIT_E_PARSE: return "parse error";
        case CRITSPLIT_E_VALIDATION: return "validation error";
        case CRITSPLIT_E_NUMERIC: return "numeric error";
        case CRITSPLIT_E_RESOURCE: return "resource error";
        case CRITSPLIT_E_BUFFER_TOO_SMALL: return "buffer too small";
        case CRITSPLIT_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void critsplit_string_free(char* s) { std::free(s); }

int critsplit_resolve_threads(int requested) { return critsplit::resolve_threads(requested); }

critsplit_status critsplit_rng_new(uint64_t seed, uint64_t index, critsplit_rng** out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = new critsplit_rng{critsplit::Rng(seed, index)}; });
}

void critsplit_rng_free(critsplit_rng* rng) { delete rng; }

critsplit_status critsplit_harmonic(int64_t m, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::harmonic(m); });
}

critsplit_status critsplit_split_prob(int64_t m, int64_t i, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::split_prob(m, i); });
}

critsplit_status critsplit_limit_occupation(int64_t i, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::limit_occupation(i); });
}

critsplit_status critsplit_tree_sample(int64_t n, critsplit_tree_kind kind, critsplit_labels labels, critsplit_rng* rng,
                                       critsplit_tree** out) {
    CRITSPLIT_REQUIRE(rng && out);
    return guarded([&] {
        const critsplit::LabelMode mode = to_mode(labels);
        auto t = kind == CRITSPLIT_DTCS ? critsplit::sample_dtcs(n, mode, rng->rng)
                                        : critsplit::sample_ctcs(n, mode, rng->rng);
        *out = new critsplit_tree{std::move(t)};
    });
}

critsplit_status critsplit_tree_new_leaf(critsplit_tree** out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = new critsplit_tree{critsplit::CladeTree::single_leaf()}; });
}

critsplit_status critsplit_tree_grow(critsplit_tree* tree, int64_t steps, critsplit_rng* rng) {
    CRITSPLIT_REQUIRE(tree && rng);
    return guarded([&] {
        if (steps < 0) throw critsplit::DomainError("grow: need steps >= 0");
        tree->tree.reserve_leaves(tree->tree.leaf_count() + steps);
        for (int64_t k = 0; k < steps; ++k) critsplit::grow_step(tree->tree, rng->rng);
    });
}

critsplit_status critsplit_tree_delete_leaf(critsplit_tree* tree, int64_t label) {
    CRITSPLIT_REQUIRE(tree);
    return guarded([&] { critsplit::delete_and_prune(tree->tree, label); });
}

critsplit_status critsplit_tree_leaf_count(const critsplit_tree* tree, int64_t* out) {
    CRITSPLIT_REQUIRE(tree && out);
    *out = tree->tree.leaf_count();
    return CRITSPLIT_OK;
}

critsplit_status critsplit_tree_total_length(const critsplit_tree* tree, double* out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = tree->tree.total_edge_length(); });
}

critsplit_status critsplit_tree_max_height(const critsplit_tree* tree, double* out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = critsplit::max_height(tree->tree); });
}

critsplit_status critsplit_tree_leaf_height(const critsplit_tree* tree, int64_t label, double* height, int64_t* hops) {
    CRITSPLIT_REQUIRE(tree && height && hops);
    return guarded([&] {
        const auto h = critsplit::leaf_height(tree->tree, label);
        *height = h.height;
        *hops = h.hops;
    });
}

critsplit_status critsplit_tree_branchpoint(const critsplit_tree* tree, int64_t label1, int64_t label2, double* out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = critsplit::branchpoint_height(tree->tree, label1, label2); });
}

critsplit_status critsplit_tree_level_cut(const critsplit_tree* tree, double t, int64_t* sizes, size_t capacity,
                                          size_t* count) {
    CRITSPLIT_REQUIRE(tree && count && (sizes || capacity == 0));
    std::vector<std::int64_t> s;
    const critsplit_status st = guarded([&] {
        if (tree->tree.label_mode() == critsplit::LabelMode::unlabelled) {
            s = critsplit::level_cut_sizes(tree->tree, t);
        } else {
            s = critsplit::level_cut(tree->tree, t).sizes();
        }
    });
    if (st != CRITSPLIT_OK) return st;
    *count = s.size();
    if (capacity < s.size()) {
        if (capacity == 0) return CRITSPLIT_OK;
        return fail(CRITSPLIT_E_BUFFER_TOO_SMALL, "need " + std::to_string(s.size()) + " entries");
    }
    std::copy(s.begin(), s.end(), sizes);
    return CRITSPLIT_OK;
}

critsplit_status critsplit_tree_block_size(const critsplit_tree* tree, int64_t label, double t, int64_t* out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = tree->tree.node(critsplit::block_of(tree->tree, label, t)).n_leaves; });
}

critsplit_status critsplit_tree_newick(const critsplit_tree* tree, int with_lengths, char** out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = dup_string(critsplit::to_newick(tree->tree, with_lengths != 0)); });
}

critsplit_status critsplit_tree_json(const critsplit_tree* tree, char** out) {
    CRITSPLIT_REQUIRE(tree && out);
    return guarded([&] { *out = dup_string(tree->tree.to_json()); });
}

void critsplit_tree_free(critsplit_tree* tree) { delete tree; }

critsplit_status critsplit_occupation_dp(int64_t n, double* a, size_t capacity) {
    CRITSPLIT_REQUIRE(a);
    critsplit::OccupationTable table;
    const critsplit_status st = guarded([&] { table = critsplit::occupation_dp(n); });
    if (st != CRITSPLIT_OK) return st;
    return fill(table.a, 1, a, capacity);
}

critsplit_status critsplit_mean_heights(int64_t n_max, double* t, size_t capacity) {
    CRITSPLIT_REQUIRE(t);
    std::vector<double> v;
    const critsplit_status st = guarded([&] { v = critsplit::mean_height_recursion(n_max); });
    if (st != CRITSPLIT_OK) return st;
    return fill(v, 1, t, capacity);
}

critsplit_status critsplit_height_variances(int64_t n_max, double* out, size_t capacity) {
    CRITSPLIT_REQUIRE(out);
    std::vector<double> v;
    const critsplit_status st = guarded([&] { v = critsplit::height_variance_recursion(n_max); });
    if (st != CRITSPLIT_OK) return st;
    return fill(v, 1, out, capacity);
}

critsplit_status critsplit_hd_simulate(int64_t n, critsplit_rng* rng, double* height, int64_t* hops) {
    CRITSPLIT_REQUIRE(rng && height && hops);
    return guarded([&] {
        const auto s = critsplit::simulate_hd_summary(n, rng->rng);
        *height = s.height;
        *hops = s.hops;
    });
}

critsplit_status critsplit_shape_table_new(int64_t n_max, critsplit_shape_table** out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] {
        if (n_max < 2) throw critsplit::DomainError("shape table: need n_max >= 2");
        auto table = std::make_unique<critsplit_shape_table>();
        critsplit::ShapeInterner& shapes = critsplit::ShapeInterner::global();
        for (int64_t m = 2; m <= n_max; ++m) {
            for (const auto& [id, p] : critsplit::shape_distribution(m).probs) {
                table->rows.push_back({shapes.to_string(id), m, p, critsplit::leaf_in_shape_prob(id)});
            }
        }
        *out = table.release();
    });
}

size_t critsplit_shape_table_size(const critsplit_shape_table* table) { return table ? table->rows.size() : 0; }

critsplit_status critsplit_shape_table_row(const critsplit_shape_table* table, size_t row, const char** shape,
                                           int64_t* size, double* prob, double* leaf_prob) {
    CRITSPLIT_REQUIRE(table && shape && size && prob && leaf_prob);
    if (row >= table->rows.size()) return fail(CRITSPLIT_E_NOT_FOUND, "row out of range");
    const auto& r = table->rows[row];
    *shape = r.shape.c_str();
    *size = r.size;
    *prob = r.prob;
    *leaf_prob = r.leaf_prob;
    return CRITSPLIT_OK;
}

void critsplit_shape_table_free(critsplit_shape_table* table) { delete table; }

critsplit_status critsplit_fringe_sample(int64_t size_cap, critsplit_rng* rng, critsplit_fringe** out) {
    CRITSPLIT_REQUIRE(rng && out);
    return guarded([&] { *out = new critsplit_fringe{critsplit::sample_fringe(size_cap, rng->rng)}; });
}

size_t critsplit_fringe_steps(const critsplit_fringe* f) { return f ? f->sample.steps.size() : 0; }

critsplit_status critsplit_fringe_step(const critsplit_fringe* f, size_t step, int64_t* from, int64_t* to,
                                       int* sibling_left) {
    CRITSPLIT_REQUIRE(f && from && to && sibling_left);
    if (step >= f->sample.steps.size()) return fail(CRITSPLIT_E_NOT_FOUND, "step out of range");
    const auto& s = f->sample.steps[step];
    *from = s.from;
    *to = s.to;
    *sibling_left = s.sibling_left ? 1 : 0;
    return CRITSPLIT_OK;
}

critsplit_status critsplit_fringe_clade_shape(const critsplit_fringe* f, int64_t size, char** out) {
    CRITSPLIT_REQUIRE(f && out);
    return guarded([&] {
        critsplit::ShapeInterner& shapes = critsplit::ShapeInterner::global();
        const critsplit::ShapeId id = f->sample.clade_shape(size, shapes);
        *out = dup_string(id == critsplit::kNoShape ? std::string() : shapes.to_string(id));
    });
}

void critsplit_fringe_free(critsplit_fringe* f) { delete f; }

critsplit_status critsplit_first_block_moment(int64_t n, int k, double t, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::first_block_moment_exact(n, k, t); });
}

critsplit_status critsplit_moment_law(double s_re, double s_im, double t, double* re, double* im) {
    CRITSPLIT_REQUIRE(re && im);
    return guarded([&] {
        const auto v = critsplit::moment_law({s_re, s_im}, t);
        *re = v.real();
        *im = v.imag();
    });
}

critsplit_status critsplit_jump_rate(int64_t n, int64_t i, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::jump_rate_by_size(n, i); });
}

critsplit_status critsplit_dislocation_check(int64_t n, int64_t i, double* lhs, double* rhs) {
    CRITSPLIT_REQUIRE(lhs && rhs);
    return guarded([&] {
        const auto [l, r] = critsplit::dislocation_check(n, i);
        *lhs = l;
        *rhs = r;
    });
}

critsplit_status critsplit_small_jump_drift(double eps, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::small_jump_drift(eps); });
}

critsplit_status critsplit_truncation_bias(int k, double t, double eps, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::truncation_bias(k, t, eps); });
}

critsplit_status critsplit_subordinator_path(double t_max, double eps, critsplit_rng* rng, const double* times,
                                             size_t count, double* values) {
    CRITSPLIT_REQUIRE(rng && (count == 0 || (times && values)));
    return guarded([&] {
        for (size_t k = 0; k < count; ++k) {
            if (!(times[k] >= 0.0 && times[k] <= t_max) || (k > 0 && times[k] < times[k - 1])) {
                throw critsplit::DomainError("subordinator: grid must be nondecreasing within [0, t_max]");
            }
        }
        const auto path = critsplit::simulate_subordinator(t_max, eps, rng->rng);
        for (size_t k = 0; k < count; ++k) values[k] = path.value_at(times[k]);
    });
}

critsplit_status critsplit_digamma(double re, double im, double* out_re, double* out_im) {
    CRITSPLIT_REQUIRE(out_re && out_im);
    return guarded([&] {
        const auto v = critsplit::digamma(std::complex<double>(re, im));
        *out_re = v.real();
        *out_im = v.imag();
    });
}

critsplit_status critsplit_trigamma(double re, double im, double* out_re, double* out_im) {
    CRITSPLIT_REQUIRE(out_re && out_im);
    return guarded([&] {
        const auto v = critsplit::trigamma(std::complex<double>(re, im));
        *out_re = v.real();
        *out_im = v.imag();
    });
}

critsplit_status critsplit_find_roots(int count, double* s, double* residues) {
    CRITSPLIT_REQUIRE(s && residues);
    return guarded([&] {
        const auto t = critsplit::find_roots(count);
        std::copy(t.s.begin(), t.s.end(), s);
        std::copy(t.residues.begin(), t.residues.end(), residues);
    });
}

critsplit_status critsplit_digamma_difference_integral(double s, double* out) {
    CRITSPLIT_REQUIRE(out);
    return guarded([&] { *out = critsplit::digamma_difference_integral(s); });
}

void critsplit_density_options_init(critsplit_density_options* options) {
    if (options == nullptr) return;
    const critsplit::DensityOptions d;
    options->x_min = 1e-3;
    options->bins = 30;
    options->reps = 10000;
    options->t_max = d.t_max;
    options->eps = d.eps;
    options->seed = d.seed;
    options->threads = 0;
}

critsplit_status critsplit_density_estimate(const critsplit_density_options* options, critsplit_density** out) {
    CRITSPLIT_REQUIRE(options && out);
    return guarded([&] {
        critsplit::DensityOptions d;
        d.t_max = options->t_max;
        d.eps = options->eps;
        d.seed = options->seed;
        d.threads = critsplit::resolve_threads(options->threads);
        const auto edges = critsplit::log_spaced_edges(options->x_min, options->bins);
        *out = new critsplit_density{critsplit::estimate_occupation_density(edges, options->reps, d)};
    });
}

size_t critsplit_density_bins(const critsplit_density* d) { return d ? d->est.bins.size() : 0; }

critsplit_status critsplit_density_bin(const critsplit_density* d, size_t bin, double* x_lo, double* x_hi,
                                       double* x_mid, double* u_hat, double* std_error) {
    CRITSPLIT_REQUIRE(d && x_lo && x_hi && x_mid && u_hat && std_error);
    if (bin >= d->est.bins.size()) return fail(CRITSPLIT_E_NOT_FOUND, "bin out of range");
    const auto& b = d->est.bins[bin];
    *x_lo = b.x_lo;
    *x_hi = b.x_hi;
    *x_mid = b.x_mid;
    *u_hat = b.u_hat;
    *std_error = b.std_error;
    return CRITSPLIT_OK;
}

critsplit_status critsplit_density_mellin(const critsplit_density* d, size_t index, double* s, double* estimate,
                                          double* std_error) {
    CRITSPLIT_REQUIRE(d && s && estimate && std_error);
    if (index >= d->est.mellin_s.size()) return fail(CRITSPLIT_E_NOT_FOUND, "Mellin index out of range");
    *s = d->est.mellin_s[index];
    *estimate = d->est.mellin_hat[index];
    *std_error = d->est.mellin_stderr[index];
    return CRITSPLIT_OK;
}

critsplit_status critsplit_density_truncated(const critsplit_density* d, int64_t* truncated, int64_t* reps) {
    CRITSPLIT_REQUIRE(d && truncated && reps);
    *truncated = d->est.truncated;
    *reps = d->est.reps;
    return CRITSPLIT_OK;
}

void critsplit_density_free(critsplit_density* d) { delete d; }

critsplit_status critsplit_newick_parse(const char* text, size_t length, const char* source, critsplit_newick** out) {
    CRITSPLIT_REQUIRE((text || length == 0) && out);
    return guarded([&] {
        *out = new critsplit_newick{
            critsplit::parse_newick(std::string_view(text ? text : "", length), source ? source : "<input>")};
    });
}

size_t critsplit_newick_tree_count(const critsplit_newick* doc) { return doc ? doc->doc.trees.size() : 0; }

size_t critsplit_newick_error_count(const critsplit_newick* doc) { return doc ? doc->doc.diagnostics.size() : 0; }

critsplit_status critsplit_newick_error(const critsplit_newick* doc, size_t index, char** out) {
    CRITSPLIT_REQUIRE(doc && out);
    if (index >= doc->doc.diagnostics.size()) return fail(CRITSPLIT_E_NOT_FOUND, "diagnostic out of range");
    return guarded([&] { *out = dup_string(doc->doc.source + ": " + doc->doc.diagnostics[index].to_string()); });
}

critsplit_status critsplit_newick_serialize(const critsplit_newick* doc, char** out) {
    CRITSPLIT_REQUIRE(doc && out);
    return guarded([&] { *out = dup_string(critsplit::to_newick(doc->doc)); });
}

void critsplit_newick_free(critsplit_newick* doc) { delete doc; }

critsplit_status critsplit_shape_report(const critsplit_newick* const* docs, size_t count, int64_t max_size,
                                        critsplit_policy policy, uint64_t seed, critsplit_report** out) {
    CRITSPLIT_REQUIRE((docs || count == 0) && out);
    for (size_t k = 0; k < count; ++k) CRITSPLIT_REQUIRE(docs[k]);
    return guarded([&] {
        critsplit::PolytomyPolicy p = critsplit::PolytomyPolicy::strict;
        switch (policy) {
            case CRITSPLIT_POLICY_STRICT: p = critsplit::PolytomyPolicy::strict; break;
            case CRITSPLIT_POLICY_SKIP: p = critsplit::PolytomyPolicy::skip; break;
            case CRITSPLIT_POLICY_RESOLVE: p = critsplit::PolytomyPolicy::resolve; break;
            default: throw critsplit::DomainError("unknown polytomy policy");
        }
        std::vector<const critsplit::NewickDocument*> list;
        list.reserve(count);
        for (size_t k = 0; k < count; ++k) list.push_back(&docs[k]->doc);
        *out = new critsplit_report{
            critsplit::shape_report(std::span<const critsplit::NewickDocument* const>(list), max_size, p, seed)};
    });
}

critsplit_status critsplit_report_csv(const critsplit_report* report, char** out) {
    CRITSPLIT_REQUIRE(report && out);
    return guarded([&] { *out = dup_string(report->report.to_csv()); });
}

critsplit_status critsplit_report_json(const critsplit_report* report, char** out) {
    CRITSPLIT_REQUIRE(report && out);
    return guarded([&] { *out = dup_string(report->report.to_json()); });
}

void critsplit_report_free(critsplit_report* report) { delete report; }

}  // extern "C"
