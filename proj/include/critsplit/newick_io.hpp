// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "critsplit/clade_tree.hpp"

namespace critsplit {

/// 1-based line and column (columns count code points).
struct SourcePos {
    std::int64_t line = 1;
    std::int64_t column = 1;

    bool operator==(const SourcePos&) const = default;
};

struct Diagnostic {
    SourcePos pos;
    std::string message;

    /// "message at line:col"
    std::string to_string() const;
};

struct NewickNode {
    std::string name;              ///< underscores in unquoted names already turned into spaces
    std::optional<double> length;
    std::vector<std::int32_t> children;
    std::int32_t parent = -1;
    SourcePos pos;                 ///< '(' of an internal node, first character of a leaf
};

struct NewickTree {
    std::vector<NewickNode> nodes;
    std::int32_t root = -1;

    std::int64_t leaf_count() const;

    /// Same topology, child order, names and lengths. Positions are ignored.
    bool same_as(const NewickTree& other) const;
};

struct NewickDocument {
    std::string source;
    std::vector<NewickTree> trees;
    std::vector<Diagnostic> diagnostics;  ///< one per rejected tree

    bool ok() const noexcept { return diagnostics.empty(); }

    /// ParseError carrying the first diagnostic.
    void throw_if_errors() const;
};

/// Never throws on bad input. A malformed tree is reported and skipped up to the next ';'.
NewickDocument parse_newick(std::string_view text, std::string source = "<input>");

/// One tree, ';'-terminated, no comments. Lengths use the shortest round-trip form.
std::string to_newick(const NewickTree& tree);

/// Every tree on its own line.
std::string to_newick(const NewickDocument& doc);

/// Leaves named by label ("t<k>" for unlabelled trees, in leaf order); lengths are
/// edge lengths unless with_lengths is false.
std::string to_newick(const CladeTree& tree, bool with_lengths = true);

/// One entry per node with 3 or more children, e.g. "polytomy of degree 3 at 1:1".
std::vector<Diagnostic> validate_binary(const NewickTree& tree);

enum class PolytomyPolicy { strict, skip, resolve };

const char* to_string(PolytomyPolicy policy);

/// Throws DomainError for unknown names.
PolytomyPolicy parse_policy(std::string_view name);

struct ShapeReportRow {
    std::string shape_key;
    std::int64_t size = 0;
    double p_model = 0.0;
    double p_empirical = 0.0;
    std::int64_t n_leaves_in_shape = 0;
    std::int64_t total_leaves = 0;
};

struct ShapeReport {
    std::int64_t max_size = 0;
    PolytomyPolicy policy = PolytomyPolicy::strict;
    std::int64_t trees = 0;
    std::int64_t total_leaves = 0;
    std::int64_t polytomies = 0;           ///< seen (skip) or refined (resolve)
    std::int64_t excluded_clades = 0;      ///< clades of size <= max_size dropped under skip
    std::vector<ShapeReportRow> rows;      ///< every shape of size 2..max_size, canonical order

    /// shape_key,size,p_model,p_empirical,n_leaves_in_shape,total_leaves
    std::string to_csv() const;
    std::string to_json() const;
};

/// Largest max_size accepted by shape_report.
inline constexpr std::int64_t kShapeReportCap = 12;

/// Tallies, for each clade of size 2..max_size, its leaves under the clade's shape.
/// Strict policy throws ValidationError naming every polytomy. Resolve draws a uniform
/// binary refinement of each polytomy from Rng(seed, tree index).
ShapeReport shape_report(std::span<const NewickDocument> docs, std::int64_t max_size,
                         PolytomyPolicy policy = PolytomyPolicy::strict, std::uint64_t seed = 1);
ShapeReport shape_report(std::span<const NewickDocument* const> docs, std::int64_t max_size,
                         PolytomyPolicy policy = PolytomyPolicy::strict, std::uint64_t seed = 1);

}  // namespace critsplit
