// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <string>
#include <vector>

#include "critsplit/clade_tree.hpp"
#include "critsplit/core_laws.hpp"
#include "critsplit/errors.hpp"
#include "critsplit/hd_chain.hpp"
#include "critsplit/newick_io.hpp"
#include "critsplit/statistics.hpp"
#include "doctest.h"
#include "support/newick_corpus.hpp"

using namespace critsplit;

namespace {

std::string first_error(std::string_view text) {
    const NewickDocument d = parse_newick(text);
    return d.diagnostics.empty() ? std::string() : d.diagnostics.front().to_string();
}

const ShapeReportRow& row_of(const ShapeReport& r, const std::string& key) {
    for (const ShapeReportRow& row : r.rows) {
        if (row.shape_key == key) return row;
    }
    throw NotFoundError(key);
}

}  // namespace

TEST_CASE("parse basic trees") {
    const NewickDocument d = parse_newick("((A,B),(C,D));");
    REQUIRE(d.ok());
    REQUIRE(d.trees.size() == 1);
    const NewickTree& t = d.trees[0];
    CHECK(t.leaf_count() == 4);
    CHECK(t.nodes.size() == 7);
    CHECK(validate_binary(t).empty());

    const NewickDocument p = parse_newick("(A,B,C);");
    REQUIRE(p.ok());
    const auto v = validate_binary(p.trees[0]);
    REQUIRE(v.size() == 1);
    CHECK(v[0].to_string() == "polytomy of degree 3 at 1:1");

    const NewickDocument l = parse_newick("((A:1.0,B:2.0):0.5,C:3.0);");
    REQUIRE(l.ok());
    const NewickTree& lt = l.trees[0];
    CHECK(lt.nodes[1].length == 0.5);
    CHECK(lt.nodes[2].name == "A");
    CHECK(lt.nodes[2].length == 1.0);
    CHECK(to_newick(lt) == "((A:1,B:2):0.5,C:3);");
    CHECK(parse_newick(to_newick(lt)).trees[0].same_as(lt));
}

TEST_CASE("names, quotes and comments") {
    const NewickDocument d = parse_newick("('it''s',Homo_sapiens[note],'a_b')root;");
    REQUIRE(d.ok());
    const NewickTree& t = d.trees[0];
    CHECK(t.nodes[0].name == "root");
    CHECK(t.nodes[1].name == "it's");
    CHECK(t.nodes[2].name == "Homo sapiens");
    CHECK(t.nodes[3].name == "a_b");
    CHECK(to_newick(t) == "('it''s',Homo_sapiens,'a_b')root;");

    const NewickDocument two = parse_newick("(A,B);\n(C,(D,E));");
    REQUIRE(two.ok());
    CHECK(two.trees.size() == 2);
    CHECK(two.trees[1].nodes[2].pos == SourcePos{2, 4});
    CHECK(parse_newick("  [only a comment]  ").trees.empty());
}

TEST_CASE("parse errors carry positions") {
    CHECK(first_error("((A,B);") == "unbalanced '(': missing ')' at 1:1");
    CHECK(first_error("(A,B));") == "unbalanced ')' at 1:6");
    CHECK(first_error("(A,B)C D;") == "expected ';' at 1:8");
    CHECK(first_error("(A,B):;") == "dangling ':' at 1:6");
    CHECK(first_error("(A,);") == "empty subtree at 1:4");
    CHECK(first_error("(A,B)") == "missing ';' at 1:6");
    CHECK(first_error("(A)B;") == "internal node with a single child at 1:1");
    CHECK(first_error("(A,'B);") == "unterminated quoted name at 1:4");
    CHECK(first_error("(A,B)[x;") == "unterminated comment at 1:6");
    CHECK(first_error("(A:x,B);") == "invalid branch length 'x' at 1:4");
    CHECK(first_error("(A,B);\n(C,\n ;") == "empty subtree at 3:2");
    CHECK(first_error("(\xC3\xA9,);") == "empty subtree at 1:4");
    CHECK(first_error("A,B;") == "',' outside parentheses at 1:2");
    CHECK(first_error("(A:inf,B);") == "invalid branch length 'inf' at 1:4");

    // Recovery continues with the next tree.
    const NewickDocument d = parse_newick("(A,;(B,C);((D,E);(F,G);");
    CHECK(d.trees.size() == 2);
    CHECK(d.diagnostics.size() == 2);
    CHECK_THROWS_AS(d.throw_if_errors(), ParseError);
}

TEST_CASE("grammar corpus round trips") {
    const auto corpus = testing::grammar_corpus();
    REQUIRE(corpus.size() == 100);
    for (const std::string& text : corpus) {
        const NewickDocument a = parse_newick(text);
        REQUIRE_MESSAGE(a.ok(), text);
        const std::string s = to_newick(a);
        const NewickDocument b = parse_newick(s);
        REQUIRE_MESSAGE(b.ok(), s);
        REQUIRE(a.trees.size() == b.trees.size());
        for (std::size_t k = 0; k < a.trees.size(); ++k) CHECK(a.trees[k].same_as(b.trees[k]));
        CHECK(to_newick(b) == s);
    }
}

TEST_CASE("fuzzed input never escapes") {
    Rng rng(31337);
    for (int c = 0; c < 1500; ++c) {
        const std::string text = testing::fuzz_case(rng, 1 << 16);
        NewickDocument d;
        REQUIRE_NOTHROW(d = parse_newick(text));
        for (const Diagnostic& diag : d.diagnostics) {
            CHECK(diag.pos.line >= 1);
            CHECK(diag.pos.column >= 1);
        }
        for (const NewickTree& t : d.trees) {
            const NewickDocument again = parse_newick(to_newick(t));
            REQUIRE(again.ok());
            CHECK(again.trees[0].same_as(t));
        }
    }
    // Deep nesting does not recurse.
    std::string deep(200000, '(');
    deep += "A";
    for (int k = 0; k < 200000; ++k) deep += ",B)";
    deep += ";";
    const NewickDocument d = parse_newick(deep);
    REQUIRE(d.ok());
    CHECK(d.trees[0].leaf_count() == 200001);
    CHECK(parse_newick(to_newick(d.trees[0])).trees[0].same_as(d.trees[0]));
}

TEST_CASE("clade trees to Newick") {
    Rng rng(4);
    const CladeTree t = sample_ctcs(30, LabelMode::ordered, rng);
    const NewickDocument d = parse_newick(to_newick(t));
    REQUIRE(d.ok());
    CHECK(d.trees[0].leaf_count() == 30);
    CHECK(validate_binary(d.trees[0]).empty());
    double total = 0.0;
    for (const NewickNode& n : d.trees[0].nodes) total += n.length.value_or(0.0);
    CHECK(std::abs(total - t.total_edge_length()) < 1e-9);
    const std::string plain = to_newick(sample_dtcs(3, LabelMode::unlabelled, rng), false);
    CHECK(plain.find(':') == std::string::npos);
    CHECK(plain.find("t3") != std::string::npos);
    CHECK(to_newick(CladeTree::single_leaf(LabelMode::ordered)) == "1;");
}

TEST_CASE("shape report basics") {
    const NewickDocument cherry = parse_newick("(A,B);");
    const ShapeReport r = shape_report({&cherry, 1}, 6);
    CHECK(r.rows.size() == 13);
    CHECK(r.total_leaves == 2);
    const ShapeReportRow& c = row_of(r, "(.,.)");
    CHECK(c.p_empirical == 1.0);
    CHECK(std::abs(c.p_model - 0.6079) < 5e-5);
    CHECK(r.to_csv().rfind("shape_key,size,p_model,p_empirical,n_leaves_in_shape,total_leaves\n\"(.,.)\",2,", 0) == 0);
    CHECK(r.to_json().find("\"schema\": \"v1\"") != std::string::npos);
    CHECK_THROWS_AS(shape_report({&cherry, 1}, 1), DomainError);

    const NewickDocument poly = parse_newick("((A,B,C),((D,E),F));", "poly.nwk");
    CHECK_THROWS_WITH_AS(shape_report({&poly, 1}, 4), doctest::Contains("poly.nwk: polytomy of degree 3 at 1:2"),
                         ValidationError);
    const ShapeReport skip = shape_report({&poly, 1}, 4, PolytomyPolicy::skip);
    CHECK(skip.polytomies == 1);
    CHECK(skip.excluded_clades == 1);
    CHECK(row_of(skip, "(.,(.,.))").n_leaves_in_shape == 3);
    CHECK(row_of(skip, "(.,.)").n_leaves_in_shape == 2);
    const ShapeReport res = shape_report({&poly, 1}, 4, PolytomyPolicy::resolve, 9);
    CHECK(row_of(res, "(.,(.,.))").n_leaves_in_shape == 6);
    CHECK(row_of(res, "(.,.)").n_leaves_in_shape == 4);
    CHECK(res.to_json().find("\"resolved_randomly\": true") != std::string::npos);

    // Each size class counts every leaf at most once.
    for (std::int64_t m = 2; m <= 4; ++m) {
        std::int64_t sum = 0;
        for (const auto& row : res.rows) sum += row.size == m ? row.n_leaves_in_shape : 0;
        CHECK(sum <= res.total_leaves);
    }
}

TEST_CASE("random resolution is uniform") {
    // A 4-way polytomy has 15 binary refinements: 12 combs (.,(.,(.,.))) and 3 balanced.
    const NewickDocument poly = parse_newick("(A,B,C,D);");
    int comb = 0;
    const int reps = 6000;
    for (int r = 0; r < reps; ++r) {
        const ShapeReport rep = shape_report({&poly, 1}, 4, PolytomyPolicy::resolve, static_cast<std::uint64_t>(r));
        comb += row_of(rep, "(.,(.,(.,.)))").n_leaves_in_shape == 4;
    }
    const double p = 12.0 / 15;
    CHECK(std::abs(comb / double(reps) - p) < 3.5 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("shape report on a model corpus") {
    const int trees = 1000;
    const std::int64_t n = 100;
    Rng rng(12);
    std::vector<NewickDocument> docs;
    for (int k = 0; k < trees; ++k) {
        docs.push_back(parse_newick(to_newick(sample_dtcs(n, LabelMode::unlabelled, rng), false)));
    }
    const ShapeReport all = shape_report(docs, 4);
    const OccupationTable occ = occupation_dp(n);
    for (const ShapeReportRow& row : all.rows) {
        RunningStats per_tree;
        for (const NewickDocument& d : docs) {
            const ShapeReport one = shape_report({&d, 1}, 4);
            per_tree.add(row_of(one, row.shape_key).p_empirical);
        }
        const double finite_n = row.p_model * occ.at(row.size) / limit_occupation(row.size);
        CHECK(std::abs(per_tree.mean() - row.p_empirical) < 1e-12);
        CHECK(std::abs(row.p_empirical - finite_n) < 3.5 * per_tree.stderr_mean());
        CHECK(std::abs(row.p_empirical - row.p_model) <
              3.5 * per_tree.stderr_mean() + std::abs(finite_n - row.p_model));
    }
}
