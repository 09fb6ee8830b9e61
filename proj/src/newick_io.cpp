// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "critsplit/newick_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"

#include "critsplit/errors.hpp"
#include "critsplit/fringe.hpp"
#include "critsplit/shape.hpp"

namespace critsplit {

namespace {

enum class Tok { lparen, rparen, comma, colon, semicolon, name, end, error };

struct Token {
    Tok kind = Tok::end;
    SourcePos pos;
    std::string text;  // name text, or the message of an error token
    bool quoted = false;
};

bool is_delimiter(char c) {
    switch (c) {
        case '(': case ')': case '[': case ']': case '\'': case ':': case ';': case ',':
            return true;
        default:
            return false;
    }
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : s_(text) {}

    const Token& peek() {
        if (!has_peek_) {
            peeked_ = scan();
            has_peek_ = true;
        }
        return peeked_;
    }

    Token next() {
        peek();
        has_peek_ = false;
        last_ = peeked_.kind;
        return std::move(peeked_);
    }

    Tok last() const noexcept { return last_; }

private:
    void advance() {
        const char b = s_[i_++];
        if (b == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else if (i_ >= s_.size() || (static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
            ++pos_.column;
        }
    }

    Token scan() {
        // Whitespace and [comments].
        for (;;) {
            while (i_ < s_.size() && is_space(s_[i_])) advance();
            if (i_ < s_.size() && s_[i_] == '[') {
                const SourcePos start = pos_;
                while (i_ < s_.size() && s_[i_] != ']') advance();
                if (i_ >= s_.size()) return {Tok::error, start, "unterminated comment", false};
                advance();
                continue;
            }
            break;
        }
        Token t;
        t.pos = pos_;
        if (i_ >= s_.size()) {
            t.kind = Tok::end;
            return t;
        }
        const char c = s_[i_];
        switch (c) {
            case '(': advance(); t.kind = Tok::lparen; return t;
            case ')': advance(); t.kind = Tok::rparen; return t;
            case ',': advance(); t.kind = Tok::comma; return t;
            case ':': advance(); t.kind = Tok::colon; return t;
            case ';': advance(); t.kind = Tok::semicolon; return t;
            case ']': advance(); return {Tok::error, t.pos, "unexpected ']'", false};
            default: break;
        }
        t.kind = Tok::name;
        if (c == '\'') {
            t.quoted = true;
            advance();
            for (;;) {
                if (i_ >= s_.size()) return {Tok::error, t.pos, "unterminated quoted name", false};
                if (s_[i_] == '\'') {
                    advance();
                    if (i_ < s_.size() && s_[i_] == '\'') {
                        t.text.push_back('\'');
                        advance();
                        continue;
                    }
                    break;
                }
                t.text.push_back(s_[i_]);
                advance();
            }
            return t;
        }
        while (i_ < s_.size() && !is_space(s_[i_]) && !is_delimiter(s_[i_])) {
            t.text.push_back(s_[i_] == '_' ? ' ' : s_[i_]);
            advance();
        }
        return t;
    }

    std::string_view s_;
    std::size_t i_ = 0;
    SourcePos pos_;
    Token peeked_;
    bool has_peek_ = false;
    Tok last_ = Tok::end;
};

struct Failure {
    Diagnostic diag;
};

class TreeParser {
public:
    explicit TreeParser(Lexer& lex) : lex_(lex) {}

    NewickTree parse() {
        bool expect_subtree = true;
        for (;;) {
            Token tok = lex_.next();
            if (tok.kind == Tok::error) fail(tok.pos, tok.text);
            if (expect_subtree) {
                if (tok.kind == Tok::lparen) {
                    const std::int32_t id = add_node(tok.pos);
                    open_.push_back(id);
                    continue;
                }
                if (tok.kind == Tok::name || tok.kind == Tok::colon) {
                    const std::int32_t id = add_node(tok.pos);
                    label_and_length(id, std::move(tok));
                    if (tree_.nodes[static_cast<std::size_t>(id)].name.empty()) fail(tok.pos, "empty subtree");
                    expect_subtree = false;
                    continue;
                }
                if (tok.kind == Tok::end) fail(tok.pos, "unexpected end of input");
                fail(tok.pos, "empty subtree");
            }
            switch (tok.kind) {
                case Tok::comma:
                    if (open_.empty()) fail(tok.pos, "',' outside parentheses");
                    expect_subtree = true;
                    break;
                case Tok::rparen: {
                    if (open_.empty()) fail(tok.pos, "unbalanced ')'");
                    const std::int32_t id = open_.back();
                    open_.pop_back();
                    if (tree_.nodes[static_cast<std::size_t>(id)].children.size() < 2) {
                        fail(tree_.nodes[static_cast<std::size_t>(id)].pos, "internal node with a single child");
                    }
                    if (lex_.peek().kind == Tok::name || lex_.peek().kind == Tok::colon) {
                        label_and_length(id, lex_.next());
                    }
                    break;
                }
                case Tok::semicolon:
                    if (!open_.empty()) {
                        fail(tree_.nodes[static_cast<std::size_t>(open_.back())].pos, "unbalanced '(': missing ')'");
                    }
                    return std::move(tree_);
                case Tok::end:
                    if (!open_.empty()) {
                        fail(tree_.nodes[static_cast<std::size_t>(open_.back())].pos, "unbalanced '(': missing ')'");
                    }
                    fail(tok.pos, "missing ';'");
                default:
                    fail(tok.pos, open_.empty() ? "expected ';'" : "expected ',' or ')'");
            }
        }
    }

private:
    [[noreturn]] static void fail(SourcePos pos, std::string message) { throw Failure{{pos, std::move(message)}}; }

    std::int32_t add_node(SourcePos pos) {
        if (tree_.nodes.size() >= static_cast<std::size_t>(INT32_MAX)) fail(pos, "too many nodes");
        NewickNode n;
        n.pos = pos;
        const auto id = static_cast<std::int32_t>(tree_.nodes.size());
        if (!open_.empty()) {
            n.parent = open_.back();
            tree_.nodes[static_cast<std::size_t>(open_.back())].children.push_back(id);
        } else {
            tree_.root = id;
        }
        tree_.nodes.push_back(std::move(n));
        return id;
    }

    // `first` is the token after the subtree: a name or a colon.
    void label_and_length(std::int32_t id, Token first) {
        NewickNode& n = tree_.nodes[static_cast<std::size_t>(id)];
        if (first.kind == Tok::name) {
            n.name = std::move(first.text);
            if (lex_.peek().kind != Tok::colon) return;
            first = lex_.next();
        }
        const SourcePos colon = first.pos;
        const Token value = lex_.next();
        if (value.kind == Tok::error) fail(value.pos, value.text);
        if (value.kind != Tok::name || value.quoted || value.text.empty()) fail(colon, "dangling ':'");
        double x = 0.0;
        const char* begin = value.text.data();
        const char* end = begin + value.text.size();
        const auto [ptr, ec] = std::from_chars(begin, end, x);
        if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
            fail(value.pos, "invalid branch length '" + value.text + "'");
        }
        tree_.nodes[static_cast<std::size_t>(id)].length = x;
    }

    Lexer& lex_;
    NewickTree tree_;
    std::vector<std::int32_t> open_;
};

std::string format_pos(SourcePos p) { return std::to_string(p.line) + ":" + std::to_string(p.column); }

void append_name(std::string& out, const std::string& name) {
    bool needs_quotes = false;
    for (char c : name) {
        if (c == '_' || is_delimiter(c) || (is_space(c) && c != ' ')) needs_quotes = true;
    }
    if (needs_quotes) {
        out.push_back('\'');
        for (char c : name) {
            if (c == '\'') out.push_back('\'');
            out.push_back(c);
        }
        out.push_back('\'');
        return;
    }
    for (char c : name) out.push_back(c == ' ' ? '_' : c);
}

void append_length(std::string& out, double x) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    out.push_back(':');
    out.append(buf.data(), ptr);
}

std::string fmt12(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", x);
    return buf.data();
}

double round12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

}  // namespace

std::string Diagnostic::to_string() const { return message + " at " + format_pos(pos); }

std::int64_t NewickTree::leaf_count() const {
    std::int64_t k = 0;
    for (const NewickNode& n : nodes) k += n.children.empty();
    return k;
}

bool NewickTree::same_as(const NewickTree& other) const {
    if (nodes.size() != other.nodes.size()) return false;
    if (root < 0 || other.root < 0) return root == other.root;
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{root, other.root}};
    while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const NewickNode& x = nodes[static_cast<std::size_t>(a)];
        const NewickNode& y = other.nodes[static_cast<std::size_t>(b)];
        if (x.name != y.name || x.length != y.length || x.children.size() != y.children.size()) return false;
        for (std::size_t k = 0; k < x.children.size(); ++k) stack.emplace_back(x.children[k], y.children[k]);
    }
    return true;
}

void NewickDocument::throw_if_errors() const {
    if (diagnostics.empty()) return;
    const Diagnostic& d = diagnostics.front();
    std::string msg = source + ": " + d.message;
    if (diagnostics.size() > 1) msg += " (and " + std::to_string(diagnostics.size() - 1) + " more errors)";
    throw ParseError(msg, static_cast<std::size_t>(d.pos.line), static_cast<std::size_t>(d.pos.column));
}

NewickDocument parse_newick(std::string_view text, std::string source) {
    NewickDocument doc;
    doc.source = std::move(source);
    Lexer lex(text);
    for (;;) {
        const Token& head = lex.peek();
        if (head.kind == Tok::end) break;
        try {
            TreeParser p(lex);
            doc.trees.push_back(p.parse());
        } catch (const Failure& f) {
            doc.diagnostics.push_back(f.diag);
            // Resynchronise after the next ';'.
            while (lex.last() != Tok::semicolon && lex.last() != Tok::end) {
                lex.next();
            }
        }
    }
    return doc;
}

std::string to_newick(const NewickTree& tree) {
    std::string out;
    if (tree.root < 0) return ";";
    // (node, index of the next child to emit)
    std::vector<std::pair<std::int32_t, std::size_t>> stack{{tree.root, 0}};
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const NewickNode& n = tree.nodes[static_cast<std::size_t>(id)];
        if (!n.children.empty() && next < n.children.size()) {
            out.push_back(next == 0 ? '(' : ',');
            const std::int32_t child = n.children[next++];
            stack.emplace_back(child, 0);
            continue;
        }
        if (!n.children.empty()) out.push_back(')');
        append_name(out, n.name);
        if (n.length) append_length(out, *n.length);
        stack.pop_back();
    }
    out.push_back(';');
    return out;
}

std::string to_newick(const NewickDocument& doc) {
    std::string out;
    for (const NewickTree& t : doc.trees) {
        out += to_newick(t);
        out.push_back('\n');
    }
    return out;
}

std::string to_newick(const CladeTree& tree, bool with_lengths) {
    std::string out;
    std::int64_t unnamed = 0;
    std::vector<std::pair<NodeId, int>> stack{{tree.root(), 0}};
    while (!stack.empty()) {
        auto& [id, state] = stack.back();
        const Node& n = tree.node(id);
        if (!n.is_leaf() && state < 2) {
            out.push_back(state == 0 ? '(' : ',');
            const NodeId child = state == 0 ? n.left : n.right;
            ++state;
            stack.emplace_back(child, 0);
            continue;
        }
        if (n.is_leaf()) {
            out += tree.label_mode() == LabelMode::unlabelled ? "t" + std::to_string(++unnamed)
                                                              : std::to_string(n.label);
        } else {
            out.push_back(')');
        }
        if (with_lengths && n.parent != kNoNode) append_length(out, n.birth_height - tree.node(n.parent).birth_height);
        stack.pop_back();
    }
    out.push_back(';');
    return out;
}

std::vector<Diagnostic> validate_binary(const NewickTree& tree) {
    std::vector<Diagnostic> out;
    for (const NewickNode& n : tree.nodes) {
        if (n.children.size() > 2) {
            out.push_back({n.pos, "polytomy of degree " + std::to_string(n.children.size())});
        }
    }
    return out;
}

const char* to_string(PolytomyPolicy policy) {
    switch (policy) {
        case PolytomyPolicy::strict: return "strict";
        case PolytomyPolicy::skip: return "skip";
        case PolytomyPolicy::resolve: return "resolve";
    }
    return "strict";
}

PolytomyPolicy parse_policy(std::string_view name) {
    if (name == "strict") return PolytomyPolicy::strict;
    if (name == "skip") return PolytomyPolicy::skip;
    if (name == "resolve") return PolytomyPolicy::resolve;
    throw DomainError("unknown polytomy policy '" + std::string(name) + "' (strict, skip, resolve)");
}

namespace {

// Binary view of a Newick tree: kids[v] is empty (leaf), two children, or more (polytomy).
struct View {
    std::vector<std::vector<std::int32_t>> kids;
    std::vector<std::int32_t> parent;
    std::int32_t root = -1;
};

View make_view(const NewickTree& tree) {
    View v;
    v.root = tree.root;
    v.kids.reserve(tree.nodes.size());
    for (const NewickNode& n : tree.nodes) {
        v.kids.push_back(n.children);
        v.parent.push_back(n.parent);
    }
    return v;
}

// Uniform binary refinement by sequential insertion: child k goes above a uniform
// node among the 2k-3 nodes of the current local tree.
void resolve_polytomy(View& v, std::int32_t p, Rng& rng) {
    const std::vector<std::int32_t> c = v.kids[static_cast<std::size_t>(p)];
    v.kids[static_cast<std::size_t>(p)] = {c[0], c[1]};
    std::vector<std::int32_t> local{p, c[0], c[1]};
    for (std::size_t k = 2; k < c.size(); ++k) {
        const std::int32_t x = local[rng.below(local.size())];
        const auto y = static_cast<std::int32_t>(v.kids.size());
        v.kids.emplace_back();
        v.parent.push_back(-1);
        if (x == p) {
            // Keep p on top: y takes p's children.
            v.kids[static_cast<std::size_t>(y)] = v.kids[static_cast<std::size_t>(p)];
            for (std::int32_t ch : v.kids[static_cast<std::size_t>(y)]) v.parent[static_cast<std::size_t>(ch)] = y;
            v.kids[static_cast<std::size_t>(p)] = {y, c[k]};
            v.parent[static_cast<std::size_t>(y)] = p;
        } else {
            const std::int32_t q = v.parent[static_cast<std::size_t>(x)];
            for (std::int32_t& ch : v.kids[static_cast<std::size_t>(q)]) {
                if (ch == x) ch = y;
            }
            v.parent[static_cast<std::size_t>(y)] = q;
            v.kids[static_cast<std::size_t>(y)] = {x, c[k]};
            v.parent[static_cast<std::size_t>(x)] = y;
        }
        v.parent[static_cast<std::size_t>(c[k])] = x == p ? p : y;
        local.push_back(y);
        local.push_back(c[k]);
    }
}

}  // namespace

ShapeReport shape_report(std::span<const NewickDocument> docs, std::int64_t max_size, PolytomyPolicy policy,
                         std::uint64_t seed) {
    std::vector<const NewickDocument*> ptrs;
    ptrs.reserve(docs.size());
    for (const NewickDocument& d : docs) ptrs.push_back(&d);
    return shape_report(std::span<const NewickDocument* const>(ptrs), max_size, policy, seed);
}

ShapeReport shape_report(std::span<const NewickDocument* const> docs, std::int64_t max_size, PolytomyPolicy policy,
                         std::uint64_t seed) {
    if (max_size < 2 || max_size > kShapeReportCap) {
        throw DomainError("shape_report: need 2 <= max_size <= " + std::to_string(kShapeReportCap));
    }
    if (policy == PolytomyPolicy::strict) {
        std::vector<std::string> problems;
        for (const NewickDocument* d : docs) {
            for (const NewickTree& t : d->trees) {
                for (const Diagnostic& diag : validate_binary(t)) problems.push_back(d->source + ": " + diag.to_string());
            }
        }
        if (!problems.empty()) {
            std::string msg = problems.front();
            const std::size_t shown = std::min<std::size_t>(problems.size(), 10);
            for (std::size_t k = 1; k < shown; ++k) msg += "; " + problems[k];
            if (problems.size() > shown) msg += "; and " + std::to_string(problems.size() - shown) + " more";
            throw ValidationError(msg + " (use the skip or resolve policy)");
        }
    }

    ShapeInterner& shapes = ShapeInterner::global();
    ShapeReport rep;
    rep.max_size = max_size;
    rep.policy = policy;
    std::map<ShapeId, std::int64_t> tally;
    std::uint64_t tree_index = 0;
    for (const NewickDocument* d : docs) {
        for (const NewickTree& t : d->trees) {
            Rng rng(seed, tree_index++);
            ++rep.trees;
            rep.total_leaves += t.leaf_count();
            if (t.root < 0) continue;
            View v = make_view(t);
            const std::size_t original = v.kids.size();
            for (std::size_t id = 0; id < original; ++id) {
                if (v.kids[id].size() > 2) {
                    ++rep.polytomies;
                    if (policy == PolytomyPolicy::resolve) resolve_polytomy(v, static_cast<std::int32_t>(id), rng);
                }
            }
            // Postorder: sizes, shapes, and whether the clade is free of polytomies.
            std::vector<std::int64_t> size(v.kids.size(), 0);
            std::vector<ShapeId> shape(v.kids.size(), kNoShape);
            std::vector<char> binary(v.kids.size(), 1);
            std::vector<std::pair<std::int32_t, bool>> stack{{v.root, false}};
            while (!stack.empty()) {
                const auto [id, expanded] = stack.back();
                stack.pop_back();
                const auto u = static_cast<std::size_t>(id);
                const auto& ks = v.kids[u];
                if (ks.empty()) {
                    size[u] = 1;
                    shape[u] = kLeafShape;
                    continue;
                }
                if (!expanded) {
                    stack.emplace_back(id, true);
                    for (std::int32_t ch : ks) stack.emplace_back(ch, false);
                    continue;
                }
                bool ok = ks.size() == 2;
                for (std::int32_t ch : ks) {
                    size[u] += size[static_cast<std::size_t>(ch)];
                    ok = ok && binary[static_cast<std::size_t>(ch)];
                }
                binary[u] = ok;
                if (size[u] > max_size) continue;
                if (!ok) {
                    ++rep.excluded_clades;
                    continue;
                }
                shape[u] = shapes.join(shape[static_cast<std::size_t>(ks[0])], shape[static_cast<std::size_t>(ks[1])]);
                tally[shape[u]] += size[u];
            }
        }
    }

    for (std::int64_t m = 2; m <= max_size; ++m) {
        for (const auto& [id, p] : shape_distribution(m).probs) {
            ShapeReportRow row;
            row.shape_key = shapes.to_string(id);
            row.size = m;
            row.p_model = leaf_in_shape_prob(id);
            const auto it = tally.find(id);
            row.n_leaves_in_shape = it == tally.end() ? 0 : it->second;
            row.total_leaves = rep.total_leaves;
            row.p_empirical = rep.total_leaves > 0 ? static_cast<double>(row.n_leaves_in_shape) /
                                                         static_cast<double>(rep.total_leaves)
                                                   : 0.0;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

std::string ShapeReport::to_csv() const {
    std::string out = "shape_key,size,p_model,p_empirical,n_leaves_in_shape,total_leaves\n";
    for (const ShapeReportRow& r : rows) {
        out += "\"" + r.shape_key + "\"," + std::to_string(r.size) + "," + fmt12(r.p_model) + "," +
               fmt12(r.p_empirical) + "," + std::to_string(r.n_leaves_in_shape) + "," +
               std::to_string(r.total_leaves) + "\n";
    }
    return out;
}

std::string ShapeReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["schema"] = "v1";
    doc["max_size"] = max_size;
    doc["policy"] = to_string(policy);
    doc["resolved_randomly"] = policy == PolytomyPolicy::resolve && polytomies > 0;
    doc["trees"] = trees;
    doc["total_leaves"] = total_leaves;
    doc["polytomies"] = polytomies;
    doc["excluded_clades"] = excluded_clades;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const ShapeReportRow& r : rows) {
        nlohmann::ordered_json e;
        e["shape_key"] = r.shape_key;
        e["size"] = r.size;
        e["p_model"] = round12(r.p_model);
        e["p_empirical"] = round12(r.p_empirical);
        e["n_leaves_in_shape"] = r.n_leaves_in_shape;
        list.push_back(std::move(e));
    }
    doc["shapes"] = std::move(list);
    return doc.dump(2) + "\n";
}

}  // namespace critsplit
