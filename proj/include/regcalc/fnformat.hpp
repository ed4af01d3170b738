#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "ext_real.hpp"
#include "piecewise.hpp"

// Function-definition text format. One definition per block, any number of
// blocks per file, '#' comments allowed anywhere:
//
//   fn NAME on (BOUND, BOUND):
//       piece (BOUND, BOUND]: EXPR ;
//       family n >= INT on (NEXPR, NEXPR]: EXPR
//
//   seq NAME: NEXPR
//
// BOUND is a constant expression or one of inf / +inf / -inf. Piece bodies
// are expressions in x; family cell bounds are expressions in n; family
// bodies may use both x and n. Clauses inside one fn are ';'-separated.
// A family with bounds (lo(n), hi(n)] contributes the cells
// (lo(n), hi(n)] for n >= INT; interleaved families (e.g. two families
// alternating even/odd cells) are stitched together in lo order.

namespace regcalc {

struct FnFile {
    std::vector<std::pair<std::string, PiecewiseFn>> fns;
    std::vector<std::pair<std::string, Expr>> seqs;

    bool has_fn(const std::string& name) const {
        for (const auto& p : fns)
            if (p.first == name) return true;
        return false;
    }
    bool has_seq(const std::string& name) const {
        for (const auto& p : seqs)
            if (p.first == name) return true;
        return false;
    }
    const PiecewiseFn& fn(const std::string& name) const {
        for (const auto& p : fns)
            if (p.first == name) return p.second;
        throw Error("no function named '" + name + "' in the input file");
    }
    const Expr& seq(const std::string& name) const {
        for (const auto& p : seqs)
            if (p.first == name) return p.second;
        throw Error("no sequence named '" + name + "' in the input file");
    }
};

namespace detail {

inline bool is_reserved_name(std::string_view s) {
    static const char* words[] = {"fn",   "on",  "piece", "family", "seq",  "x",
                                  "n",    "pi",  "e",     "inf",    "sum",  "sin",
                                  "cos",  "abs", "sqrt",  "cbrt",   "exp",  "ln"};
    for (const char* w : words)
        if (s == w) return true;
    return false;
}

inline std::string expect_name(Lexer& lx) {
    const Token& t = lx.peek();
    if (t.kind != Token::ident || is_reserved_name(t.text)) lx.fail("name");
    std::string s = t.text;
    lx.next();
    return s;
}

// BOUND := "inf" | "+inf" | "-inf" | constant expression
inline ExtReal parse_bound(Lexer& lx) {
    if (lx.accept_ident("inf")) return ExtReal::pos_inf();
    if (lx.peek().kind == Token::sym && lx.peek(1).kind == Token::ident &&
        lx.peek(1).text == "inf") {
        if (lx.peek().text == "+") {
            lx.next();
            lx.next();
            return ExtReal::pos_inf();
        }
        if (lx.peek().text == "-") {
            lx.next();
            lx.next();
            return ExtReal::neg_inf();
        }
    }
    std::size_t at = lx.peek().offset;
    ParseCtx ctx;
    Expr e(parse_expr(lx, ctx));
    if (e.has_x() || e.has_n()) throw ParseError("bound is not constant", at, "constant expression");
    try {
        return ExtReal(e.eval_const());
    } catch (const Error& err) {
        throw ParseError(std::string("bound failed to evaluate: ") + err.what(), at,
                         "constant expression");
    }
}

// NEXPR := expression in n (x forbidden)
inline Expr parse_n_expr(Lexer& lx) {
    std::size_t at = lx.peek().offset;
    ParseCtx ctx;
    Expr e(parse_expr(lx, ctx));
    if (e.has_x()) throw ParseError("expression may only use n here", at, "expression in n");
    return e;
}

inline void parse_fn_def(Lexer& lx, FnFile& out, const ValidateOptions& vo) {
    std::string name = expect_name(lx);
    lx.expect_ident("on");
    lx.expect_sym("(");
    ExtReal a = parse_bound(lx);
    lx.expect_sym(",");
    ExtReal b = parse_bound(lx);
    lx.expect_sym(")");
    lx.expect_sym(":");

    std::vector<Piece> pieces;
    std::vector<Family> families;
    do {
        if (lx.accept_ident("piece")) {
            lx.expect_sym("(");
            ExtReal l = parse_bound(lx);
            lx.expect_sym(",");
            ExtReal r = parse_bound(lx);
            lx.expect_sym("]");
            lx.expect_sym(":");
            std::size_t at = lx.peek().offset;
            ParseCtx ctx;
            Expr body(parse_expr(lx, ctx));
            if (body.has_n())
                throw ParseError("piece body may not use n", at, "expression in x");
            pieces.push_back(Piece{l.raw(), r.raw(), std::move(body)});
        } else if (lx.accept_ident("family")) {
            lx.expect_ident("n");
            lx.expect_sym(">=");
            long long n0 = expect_int(lx);
            lx.expect_ident("on");
            lx.expect_sym("(");
            Expr lo = parse_n_expr(lx);
            lx.expect_sym(",");
            Expr hi = parse_n_expr(lx);
            lx.expect_sym("]");
            lx.expect_sym(":");
            ParseCtx ctx;
            Expr body(parse_expr(lx, ctx));
            families.push_back(Family{n0, std::move(lo), std::move(hi), std::move(body)});
        } else {
            lx.fail("'piece' or 'family'");
        }
    } while (lx.accept_sym(";"));

    if (out.has_fn(name) || out.has_seq(name))
        throw Error("duplicate definition of '" + name + "'");
    PiecewiseFn f(a, b, std::move(pieces), std::move(families), vo);
    f.set_name(name);
    out.fns.emplace_back(std::move(name), std::move(f));
}

inline void parse_seq_def(Lexer& lx, FnFile& out) {
    std::string name = expect_name(lx);
    lx.expect_sym(":");
    std::size_t at = lx.peek().offset;
    ParseCtx ctx;
    Expr body(parse_expr(lx, ctx));
    if (body.has_x()) throw ParseError("sequence body may only use n", at, "expression in n");
    if (out.has_fn(name) || out.has_seq(name))
        throw Error("duplicate definition of '" + name + "'");
    out.seqs.emplace_back(std::move(name), std::move(body));
}

}  // namespace detail

inline FnFile parse_fn_text(std::string_view src, const ValidateOptions& vo = {}) {
    detail::Lexer lx(src);
    FnFile out;
    while (!lx.at_end()) {
        if (lx.accept_ident("fn")) {
            detail::parse_fn_def(lx, out, vo);
        } else if (lx.accept_ident("seq")) {
            detail::parse_seq_def(lx, out);
        } else {
            lx.fail("'fn' or 'seq'");
        }
    }
    if (out.fns.empty() && out.seqs.empty()) throw Error("input defines no functions");
    return out;
}

inline FnFile load_fn_file(const std::string& path, const ValidateOptions& vo = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_fn_text(ss.str(), vo);
}

// Numeric sequence data: one "index value" pair per line, 1-based contiguous
// indices, '#' comments and blank lines skipped.
inline std::vector<double> parse_sequence_data(std::string_view src) {
    std::vector<double> vals;
    std::size_t pos = 0;
    long long line_no = 0;
    while (pos < src.size()) {
        std::size_t eol = src.find('\n', pos);
        if (eol == std::string_view::npos) eol = src.size();
        std::string line(src.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long idx;
        double v;
        if (!(ls >> idx)) continue;  // blank or comment-only line
        if (!(ls >> v))
            throw Error("sequence data line " + std::to_string(line_no) + ": missing value");
        if (idx != static_cast<long long>(vals.size()) + 1)
            throw Error("sequence data line " + std::to_string(line_no) +
                        ": expected index " + std::to_string(vals.size() + 1));
        vals.push_back(v);
    }
    if (vals.empty()) throw Error("sequence data is empty");
    return vals;
}

inline std::vector<double> load_sequence_data(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sequence_data(ss.str());
}

}  // namespace regcalc
