#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regcalc/errors.hpp"
#include "regcalc/ext_real.hpp"

namespace regcalc {

// Closed-form expression trees over the grammar
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := atom ("^" factor)?
//   atom   := number | "x" | "n" | "pi" | "e"
//           | ident "(" expr ")" | "(" expr ")" | "-" atom | sum
//   sum    := "sum" "(" index "=" int ".." "n" (("+" | "-") int)? ":" expr ")"
//   ident  := sin | cos | abs | sqrt | cbrt | exp | ln
//
// "^" is right-associative and binds tighter than unary minus on its left
// operand only in the sense of the atom rule: "-x^2" parses as (-x)^2 because
// the leading minus is consumed by the atom. The printer parenthesizes
// accordingly so that printing and reparsing reproduce the same string.
//
// A sum's body may reference only its own index variable (not x, not n); the
// upper bound is always n plus an integer shift. Each sum node memoizes prefix
// sums so that evaluation is O(1) amortized in the upper bound.

enum class ExprKind : unsigned char {
    number, pi, e, var_x, var_n, sum_index,
    neg, sin_, cos_, abs_, sqrt_, cbrt_, exp_, ln_,
    add, sub, mul, div_, pow_, sum
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

namespace detail {

struct SumData {
    std::string index;
    long long lower = 0;
    long long upper_shift = 0;  // upper bound is n + upper_shift
    mutable std::mutex mu;
    mutable std::vector<double> prefix;  // prefix[i] = term(lower) + ... + term(lower+i-1)
};

}  // namespace detail

struct ExprNode {
    ExprKind kind;
    double number = 0;
    ExprPtr a, b;  // a: unary child / left operand / sum body
    std::shared_ptr<detail::SumData> sum;
};

namespace detail {

inline ExprPtr make(ExprKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

inline ExprPtr make1(ExprKind k, ExprPtr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

inline ExprPtr make2(ExprKind k, ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

inline ExprPtr make_num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::number;
    n->number = v;
    return n;
}

struct EvalEnv {
    std::optional<double> x;
    std::optional<long long> n;
    std::optional<double> sum_index;
};

inline std::string print_node(const ExprNode* n);  // forward

inline bool is_integer(double v) {
    return std::isfinite(v) && v == std::floor(v) && std::abs(v) <= 9.0e15;
}

inline double eval_node(const ExprNode* nd, const EvalEnv& env) {
    switch (nd->kind) {
        case ExprKind::number: return nd->number;
        case ExprKind::pi: return 3.14159265358979323846;
        case ExprKind::e: return 2.71828182845904523536;
        case ExprKind::var_x:
            if (!env.x) throw EvalError("x is not bound", "x");
            return *env.x;
        case ExprKind::var_n:
            if (!env.n) throw EvalError("n is not bound", "n");
            return static_cast<double>(*env.n);
        case ExprKind::sum_index:
            if (!env.sum_index) throw EvalError("sum index is not bound", print_node(nd));
            return *env.sum_index;
        case ExprKind::neg: return -eval_node(nd->a.get(), env);
        case ExprKind::sin_: return std::sin(eval_node(nd->a.get(), env));
        case ExprKind::cos_: return std::cos(eval_node(nd->a.get(), env));
        case ExprKind::abs_: return std::abs(eval_node(nd->a.get(), env));
        case ExprKind::sqrt_: {
            double v = eval_node(nd->a.get(), env);
            if (v < 0) throw EvalError("square root of a negative number", print_node(nd));
            return std::sqrt(v);
        }
        case ExprKind::cbrt_: return std::cbrt(eval_node(nd->a.get(), env));
        case ExprKind::exp_: {
            double v = std::exp(eval_node(nd->a.get(), env));
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::ln_: {
            double v = eval_node(nd->a.get(), env);
            if (v <= 0) throw EvalError("logarithm of a nonpositive number", print_node(nd));
            return std::log(v);
        }
        case ExprKind::add: {
            double v = eval_node(nd->a.get(), env) + eval_node(nd->b.get(), env);
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::sub: {
            double v = eval_node(nd->a.get(), env) - eval_node(nd->b.get(), env);
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::mul: {
            double v = eval_node(nd->a.get(), env) * eval_node(nd->b.get(), env);
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::div_: {
            double den = eval_node(nd->b.get(), env);
            if (den == 0) throw EvalError("division by zero", print_node(nd));
            double v = eval_node(nd->a.get(), env) / den;
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::pow_: {
            double base = eval_node(nd->a.get(), env);
            double expo = eval_node(nd->b.get(), env);
            if (base < 0 && !is_integer(expo))
                throw EvalError("negative base with non-integer exponent", print_node(nd));
            if (base == 0 && expo < 0)
                throw EvalError("zero base with negative exponent", print_node(nd));
            double v = std::pow(base, expo);
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
        case ExprKind::sum: {
            if (!env.n) throw EvalError("n is not bound", print_node(nd));
            const SumData& sd = *nd->sum;
            long long upper = *env.n + sd.upper_shift;
            if (upper < sd.lower) return 0.0;
            std::size_t count = static_cast<std::size_t>(upper - sd.lower + 1);
            std::lock_guard<std::mutex> lock(sd.mu);
            if (sd.prefix.empty()) sd.prefix.push_back(0.0);
            while (sd.prefix.size() <= count) {
                long long j = sd.lower + static_cast<long long>(sd.prefix.size()) - 1;
                EvalEnv term_env;
                term_env.sum_index = static_cast<double>(j);
                double t = eval_node(nd->a.get(), term_env);
                sd.prefix.push_back(sd.prefix.back() + t);
            }
            double v = sd.prefix[count];
            if (!std::isfinite(v)) throw EvalError("overflow", print_node(nd));
            return v;
        }
    }
    throw Error("unreachable expression kind");
}

inline bool contains(const ExprNode* nd, ExprKind k) {
    if (nd->kind == k) return true;
    if (nd->a && contains(nd->a.get(), k)) return true;
    if (nd->b && contains(nd->b.get(), k)) return true;
    return false;
}

// ---- printing -------------------------------------------------------------

enum class PrintCtx { top, add_rhs, mul_lhs, mul_rhs, pow_lhs, pow_rhs, neg_child };

inline bool needs_parens(const ExprNode* n, PrintCtx ctx) {
    ExprKind k = n->kind;
    bool is_addish = (k == ExprKind::add || k == ExprKind::sub);
    bool is_mulish = (k == ExprKind::mul || k == ExprKind::div_);
    switch (ctx) {
        case PrintCtx::top: return false;
        case PrintCtx::add_rhs: return is_addish;
        case PrintCtx::mul_lhs: return is_addish;
        case PrintCtx::mul_rhs: return is_addish || is_mulish;
        case PrintCtx::pow_lhs: return is_addish || is_mulish || k == ExprKind::pow_;
        case PrintCtx::pow_rhs: return is_addish || is_mulish;
        case PrintCtx::neg_child:
            return is_addish || is_mulish || k == ExprKind::pow_ ||
                   (k == ExprKind::number && n->number < 0);
    }
    return false;
}

inline void print_rec(const ExprNode* n, PrintCtx ctx, std::string& out) {
    if (needs_parens(n, ctx)) {
        out += '(';
        print_rec(n, PrintCtx::top, out);
        out += ')';
        return;
    }
    switch (n->kind) {
        case ExprKind::number: out += double_str(n->number); return;
        case ExprKind::pi: out += "pi"; return;
        case ExprKind::e: out += "e"; return;
        case ExprKind::var_x: out += "x"; return;
        case ExprKind::var_n: out += "n"; return;
        case ExprKind::sum_index: out += n->sum->index; return;
        case ExprKind::neg:
            out += '-';
            print_rec(n->a.get(), PrintCtx::neg_child, out);
            return;
        case ExprKind::sin_:
        case ExprKind::cos_:
        case ExprKind::abs_:
        case ExprKind::sqrt_:
        case ExprKind::cbrt_:
        case ExprKind::exp_:
        case ExprKind::ln_: {
            switch (n->kind) {
                case ExprKind::sin_: out += "sin"; break;
                case ExprKind::cos_: out += "cos"; break;
                case ExprKind::abs_: out += "abs"; break;
                case ExprKind::sqrt_: out += "sqrt"; break;
                case ExprKind::cbrt_: out += "cbrt"; break;
                case ExprKind::exp_: out += "exp"; break;
                default: out += "ln"; break;
            }
            out += '(';
            print_rec(n->a.get(), PrintCtx::top, out);
            out += ')';
            return;
        }
        case ExprKind::add:
            print_rec(n->a.get(), PrintCtx::top, out);
            out += " + ";
            print_rec(n->b.get(), PrintCtx::add_rhs, out);
            return;
        case ExprKind::sub:
            print_rec(n->a.get(), PrintCtx::top, out);
            out += " - ";
            print_rec(n->b.get(), PrintCtx::add_rhs, out);
            return;
        case ExprKind::mul:
            print_rec(n->a.get(), PrintCtx::mul_lhs, out);
            out += '*';
            print_rec(n->b.get(), PrintCtx::mul_rhs, out);
            return;
        case ExprKind::div_:
            print_rec(n->a.get(), PrintCtx::mul_lhs, out);
            out += '/';
            print_rec(n->b.get(), PrintCtx::mul_rhs, out);
            return;
        case ExprKind::pow_:
            print_rec(n->a.get(), PrintCtx::pow_lhs, out);
            out += '^';
            print_rec(n->b.get(), PrintCtx::pow_rhs, out);
            return;
        case ExprKind::sum: {
            const SumData& sd = *n->sum;
            out += "sum(";
            out += sd.index;
            out += '=';
            out += std::to_string(sd.lower);
            out += "..n";
            if (sd.upper_shift > 0) {
                out += '+';
                out += std::to_string(sd.upper_shift);
            } else if (sd.upper_shift < 0) {
                out += std::to_string(sd.upper_shift);
            }
            out += ": ";
            print_rec(n->a.get(), PrintCtx::top, out);
            out += ')';
            return;
        }
    }
}

inline std::string print_node(const ExprNode* n) {
    std::string out;
    print_rec(n, PrintCtx::top, out);
    return out;
}

// ---- structural equality ----------------------------------------------------

inline bool equal_nodes(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    if (a->kind == ExprKind::number && a->number != b->number) return false;
    if (a->kind == ExprKind::sum || a->kind == ExprKind::sum_index) {
        if (a->sum->index != b->sum->index || a->sum->lower != b->sum->lower ||
            a->sum->upper_shift != b->sum->upper_shift)
            return false;
    }
    if (!!a->a != !!b->a || !!a->b != !!b->b) return false;
    if (a->a && !equal_nodes(a->a.get(), b->a.get())) return false;
    if (a->b && !equal_nodes(a->b.get(), b->b.get())) return false;
    return true;
}

// ---- lexer ------------------------------------------------------------------

struct Token {
    enum Kind { num, ident, sym, end } kind = end;
    double value = 0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { tokenize(); }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Token::end; }

    bool accept_sym(std::string_view s) {
        if (peek().kind == Token::sym && peek().text == s) { next(); return true; }
        return false;
    }
    bool accept_ident(std::string_view s) {
        if (peek().kind == Token::ident && peek().text == s) { next(); return true; }
        return false;
    }
    void expect_sym(std::string_view s) {
        if (!accept_sym(s)) fail(std::string("'") + std::string(s) + "'");
    }
    void expect_ident(std::string_view s) {
        if (!accept_ident(s)) fail(std::string("'") + std::string(s) + "'");
    }
    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string got = t.kind == Token::end ? "end of input" : "'" + t.text + "'";
        throw ParseError("unexpected " + got, t.offset, expected);
    }

private:
    void tokenize() {
        std::size_t i = 0;
        while (i < src_.size()) {
            char c = src_[i];
            if (c == '#') {  // comment to end of line
                while (i < src_.size() && src_[i] != '\n') ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = i;
                while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
                if (i + 1 < src_.size() && src_[i] == '.' &&
                    std::isdigit(static_cast<unsigned char>(src_[i + 1]))) {
                    ++i;
                    while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
                }
                if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
                    std::size_t j = i + 1;
                    if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
                    if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                        i = j;
                        while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i])))
                            ++i;
                    }
                }
                Token t;
                t.kind = Token::num;
                t.text = std::string(src_.substr(start, i - start));
                t.offset = start;
                auto [p, ec] = std::from_chars(src_.data() + start, src_.data() + i, t.value);
                if (ec != std::errc() || p != src_.data() + i)
                    throw ParseError("bad number literal '" + t.text + "'", start, "number");
                toks_.push_back(std::move(t));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = i;
                while (i < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i])) ||
                                           src_[i] == '_'))
                    ++i;
                Token t;
                t.kind = Token::ident;
                t.text = std::string(src_.substr(start, i - start));
                t.offset = start;
                toks_.push_back(std::move(t));
                continue;
            }
            // two-character symbols first
            if (i + 1 < src_.size()) {
                std::string_view two = src_.substr(i, 2);
                if (two == ".." || two == ">=" || two == "<=") {
                    Token t;
                    t.kind = Token::sym;
                    t.text = std::string(two);
                    t.offset = i;
                    toks_.push_back(std::move(t));
                    i += 2;
                    continue;
                }
            }
            static constexpr std::string_view singles = "+-*/^()[],:;=<>";
            if (singles.find(c) != std::string_view::npos) {
                Token t;
                t.kind = Token::sym;
                t.text = std::string(1, c);
                t.offset = i;
                toks_.push_back(std::move(t));
                ++i;
                continue;
            }
            throw ParseError(std::string("stray character '") + c + "'", i, "");
        }
        Token t;
        t.kind = Token::end;
        t.offset = src_.size();
        toks_.push_back(std::move(t));
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---- parser -----------------------------------------------------------------

struct ParseCtx {
    std::string sum_index;  // active sum index name, empty if none
};

ExprPtr parse_expr(Lexer& lx, ParseCtx& ctx);  // forward

inline long long expect_int(Lexer& lx) {
    bool negate = lx.accept_sym("-");
    const Token& t = lx.peek();
    if (t.kind != Token::num || !is_integer(t.value)) lx.fail("integer");
    lx.next();
    long long v = static_cast<long long>(t.value);
    return negate ? -v : v;
}

inline ExprPtr parse_sum(Lexer& lx, ParseCtx& ctx) {
    // "sum" already consumed
    lx.expect_sym("(");
    const Token& idx = lx.peek();
    if (idx.kind != Token::ident) lx.fail("sum index name");
    std::string name = idx.text;
    static constexpr const char* reserved[] = {"x",    "n",  "pi",   "e",    "sin", "cos",
                                               "abs",  "sqrt", "cbrt", "exp", "ln",  "sum"};
    for (const char* r : reserved)
        if (name == r)
            throw ParseError("sum index shadows reserved name '" + name + "'", idx.offset, "");
    if (!ctx.sum_index.empty())
        throw ParseError("nested sums are not supported", idx.offset, "");
    lx.next();
    lx.expect_sym("=");
    long long lower = expect_int(lx);
    lx.expect_sym("..");
    lx.expect_ident("n");
    long long shift = 0;
    if (lx.accept_sym("+")) {
        shift = expect_int(lx);
    } else if (lx.accept_sym("-")) {
        shift = -expect_int(lx);
    }
    lx.expect_sym(":");
    ParseCtx inner;
    inner.sum_index = name;
    ExprPtr body = parse_expr(lx, inner);
    lx.expect_sym(")");
    if (contains(body.get(), ExprKind::var_x) || contains(body.get(), ExprKind::var_n))
        throw ParseError("sum body may reference only its index variable", lx.peek().offset, "");
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::sum;
    node->a = std::move(body);
    node->sum = std::make_shared<SumData>();
    node->sum->index = name;
    node->sum->lower = lower;
    node->sum->upper_shift = shift;
    return node;
}

inline ExprPtr parse_atom(Lexer& lx, ParseCtx& ctx) {
    const Token& t = lx.peek();
    if (t.kind == Token::num) {
        lx.next();
        return make_num(t.value);
    }
    if (t.kind == Token::sym && t.text == "-") {
        lx.next();
        // Fold a sign that directly precedes a literal into the literal itself,
        // matching what the neg() builder does. Keeps print/parse round-trips
        // structural without changing precedence ('-' is still consumed here).
        if (lx.peek().kind == Token::num) {
            double v = lx.peek().value;
            lx.next();
            return make_num(-v);
        }
        return make1(ExprKind::neg, parse_atom(lx, ctx));
    }
    if (t.kind == Token::sym && t.text == "(") {
        lx.next();
        ExprPtr inner = parse_expr(lx, ctx);
        lx.expect_sym(")");
        return inner;
    }
    if (t.kind == Token::ident) {
        const std::string& name = t.text;
        if (name == "x") { lx.next(); return make(ExprKind::var_x); }
        if (name == "n") { lx.next(); return make(ExprKind::var_n); }
        if (name == "pi") { lx.next(); return make(ExprKind::pi); }
        if (name == "e") { lx.next(); return make(ExprKind::e); }
        if (name == "sum") { lx.next(); return parse_sum(lx, ctx); }
        ExprKind fk;
        if (name == "sin") fk = ExprKind::sin_;
        else if (name == "cos") fk = ExprKind::cos_;
        else if (name == "abs") fk = ExprKind::abs_;
        else if (name == "sqrt") fk = ExprKind::sqrt_;
        else if (name == "cbrt") fk = ExprKind::cbrt_;
        else if (name == "exp") fk = ExprKind::exp_;
        else if (name == "ln") fk = ExprKind::ln_;
        else if (!ctx.sum_index.empty() && name == ctx.sum_index) {
            lx.next();
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprKind::sum_index;
            node->sum = std::make_shared<SumData>();
            node->sum->index = name;
            return node;
        } else {
            lx.fail("number, variable, function, '(' or '-'");
        }
        lx.next();
        lx.expect_sym("(");
        ExprPtr arg = parse_expr(lx, ctx);
        lx.expect_sym(")");
        return make1(fk, std::move(arg));
    }
    lx.fail("number, variable, function, '(' or '-'");
}

inline ExprPtr parse_factor(Lexer& lx, ParseCtx& ctx) {
    ExprPtr base = parse_atom(lx, ctx);
    if (lx.accept_sym("^")) {
        ExprPtr expo = parse_factor(lx, ctx);
        return make2(ExprKind::pow_, std::move(base), std::move(expo));
    }
    return base;
}

inline ExprPtr parse_term(Lexer& lx, ParseCtx& ctx) {
    ExprPtr lhs = parse_factor(lx, ctx);
    for (;;) {
        if (lx.accept_sym("*")) lhs = make2(ExprKind::mul, std::move(lhs), parse_factor(lx, ctx));
        else if (lx.accept_sym("/")) lhs = make2(ExprKind::div_, std::move(lhs), parse_factor(lx, ctx));
        else return lhs;
    }
}

inline ExprPtr parse_expr(Lexer& lx, ParseCtx& ctx) {
    ExprPtr lhs = parse_term(lx, ctx);
    for (;;) {
        if (lx.accept_sym("+")) lhs = make2(ExprKind::add, std::move(lhs), parse_term(lx, ctx));
        else if (lx.accept_sym("-")) lhs = make2(ExprKind::sub, std::move(lhs), parse_term(lx, ctx));
        else return lhs;
    }
}

}  // namespace detail

// Immutable value-semantics wrapper around a shared expression tree.
class Expr {
public:
    Expr() : node_(detail::make_num(0)) {}
    explicit Expr(ExprPtr n) : node_(std::move(n)) {}

    // Parses a complete string; trailing input is an error.
    static Expr parse(std::string_view src) {
        detail::Lexer lx(src);
        detail::ParseCtx ctx;
        ExprPtr root = detail::parse_expr(lx, ctx);
        if (!lx.at_end()) lx.fail("end of input");
        return Expr(std::move(root));
    }

    // ---- builders (fold trivial identities; used by diff and by tests) -----
    static Expr number(double v) { return Expr(detail::make_num(v)); }
    static Expr x() { return Expr(detail::make(ExprKind::var_x)); }
    static Expr n() { return Expr(detail::make(ExprKind::var_n)); }
    static Expr pi() { return Expr(detail::make(ExprKind::pi)); }
    static Expr e() { return Expr(detail::make(ExprKind::e)); }

    static Expr neg(Expr a) {
        if (a.kind() == ExprKind::number) return number(-a.node_->number);
        if (a.kind() == ExprKind::neg) return Expr(a.node_->a);
        return Expr(detail::make1(ExprKind::neg, a.node_));
    }
    static Expr add(Expr a, Expr b) {
        if (is_const(a, 0)) return b;
        if (is_const(b, 0)) return a;
        return Expr(detail::make2(ExprKind::add, a.node_, b.node_));
    }
    static Expr sub(Expr a, Expr b) {
        if (is_const(b, 0)) return a;
        if (is_const(a, 0)) return neg(b);
        return Expr(detail::make2(ExprKind::sub, a.node_, b.node_));
    }
    static Expr mul(Expr a, Expr b) {
        if (is_const(a, 0) || is_const(b, 0)) return number(0);
        if (is_const(a, 1)) return b;
        if (is_const(b, 1)) return a;
        return Expr(detail::make2(ExprKind::mul, a.node_, b.node_));
    }
    static Expr div(Expr a, Expr b) {
        if (is_const(a, 0)) return number(0);
        if (is_const(b, 1)) return a;
        return Expr(detail::make2(ExprKind::div_, a.node_, b.node_));
    }
    static Expr pow(Expr a, Expr b) {
        if (is_const(b, 1)) return a;
        return Expr(detail::make2(ExprKind::pow_, a.node_, b.node_));
    }
    static Expr sin(Expr a) { return Expr(detail::make1(ExprKind::sin_, a.node_)); }
    static Expr cos(Expr a) { return Expr(detail::make1(ExprKind::cos_, a.node_)); }
    static Expr abs(Expr a) { return Expr(detail::make1(ExprKind::abs_, a.node_)); }
    static Expr sqrt(Expr a) { return Expr(detail::make1(ExprKind::sqrt_, a.node_)); }
    static Expr cbrt(Expr a) { return Expr(detail::make1(ExprKind::cbrt_, a.node_)); }
    static Expr exp(Expr a) { return Expr(detail::make1(ExprKind::exp_, a.node_)); }
    static Expr ln(Expr a) { return Expr(detail::make1(ExprKind::ln_, a.node_)); }

    // ---- evaluation ---------------------------------------------------------
    double eval_x(double x) const {
        detail::EvalEnv env;
        env.x = x;
        return detail::eval_node(node_.get(), env);
    }
    double eval_xn(double x, long long n) const {
        detail::EvalEnv env;
        env.x = x;
        env.n = n;
        return detail::eval_node(node_.get(), env);
    }
    double eval_n(long long n) const {
        detail::EvalEnv env;
        env.n = n;
        return detail::eval_node(node_.get(), env);
    }
    double eval_const() const {
        detail::EvalEnv env;
        return detail::eval_node(node_.get(), env);
    }

    // Derivative with respect to x. n and sum nodes are constants. abs
    // differentiates to a/abs(a) * a', which evaluates correctly away from the
    // kink and raises EvalError exactly there.
    Expr diff() const { return diff_node(node_); }

    std::string str() const { return detail::print_node(node_.get()); }

    bool has_x() const { return detail::contains(node_.get(), ExprKind::var_x); }
    bool has_n() const { return detail::contains(node_.get(), ExprKind::var_n); }
    bool has_sum() const { return detail::contains(node_.get(), ExprKind::sum); }

    ExprKind kind() const { return node_->kind; }
    const ExprPtr& node() const { return node_; }

    friend bool operator==(const Expr& a, const Expr& b) {
        return detail::equal_nodes(a.node_.get(), b.node_.get());
    }
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    static bool is_const(const Expr& a, double v) {
        return a.kind() == ExprKind::number && a.node_->number == v;
    }

    static Expr diff_node(const ExprPtr& nd) {
        Expr a = nd->a ? Expr(nd->a) : Expr();
        Expr b = nd->b ? Expr(nd->b) : Expr();
        switch (nd->kind) {
            case ExprKind::number:
            case ExprKind::pi:
            case ExprKind::e:
            case ExprKind::var_n:
            case ExprKind::sum_index:
            case ExprKind::sum:
                return number(0);
            case ExprKind::var_x: return number(1);
            case ExprKind::neg: return neg(diff_node(nd->a));
            case ExprKind::sin_: return mul(cos(a), diff_node(nd->a));
            case ExprKind::cos_: return neg(mul(sin(a), diff_node(nd->a)));
            case ExprKind::abs_: return mul(div(a, abs(a)), diff_node(nd->a));
            case ExprKind::sqrt_: return div(diff_node(nd->a), mul(number(2), sqrt(a)));
            case ExprKind::cbrt_:
                return div(diff_node(nd->a), mul(number(3), pow(cbrt(a), number(2))));
            case ExprKind::exp_: return mul(exp(a), diff_node(nd->a));
            case ExprKind::ln_: return div(diff_node(nd->a), a);
            case ExprKind::add: return add(diff_node(nd->a), diff_node(nd->b));
            case ExprKind::sub: return sub(diff_node(nd->a), diff_node(nd->b));
            case ExprKind::mul:
                return add(mul(diff_node(nd->a), b), mul(a, diff_node(nd->b)));
            case ExprKind::div_:
                return div(sub(mul(diff_node(nd->a), b), mul(a, diff_node(nd->b))),
                           pow(b, number(2)));
            case ExprKind::pow_: {
                Expr da = diff_node(nd->a);
                if (!Expr(nd->b).has_x()) {
                    // d/dx u^c = c * u^(c-1) * u'
                    return mul(mul(b, pow(a, sub(b, number(1)))), da);
                }
                // general: u^v * (v' ln u + v u'/u)
                Expr dv = diff_node(nd->b);
                return mul(pow(a, b), add(mul(dv, ln(a)), mul(b, div(da, a))));
            }
        }
        throw DiffError("unreachable expression kind");
    }

    ExprPtr node_;
};

}  // namespace regcalc
