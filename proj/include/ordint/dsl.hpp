#pragma once

#include <algorithm>
#include <cctype>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/integrand.hpp"
#include "ordint/lattice.hpp"
#include "ordint/measure.hpp"
#include "ordint/sets.hpp"

// Expression language for integrands, measures and capacities.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | ident '(' args ')' | '(' expr ')'
//   cond    := expr ('<' | '<=' | '>' | '>=') expr
//   interval:= ('[' | '(') number ',' number (']' | ')')
//
// Functions: pow sqrt exp log sin cos abs min max, piecewise(cond, a, b),
// indicator(interval, ...), dyadic_rational(), vec(e1, ..., ed),
// elemseries(coef in i, dyadic | uniform(n)).
// Measures: length, counting, vector(length, s1, ...), capacity(m),
// capacity(pow(length, k)).

namespace ordint::dsl {

class ParseError : public StructuralError {
public:
    ParseError(std::size_t position, std::string expected, const std::string& found)
        : StructuralError("harness-cli", "parse_spec",
                          "at position " + std::to_string(position) + ": expected " + expected + ", found " + found),
          position_(position),
          expected_(std::move(expected)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

enum class Op : unsigned char {
    none, x, i, pi, dyadic, sqrt, exp, log, sin, cos, abs, pow, min, max, piecewise, indicator, vec, elemseries,
    lt, le, gt, ge
};

struct Node {
    enum class Kind { number, ident, neg, add, sub, mul, div, pow, call, compare, interval };

    Kind kind = Kind::number;
    double value = 0.0;  ///< number
    std::string name;    ///< ident, call, compare operator
    std::vector<Node> args;
    Piece piece{0.0, 0.0, true, true};  ///< interval

    // Filled by resolve(); not part of the identity of a node.
    Op op = Op::none;
    std::shared_ptr<const IntervalSet> set;  ///< indicator union, or truth set of x-vs-constant

    bool operator==(const Node& o) const {
        return kind == o.kind && (kind != Kind::number || value == o.value) && name == o.name && args == o.args &&
               (kind != Kind::interval || (piece.lo == o.piece.lo && piece.hi == o.piece.hi &&
                                           piece.lo_closed == o.piece.lo_closed &&
                                           piece.hi_closed == o.piece.hi_closed));
    }
};

namespace detail {

inline void resolve(Node& n);

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Node parse_all() {
        Node n = expr();
        skip();
        if (pos_ != s_.size()) fail("end of input or operator");
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string found() const {
        if (pos_ >= s_.size()) return "end of input";
        return "'" + std::string(1, s_[pos_]) + "'";
    }
    [[noreturn]] void fail(const std::string& expected) const { throw ParseError(pos_, expected, found()); }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }
    static Node binary(Node::Kind k, Node a, Node b) {
        Node n;
        n.kind = k;
        n.args = {std::move(a), std::move(b)};
        return n;
    }

    Node expr() {
        Node n = term();
        for (;;) {
            if (accept('+'))
                n = binary(Node::Kind::add, std::move(n), term());
            else if (accept('-'))
                n = binary(Node::Kind::sub, std::move(n), term());
            else
                return n;
        }
    }
    Node term() {
        Node n = unary();
        for (;;) {
            if (accept('*'))
                n = binary(Node::Kind::mul, std::move(n), unary());
            else if (accept('/'))
                n = binary(Node::Kind::div, std::move(n), unary());
            else
                return n;
        }
    }
    Node unary() {
        if (accept('-')) {
            Node n;
            n.kind = Node::Kind::neg;
            n.args = {unary()};
            return n;
        }
        Node base = primary();
        if (accept('^')) return binary(Node::Kind::pow, std::move(base), unary());
        return base;
    }
    double number_literal() {
        skip();
        const std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '-' || s_[p] == '+')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const char* b = s_.data() + start;
        const char* e = s_.data() + pos_;
        if (*b == '+') ++b;
        auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e || b == e) {
            pos_ = start;
            fail("number");
        }
        return v;
    }
    Node primary() {
        skip();
        if (pos_ >= s_.size()) fail("number, identifier or '('");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            Node n;
            n.value = number_literal();
            return n;
        }
        if (c == '(') {
            ++pos_;
            Node n = expr();
            expect(')');
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            Node n;
            n.name = std::string(s_.substr(start, pos_ - start));
            if (!accept('(')) {
                n.kind = Node::Kind::ident;
                return n;
            }
            n.kind = Node::Kind::call;
            if (accept(')')) return n;
            do {
                n.args.push_back(argument(n.name, n.args.size()));
            } while (accept(','));
            expect(')');
            return n;
        }
        fail("number, identifier or '('");
    }
    Node argument(const std::string& fn, std::size_t index) {
        if (fn == "indicator") return interval();
        if (fn == "piecewise" && index == 0) return condition();
        return expr();
    }
    Node condition() {
        Node lhs = expr();
        skip();
        std::string op;
        if (accept('<'))
            op = accept('=') ? "<=" : "<";
        else if (accept('>'))
            op = accept('=') ? ">=" : ">";
        else
            fail("comparison operator");
        Node n = binary(Node::Kind::compare, std::move(lhs), expr());
        n.name = op;
        return n;
    }
    Node interval() {
        Node n;
        n.kind = Node::Kind::interval;
        if (accept('['))
            n.piece.lo_closed = true;
        else if (accept('('))
            n.piece.lo_closed = false;
        else
            fail("'[' or '('");
        n.piece.lo = number_literal();
        expect(',');
        n.piece.hi = number_literal();
        if (accept(']'))
            n.piece.hi_closed = true;
        else if (accept(')'))
            n.piece.hi_closed = false;
        else
            fail("']' or ')'");
        return n;
    }
};

inline int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::add:
        case Node::Kind::sub: return 1;
        case Node::Kind::mul:
        case Node::Kind::div: return 2;
        case Node::Kind::neg: return 3;
        case Node::Kind::pow: return 4;
        default: return 5;
    }
}

}  // namespace detail

inline Node parse_spec(std::string_view text) {
    Node n = detail::Parser(text).parse_all();
    detail::resolve(n);
    return n;
}

/// Canonical text; parse_spec(print(n)) == n for every parsed n.
inline std::string print(const Node& n) {
    auto wrap = [](const Node& c, bool paren) { return paren ? "(" + print(c) + ")" : print(c); };
    const int p = detail::precedence(n);
    switch (n.kind) {
        case Node::Kind::number: return format_number(n.value);
        case Node::Kind::ident: return n.name;
        case Node::Kind::neg: return "-" + wrap(n.args[0], detail::precedence(n.args[0]) < 3);
        case Node::Kind::add:
        case Node::Kind::sub:
        case Node::Kind::mul:
        case Node::Kind::div: {
            const char* op = n.kind == Node::Kind::add ? " + "
                             : n.kind == Node::Kind::sub ? " - "
                             : n.kind == Node::Kind::mul ? "*"
                                                         : "/";
            return wrap(n.args[0], detail::precedence(n.args[0]) < p) + op +
                   wrap(n.args[1], detail::precedence(n.args[1]) <= p);
        }
        case Node::Kind::pow:
            return wrap(n.args[0], detail::precedence(n.args[0]) <= 4) + "^" +
                   wrap(n.args[1], detail::precedence(n.args[1]) < 3);
        case Node::Kind::compare: return print(n.args[0]) + " " + n.name + " " + print(n.args[1]);
        case Node::Kind::interval:
            return std::string(n.piece.lo_closed ? "[" : "(") + format_number(n.piece.lo) + ", " +
                   format_number(n.piece.hi) + (n.piece.hi_closed ? "]" : ")");
        case Node::Kind::call: {
            std::string out = n.name + "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) out += (i ? ", " : "") + print(n.args[i]);
            return out + ")";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Interval enclosures with outward rounding.

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double up(double v) {
    if (!(v < kInf)) return v;
    if (v == 0.0) return std::numeric_limits<double>::denorm_min();
    auto bits = std::bit_cast<std::uint64_t>(v);
    bits = v > 0.0 ? bits + 1 : bits - 1;
    return std::bit_cast<double>(bits);
}
inline double down(double v) { return -up(-v); }

// Error-free transforms decide the rounding direction of + and *.
inline Range add_point(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return {std::isnan(s) ? -kInf : s, std::isnan(s) ? kInf : s};
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {e < 0.0 ? down(s) : s, e > 0.0 ? up(s) : s};
}
inline Range mul_point(double a, double b) {
    if (a == 0.0 || b == 0.0) return {0.0, 0.0};
    const double p = a * b;
    if (!std::isfinite(p)) return {p, p};
    const double e = std::fma(a, b, -p);
    return {e < 0.0 ? down(p) : p, e > 0.0 ? up(p) : p};
}
inline Range div_point(double a, double b) {
    if (a == 0.0) return {0.0, 0.0};
    const double q = a / b;
    if (!std::isfinite(q) || std::isinf(b)) return {std::isfinite(q) ? down(q) : q, std::isfinite(q) ? up(q) : q};
    const double r = std::fma(-q, b, a);
    const double sign = (r > 0.0) == (b > 0.0) ? 1.0 : -1.0;
    if (r == 0.0) return {q, q};
    return sign > 0.0 ? Range{q, up(q)} : Range{down(q), q};
}
/// Last-resort widening for library functions.
inline Range widen(double v, int ulps = 2) {
    if (std::isnan(v)) return {-kInf, kInf};
    double lo = v, hi = v;
    for (int k = 0; k < ulps; ++k) {
        lo = down(lo);
        hi = up(hi);
    }
    return {lo, hi};
}
inline Range hull(Range a, Range b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }
inline Range hull4(Range a, Range b, Range c, Range d) { return hull(hull(a, b), hull(c, d)); }

inline Range r_add(Range a, Range b) { return {add_point(a.lo, b.lo).lo, add_point(a.hi, b.hi).hi}; }
inline Range r_neg(Range a) { return {-a.hi, -a.lo}; }
inline Range r_sub(Range a, Range b) { return r_add(a, r_neg(b)); }
inline Range r_mul(Range a, Range b) {
    return hull4(mul_point(a.lo, b.lo), mul_point(a.lo, b.hi), mul_point(a.hi, b.lo), mul_point(a.hi, b.hi));
}
inline Range r_div(Range a, Range b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) return {-kInf, kInf};
    return hull4(div_point(a.lo, b.lo), div_point(a.lo, b.hi), div_point(a.hi, b.lo), div_point(a.hi, b.hi));
}
inline Range r_abs(Range a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return r_neg(a);
    return {0.0, std::max(-a.lo, a.hi)};
}
inline Range r_min(Range a, Range b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }
inline Range r_max(Range a, Range b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
inline Range r_ipow(Range a, long n) {
    if (n == 0) return {1.0, 1.0};
    if (n < 0) return r_div({1.0, 1.0}, r_ipow(a, -n));
    Range base = (n % 2 == 0) ? r_abs(a) : a;
    auto point = [n](double v) {
        Range r{1.0, 1.0};
        for (long k = 0; k < n; ++k) r = r_mul(r, {v, v});
        return r;
    };
    return hull(point(base.lo), point(base.hi));
}
inline Range r_pow(Range a, Range b) {
    if (b.lo == b.hi && std::trunc(b.lo) == b.lo && std::abs(b.lo) <= 64.0) return r_ipow(a, static_cast<long>(b.lo));
    if (a.lo < 0.0) return {-kInf, kInf};
    // x^y is monotone in each argument on [0, inf) x R: corners bound the box.
    Range out{kInf, -kInf};
    for (double x : {a.lo, a.hi})
        for (double y : {b.lo, b.hi}) out = hull(out, widen(std::pow(x, y)));
    out.lo = std::max(out.lo, 0.0);
    return out;
}
template <class F>
inline Range r_monotone(Range a, F f, double dom_lo = -kInf) {
    if (a.lo < dom_lo) return {-kInf, kInf};
    const Range l = widen(f(a.lo)), h = widen(f(a.hi));
    return {l.lo, h.hi};
}
inline Range r_sin(Range a, double phase) {
    // sin(x + phase); cos uses phase pi/2.
    if (!a.finite() || a.width() >= 2.0 * std::numbers::pi) return {-1.0, 1.0};
    Range out = hull(widen(std::sin(a.lo + phase), 4), widen(std::sin(a.hi + phase), 4));
    const double pi = std::numbers::pi;
    // Critical points x + phase = pi/2 + k pi, tested with margin.
    const double k0 = std::floor((a.lo + phase - pi / 2) / pi) - 1;
    for (double k = k0; k <= k0 + 4; ++k) {
        const double c = pi / 2 + k * pi - phase;
        if (c >= a.lo - 1e-9 && c <= a.hi + 1e-9) {
            if (std::fmod(std::abs(k), 2.0) == 0.0)
                out.hi = 1.0;
            else
                out.lo = -1.0;
        }
    }
    return {std::max(out.lo, -1.0), std::min(out.hi, 1.0)};
}

/// Value and x-derivative enclosures.
struct Dual {
    Range v;
    Range d;
};

inline bool is_ident(const Node& n, const char* name) { return n.kind == Node::Kind::ident && n.name == name; }

/// Exact truth set of `x op c` / `c op x` comparisons, if the comparison has that shape.
inline std::optional<IntervalSet> comparison_set(const Node& cmp) {
    const Node& a = cmp.args[0];
    const Node& b = cmp.args[1];
    auto constant = [](const Node& n) -> std::optional<double> {
        if (n.kind == Node::Kind::number) return n.value;
        if (n.kind == Node::Kind::neg && n.args[0].kind == Node::Kind::number) return -n.args[0].value;
        return std::nullopt;
    };
    std::string op = cmp.name;
    std::optional<double> c;
    if (is_ident(a, "x")) {
        c = constant(b);
    } else if (is_ident(b, "x")) {
        c = constant(a);
        if (op == "<") op = ">";
        else if (op == "<=") op = ">=";
        else if (op == ">") op = "<";
        else op = "<=";
    }
    if (!c) return std::nullopt;
    const double lo = std::numeric_limits<double>::lowest(), hi = std::numeric_limits<double>::max();
    if (op == "<") return IntervalSet::from_piece({lo, *c, true, false});
    if (op == "<=") return IntervalSet::from_piece({lo, *c, true, true});
    if (op == ">") return IntervalSet::from_piece({*c, hi, false, true});
    return IntervalSet::from_piece({*c, hi, true, true});
}

inline IntervalSet interval_union(const Node& call) {
    IntervalSet::Pieces ps;
    for (const auto& a : call.args) ps.push_back(a.piece);
    return IntervalSet::from_pieces(std::move(ps));
}

inline bool is_dyadic_rational(double x, int m = 30) {
    const double s = std::ldexp(x, m);
    return std::isfinite(s) && s == std::floor(s);
}

inline void arity(const Node& n, std::size_t lo, std::size_t hi) {
    if (n.args.size() < lo || n.args.size() > hi)
        throw StructuralError("harness-cli", "parse_spec",
                              "arity mismatch: " + n.name + " takes " +
                                  (lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi)) +
                                  " arguments, got " + std::to_string(n.args.size()));
}

/// Static checks: identifiers and arities.
inline void validate(const Node& n, bool allow_i) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::number: return;
        case K::ident:
            if (n.name == "x" || n.name == "pi" || n.name == "dyadic_rational" || (allow_i && n.name == "i")) return;
            throw StructuralError("harness-cli", "parse_spec", "unknown identifier '" + n.name + "'");
        case K::interval: return;
        case K::compare:
        case K::neg:
        case K::add:
        case K::sub:
        case K::mul:
        case K::div:
        case K::pow:
            for (const auto& a : n.args) validate(a, allow_i);
            return;
        case K::call: break;
    }
    const std::string& f = n.name;
    if (f == "sqrt" || f == "exp" || f == "log" || f == "sin" || f == "cos" || f == "abs")
        arity(n, 1, 1);
    else if (f == "pow" || f == "min" || f == "max")
        arity(n, 2, 2);
    else if (f == "piecewise")
        arity(n, 3, 3);
    else if (f == "indicator")
        arity(n, 1, 64);
    else if (f == "dyadic_rational")
        arity(n, 0, 0);
    else if (f == "vec")
        arity(n, 1, 64);
    else if (f == "elemseries") {
        arity(n, 2, 2);
        validate(n.args[0], true);
        const Node& s = n.args[1];
        const bool ok = is_ident(s, "dyadic") ||
                        (s.kind == K::call && s.name == "uniform" && s.args.size() == 1 &&
                         s.args[0].kind == K::number && s.args[0].value >= 1 && std::trunc(s.args[0].value) == s.args[0].value);
        if (!ok) throw StructuralError("harness-cli", "parse_spec", "elemseries schedule must be dyadic or uniform(n)");
        return;
    } else
        throw StructuralError("harness-cli", "parse_spec", "unknown identifier '" + f + "'");
    for (const auto& a : n.args) validate(a, allow_i);
}

inline Op op_for(const Node& n) {
    static const std::pair<const char*, Op> table[] = {
        {"x", Op::x},       {"i", Op::i},         {"pi", Op::pi},     {"dyadic_rational", Op::dyadic},
        {"sqrt", Op::sqrt}, {"exp", Op::exp},     {"log", Op::log},   {"sin", Op::sin},
        {"cos", Op::cos},   {"abs", Op::abs},     {"pow", Op::pow},   {"min", Op::min},
        {"max", Op::max},   {"piecewise", Op::piecewise}, {"indicator", Op::indicator},
        {"vec", Op::vec},   {"elemseries", Op::elemseries}};
    if (n.kind == Node::Kind::pow) return Op::pow;
    if (n.kind == Node::Kind::compare)
        return n.name == "<" ? Op::lt : n.name == "<=" ? Op::le : n.name == ">" ? Op::gt : Op::ge;
    if (n.kind != Node::Kind::ident && n.kind != Node::Kind::call) return Op::none;
    for (const auto& [name, op] : table)
        if (n.name == name) return op;
    return Op::none;
}

/// Fills the dispatch tags and cached sets of a tree.
inline void resolve(Node& n) {
    for (auto& a : n.args) resolve(a);
    n.op = op_for(n);
    if (n.op == Op::indicator) n.set = std::make_shared<const IntervalSet>(interval_union(n));
    if (n.kind == Node::Kind::compare)
        if (auto cs = comparison_set(n)) n.set = std::make_shared<const IntervalSet>(std::move(*cs));
}

/// 1: cell inside s, 0: disjoint, -1: neither or unknown.
inline int relate(const PavingSet& cell, const IntervalSet& s) {
    if (!cell.is_interval()) return -1;
    const auto& cp = cell.intervals().pieces();
    if (cp.size() == 1 && s.pieces().size() == 1) {
        const Piece& a = cp.front();
        const Piece& b = s.pieces().front();
        const bool in = (a.lo > b.lo || (a.lo == b.lo && (b.lo_closed || !a.lo_closed))) &&
                        (a.hi < b.hi || (a.hi == b.hi && (b.hi_closed || !a.hi_closed)));
        if (in) return 1;
        const bool out = a.hi < b.lo || (a.hi == b.lo && !(a.hi_closed && b.lo_closed)) || b.hi < a.lo ||
                         (b.hi == a.lo && !(b.hi_closed && a.lo_closed));
        return out ? 0 : -1;
    }
    const PavingSet ps(s);
    if (cell.subset_of(ps)) return 1;
    if (cell.disjoint_from(ps)) return 0;
    return -1;
}

[[noreturn]] inline void not_scalar(const Node& n) {
    throw StructuralError("harness-cli", "eval", "'" + n.name + "' is not a scalar expression");
}

/// Point evaluation of a resolved scalar node.
inline double eval_scalar(const Node& n, double x, double i) {
    using K = Node::Kind;
    auto arg = [&](std::size_t k) { return eval_scalar(n.args[k], x, i); };
    switch (n.kind) {
        case K::number: return n.value;
        case K::neg: return -arg(0);
        case K::add: return arg(0) + arg(1);
        case K::sub: return arg(0) - arg(1);
        case K::mul: return arg(0) * arg(1);
        case K::div: return arg(0) / arg(1);
        case K::interval: return n.piece.contains(x) ? 1.0 : 0.0;
        default: break;
    }
    switch (n.op) {
        case Op::x: return x;
        case Op::i: return i;
        case Op::pi: return std::numbers::pi;
        case Op::dyadic: return is_dyadic_rational(x) ? 1.0 : 0.0;
        case Op::sqrt: return std::sqrt(arg(0));
        case Op::exp: return std::exp(arg(0));
        case Op::log: return std::log(arg(0));
        case Op::sin: return std::sin(arg(0));
        case Op::cos: return std::cos(arg(0));
        case Op::abs: return std::abs(arg(0));
        case Op::pow: return std::pow(arg(0), arg(1));
        case Op::min: return std::min(arg(0), arg(1));
        case Op::max: return std::max(arg(0), arg(1));
        case Op::piecewise: return arg(0) != 0.0 ? arg(1) : arg(2);
        case Op::indicator: return n.set->contains(x) ? 1.0 : 0.0;
        case Op::lt: return arg(0) < arg(1);
        case Op::le: return arg(0) <= arg(1);
        case Op::gt: return arg(0) > arg(1);
        case Op::ge: return arg(0) >= arg(1);
        default: not_scalar(n);
    }
}

/// Enclosure of a resolved scalar node over a cell, and (when D) of its
/// x-derivative. `xr` is the closure of the cell; set tests use the cell
/// itself so half-open cells decide indicators exactly.
template <bool D>
Dual eval_dual(const Node& n, const PavingSet& cell, Range xr, Range ir) {
    using K = Node::Kind;
    const Range zero{0.0, 0.0}, any{-kInf, kInf};
    auto arg = [&](std::size_t k) { return eval_dual<D>(n.args[k], cell, xr, ir); };
    switch (n.kind) {
        case K::number: return {{n.value, n.value}, zero};
        case K::neg: {
            const Dual a = arg(0);
            return {r_neg(a.v), D ? r_neg(a.d) : zero};
        }
        case K::add: {
            const Dual a = arg(0), b = arg(1);
            return {r_add(a.v, b.v), D ? r_add(a.d, b.d) : zero};
        }
        case K::sub: {
            const Dual a = arg(0), b = arg(1);
            return {r_sub(a.v, b.v), D ? r_sub(a.d, b.d) : zero};
        }
        case K::mul: {
            const Dual a = arg(0), b = arg(1);
            return {r_mul(a.v, b.v), D ? r_add(r_mul(a.d, b.v), r_mul(a.v, b.d)) : zero};
        }
        case K::div: {
            const Dual a = arg(0), b = arg(1);
            return {r_div(a.v, b.v), D ? r_div(r_sub(r_mul(a.d, b.v), r_mul(a.v, b.d)), r_mul(b.v, b.v)) : zero};
        }
        case K::interval: return {{0.0, 1.0}, any};
        default: break;
    }
    switch (n.op) {
        case Op::x: return {xr, {1.0, 1.0}};
        case Op::i: return {ir, zero};
        case Op::pi: return {{down(std::numbers::pi), up(std::numbers::pi)}, zero};
        case Op::dyadic: {
            if (xr.lo == xr.hi) {
                const double v = is_dyadic_rational(xr.lo) ? 1.0 : 0.0;
                return {{v, v}, zero};
            }
            return {{0.0, 1.0}, any};
        }
        case Op::pow: {
            const Dual a = arg(0), b = arg(1);
            const Range v = r_pow(a.v, b.v);
            if (!D) return {v, zero};
            Range d;
            if (b.d.lo == 0.0 && b.d.hi == 0.0)
                d = r_mul(r_mul(b.v, r_pow(a.v, r_sub(b.v, {1.0, 1.0}))), a.d);
            else if (a.d.lo == 0.0 && a.d.hi == 0.0)
                d = r_mul(v, r_mul(b.d, r_monotone(a.v, [](double t) { return std::log(t); }, 0.0)));
            else
                d = any;
            if (std::isnan(d.lo) || std::isnan(d.hi)) d = any;
            return {v, d};
        }
        case Op::lt:
        case Op::le:
        case Op::gt:
        case Op::ge: {
            if (n.set) {
                const int rel = relate(cell, *n.set);
                if (rel == 1) return {{1.0, 1.0}, zero};
                if (rel == 0) return {{0.0, 0.0}, zero};
                return {{0.0, 1.0}, any};
            }
            const Range a = arg(0).v, b = arg(1).v;
            const bool strict = n.op == Op::lt || n.op == Op::gt;
            const bool less = n.op == Op::lt || n.op == Op::le;
            const Range l = less ? a : b;
            const Range r = less ? b : a;
            if (strict ? l.hi < r.lo : l.hi <= r.lo) return {{1.0, 1.0}, zero};
            if (strict ? l.lo >= r.hi : l.lo > r.hi) return {{0.0, 0.0}, zero};
            return {{0.0, 1.0}, any};
        }
        case Op::sqrt: {
            const Dual a = arg(0);
            const Range v = r_monotone(a.v, [](double t) { return std::sqrt(t); }, 0.0);
            return {v, D ? r_div(a.d, r_mul({2.0, 2.0}, v)) : zero};
        }
        case Op::exp: {
            const Dual a = arg(0);
            const Range v = r_monotone(a.v, [](double t) { return std::exp(t); });
            return {{std::max(v.lo, 0.0), v.hi}, D ? r_mul(v, a.d) : zero};
        }
        case Op::log: {
            const Dual a = arg(0);
            return {r_monotone(a.v, [](double t) { return std::log(t); }, 0.0), D ? r_div(a.d, a.v) : zero};
        }
        case Op::sin:
        case Op::cos: {
            const Dual a = arg(0);
            const double ph = n.op == Op::sin ? 0.0 : std::numbers::pi / 2;
            return {r_sin(a.v, ph), D ? r_mul(r_sin(a.v, ph + std::numbers::pi / 2), a.d) : zero};
        }
        case Op::abs: {
            const Dual a = arg(0);
            Range d = a.d;
            if (a.v.hi <= 0.0)
                d = r_neg(a.d);
            else if (a.v.lo < 0.0)
                d = hull(a.d, r_neg(a.d));
            return {r_abs(a.v), d};
        }
        case Op::min:
        case Op::max: {
            const Dual a = arg(0), b = arg(1);
            const bool is_min = n.op == Op::min;
            if (a.v.hi <= b.v.lo) return is_min ? a : b;
            if (b.v.hi <= a.v.lo) return is_min ? b : a;
            return {is_min ? r_min(a.v, b.v) : r_max(a.v, b.v), hull(a.d, b.d)};
        }
        case Op::piecewise: {
            const Dual c = arg(0);
            if (c.v.lo == 1.0 && c.v.hi == 1.0) return arg(1);
            if (c.v.lo == 0.0 && c.v.hi == 0.0) return arg(2);
            return {hull(arg(1).v, arg(2).v), any};
        }
        case Op::indicator: {
            const int rel = relate(cell, *n.set);
            if (rel == 1) return {{1.0, 1.0}, zero};
            if (rel == 0) return {{0.0, 0.0}, zero};
            return {{0.0, 1.0}, any};
        }
        default: not_scalar(n);
    }
}

inline Range closure_range(const PavingSet& cell) { return {cell.inf(), cell.sup()}; }

}  // namespace detail

/// Enclosure of a scalar node over one interval cell.
inline Range enclose(const Node& n, const PavingSet& cell) {
    return detail::eval_dual<false>(n, cell, detail::closure_range(cell), {0.0, 0.0}).v;
}

struct CompileOptions {
    std::size_t sup_subdivisions = 64;
    int monotone_depth = 12;
};

namespace detail {

inline std::vector<const Node*> components(const Node& n) {
    std::vector<const Node*> out;
    if (n.kind == Node::Kind::call && n.name == "vec")
        for (const auto& a : n.args) out.push_back(&a);
    else
        out.push_back(&n);
    return out;
}

/// Oscillation bound over a cell made of one or more pieces.
inline double range_oscillation(const std::vector<const Node*>& comps, const PavingSet& cell) {
    double worst = 0.0;
    for (const Node* c : comps) {
        Range h{kInf, -kInf};
        for (const auto& p : cell.intervals().pieces()) {
            const PavingSet piece(IntervalSet::from_piece(p));
            h = hull(h, eval_dual<false>(*c, piece, {p.lo, p.hi}, {0.0, 0.0}).v);
        }
        const double w = h.hi - h.lo;
        if (std::isnan(w)) return kInf;
        worst = std::max(worst, w);
    }
    return worst;
}

inline void monotone_scan(const Node& n, double lo, double hi, bool hi_is_end, int depth,
                          std::vector<MonotonePiece>& out, bool& ok) {
    if (!ok) return;
    const PavingSet cell = PavingSet(IntervalSet::from_piece({lo, hi, true, hi_is_end}));
    const Range d = eval_dual<true>(n, cell, {lo, hi}, {0.0, 0.0}).d;
    if (d.lo >= 0.0 || d.hi <= 0.0) {
        out.push_back({lo, hi, d.lo >= 0.0});
        return;
    }
    if (depth == 0) {
        ok = false;
        return;
    }
    const double mid = lo + 0.5 * (hi - lo);
    monotone_scan(n, lo, mid, false, depth - 1, out, ok);
    monotone_scan(n, mid, hi, hi_is_end, depth - 1, out, ok);
}

}  // namespace detail

/// Elementary-series view of an elemseries node over [lo, hi).
inline ElementaryFunction compile_elementary(const Node& n, double lo, double hi) {
    if (!(n.kind == Node::Kind::call && n.name == "elemseries"))
        throw StructuralError("harness-cli", "compile", "not an elemseries expression");
    detail::validate(n, false);
    auto coef_node = std::make_shared<Node>(n.args[0]);
    detail::resolve(*coef_node);
    const auto comps = std::make_shared<const std::vector<const Node*>>(detail::components(*coef_node));
    const std::size_t dim = comps->size();
    auto coefficient = [coef_node, comps, dim](std::size_t i) {
        RieszValue::Storage out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = detail::eval_scalar(*(*comps)[k], 0.0, static_cast<double>(i));
        return RieszValue(std::span<const double>(out.data(), out.size()));
    };
    const Node& sched = n.args[1];
    const std::optional<std::size_t> count =
        sched.kind == Node::Kind::call ? std::optional<std::size_t>(static_cast<std::size_t>(sched.args[0].value))
                                       : std::nullopt;
    // sup over i > n of |a_i|, from the enclosure on [n + 1, last].
    auto tail = [coef_node, comps, count](std::size_t n) {
        const double last = count ? static_cast<double>(*count) : detail::kInf;
        if (count && n >= *count) return 0.0;
        double m = 0.0;
        const PavingSet dummy = PavingSet::point(0.0);
        for (const Node* c : *comps) {
            const Range r = detail::eval_dual<false>(*c, dummy, {0.0, 0.0}, {static_cast<double>(n + 1), last}).v;
            const double a = std::max(std::abs(r.lo), std::abs(r.hi));
            if (std::isnan(a)) return detail::kInf;
            m = std::max(m, a);
        }
        return m;
    };
    if (!count) {
        ElementaryFunction e = elementary::geometric(print(n), lo, hi, coefficient, tail, dim);
        return e;
    }
    std::vector<std::pair<RieszValue, PavingSet>> parts;
    const double inv = 1.0 / static_cast<double>(*count);
    for (std::size_t i = 0; i < *count; ++i) {
        const double a = lo + (hi - lo) * (static_cast<double>(i) * inv);
        const double b = i + 1 == *count ? hi : lo + (hi - lo) * (static_cast<double>(i + 1) * inv);
        parts.emplace_back(coefficient(i + 1), PavingSet::half_open(a, b));
    }
    ElementaryFunction e = elementary::finite(std::move(parts));
    e.descriptor = print(n);
    return e;
}

/// Integrand for a parsed function over `domain`, with enclosure-based sup,
/// cell oscillation and (scalar case) monotone pieces.
inline Integrand compile(const Node& n, const IntervalSet& domain, const CompileOptions& opt = {}) {
    if (n.kind == Node::Kind::call && n.name == "elemseries") {
        if (domain.pieces().size() != 1)
            throw StructuralError("harness-cli", "compile", "elemseries needs an interval domain");
        return compile_elementary(n, domain.inf(), domain.sup()).as_integrand();
    }
    detail::validate(n, false);
    auto node = std::make_shared<Node>(n);
    detail::resolve(*node);
    auto comps = std::make_shared<const std::vector<const Node*>>(detail::components(*node));
    for (const Node* c : *comps)
        if (c->kind == Node::Kind::call && (c->name == "vec" || c->name == "elemseries"))
            throw StructuralError("harness-cli", "compile", "'" + c->name + "' must be the whole expression");
    const std::size_t dim = comps->size();
    Integrand f(print(n), dim, [node, comps, dim](double x) {
        RieszValue::Storage out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = detail::eval_scalar(*(*comps)[k], x, 0.0);
        return RieszValue(std::span<const double>(out.data(), out.size()));
    });

    double sup = 0.0;
    for (const auto& p : domain.pieces()) {
        const std::size_t m = p.degenerate() ? 1 : opt.sup_subdivisions;
        for (std::size_t k = 0; k < m; ++k) {
            const double a = p.lo + (p.hi - p.lo) * (static_cast<double>(k) / static_cast<double>(m));
            const double b = k + 1 == m ? p.hi : p.lo + (p.hi - p.lo) * (static_cast<double>(k + 1) / static_cast<double>(m));
            const PavingSet cell(IntervalSet::from_piece({a, b, true, true}));
            for (const Node* c : *comps) {
                const Range r = enclose(*c, cell);
                sup = std::max({sup, std::abs(r.lo), std::abs(r.hi)});
            }
        }
    }
    if (std::isfinite(sup)) f.with_sup(sup);
    f.with_oscillation([comps](const PavingSet& cell) {
        if (!cell.is_interval()) return kUnbounded;
        return detail::range_oscillation(*comps, cell);
    });

    if (dim == 1) {
        std::vector<MonotonePiece> pieces;
        bool ok = true;
        for (const auto& p : domain.pieces()) {
            if (p.degenerate()) continue;
            detail::monotone_scan(*node, p.lo, p.hi, true, opt.monotone_depth, pieces, ok);
        }
        if (ok && !pieces.empty()) f.with_monotone_pieces(std::move(pieces));
    }
    return f;
}

inline Integrand compile(std::string_view text, const IntervalSet& domain, const CompileOptions& opt = {}) {
    return compile(parse_spec(text), domain, opt);
}

/// Parsed measure or capacity.
struct MeasureSpec {
    std::string canonical;
    std::optional<VectorSetFunction> measure;
    std::optional<Capacity> capacity;
};

inline MeasureSpec parse_measure(std::string_view text) {
    const Node n = parse_spec(text);
    MeasureSpec out;
    out.canonical = print(n);
    auto bad = [&](const std::string& why) {
        return StructuralError("harness-cli", "parse_measure", why + " in '" + std::string(text) + "'");
    };
    auto base = [&](const Node& m) -> VectorSetFunction {
        if (detail::is_ident(m, "length")) return measures::length();
        if (detail::is_ident(m, "counting")) return measures::counting();
        if (m.kind == Node::Kind::call && m.name == "vector") {
            if (m.args.size() < 2 || !detail::is_ident(m.args[0], "length"))
                throw bad("arity mismatch: vector(length, s1, ...) needs at least one scale");
            std::vector<double> scales;
            for (std::size_t k = 1; k < m.args.size(); ++k) {
                const PavingSet dummy = PavingSet::point(0.0);
                const Range r = enclose(m.args[k], dummy);
                if (r.lo != r.hi) throw bad("scale must be a literal");
                scales.push_back(r.lo);
            }
            return measures::vector_length(std::move(scales));
        }
        if (m.kind == Node::Kind::ident) throw bad("unknown identifier '" + m.name + "'");
        throw bad("unknown measure");
    };
    if (n.kind == Node::Kind::call && n.name == "capacity") {
        if (n.args.size() != 1) throw bad("arity mismatch: capacity takes 1 argument");
        const Node& a = n.args[0];
        if (a.kind == Node::Kind::call && a.name == "pow") {
            if (a.args.size() != 2 || !detail::is_ident(a.args[0], "length") || a.args[1].kind != Node::Kind::number)
                throw bad("capacity(pow(length, k)) expects a literal k");
            out.capacity = Capacity::power_of_length(a.args[1].value);
        } else {
            out.capacity = Capacity::from_measure(base(a));
        }
        return out;
    }
    out.measure = base(n);
    return out;
}

}  // namespace ordint::dsl
