#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"
#include "ordint/sets.hpp"

namespace ordint {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// A piece of the ground on which f is monotone (used for level sets).
struct MonotonePiece {
    double lo;
    double hi;
    bool increasing;
};

/// f: ground -> R^d together with what is known about it. `osc(cell)` bounds
/// sup ||f(s) - f(t)|| over s, t in the closure of the cell (+inf: unknown);
/// `variation` bounds the sum of oscillations over any partition.
class Integrand {
public:
    using Eval = std::function<RieszValue(double)>;
    using Oscillation = std::function<double(const PavingSet&)>;

    Integrand(std::string descriptor, std::size_t dim, Eval eval)
        : descriptor_(std::move(descriptor)), dim_(dim), eval_(std::move(eval)) {}

    RieszValue operator()(double x) const { return eval_(x); }
    const std::string& descriptor() const { return descriptor_; }
    std::size_t dim() const { return dim_; }

    const std::optional<double>& sup_norm() const { return sup_norm_; }
    const std::optional<double>& variation() const { return variation_; }
    const std::vector<MonotonePiece>& monotone_pieces() const { return monotone_; }
    bool has_modulus() const { return static_cast<bool>(osc_) || variation_.has_value(); }

    /// Oscillation bound on one cell; singletons are exact.
    double cell_oscillation(const PavingSet& cell) const {
        if (cell.is_singleton()) return 0.0;
        if (!osc_) return kUnbounded;
        return osc_(cell);
    }
    bool has_cell_modulus() const { return static_cast<bool>(osc_); }

    Integrand& rename(std::string d) {
        descriptor_ = std::move(d);
        return *this;
    }
    Integrand& with_sup(double s) {
        sup_norm_ = s;
        return *this;
    }
    Integrand& with_oscillation(Oscillation o) {
        osc_ = std::move(o);
        return *this;
    }
    Integrand& with_variation(double v) {
        variation_ = v;
        return *this;
    }
    Integrand& with_monotone_pieces(std::vector<MonotonePiece> p) {
        monotone_ = std::move(p);
        return *this;
    }

    /// osc(cell) = L * diam, except cells whose closure holds a breakpoint,
    /// which get 2 sup|f| (or +inf without a sup bound).
    Integrand& with_lipschitz(double lipschitz, std::vector<double> breakpoints = {}) {
        auto sup = sup_norm_;
        osc_ = [lipschitz, breakpoints = std::move(breakpoints), sup](const PavingSet& c) {
            for (double b : breakpoints)
                if (c.closure_contains(b)) return sup ? 2.0 * *sup : kUnbounded;
            return lipschitz * c.diameter();
        };
        return *this;
    }

    /// osc(cell) = ||f(sup) - f(inf)|| for f monotone in every coordinate on
    /// each interval cell's closure.
    Integrand& with_monotone_modulus() {
        auto eval = eval_;
        osc_ = [eval](const PavingSet& c) { return (eval(c.sup()) - eval(c.inf())).max_abs(); };
        return *this;
    }

    /// Values on N are not covered by the modulus: cells meeting N get
    /// 2 sup|f| (or +inf).
    Integrand& with_exempt(PavingSet n) {
        auto inner = osc_;
        auto sup = sup_norm_;
        osc_ = [inner, n = std::move(n), sup](const PavingSet& c) {
            if (!c.disjoint_from(n)) return sup ? 2.0 * *sup : kUnbounded;
            return inner ? inner(c) : kUnbounded;
        };
        return *this;
    }

    const Oscillation& oscillation() const { return osc_; }

private:
    std::string descriptor_;
    std::size_t dim_;
    Eval eval_;
    std::optional<double> sup_norm_;
    Oscillation osc_;
    std::optional<double> variation_;
    std::vector<MonotonePiece> monotone_;
};

namespace integrands {

inline Integrand constant(RieszValue c) {
    const double s = c.max_abs();
    const std::size_t d = c.dim();
    Integrand f("const(" + to_string(c) + ")", d, [c](double) { return c; });
    f.with_sup(s).with_oscillation([](const PavingSet&) { return 0.0; }).with_variation(0.0);
    return f;
}

inline Integrand constant(double c) { return constant(RieszValue::scalar(c)); }

/// a + b x on [lo, hi].
inline Integrand affine(double a, double b, double lo = 0.0, double hi = 1.0) {
    Integrand f("affine(" + format_number(a) + ", " + format_number(b) + ")", 1,
                [a, b](double x) { return RieszValue::scalar(a + b * x); });
    f.with_sup(std::max(std::abs(a + b * lo), std::abs(a + b * hi)))
        .with_lipschitz(std::abs(b))
        .with_monotone_pieces({{lo, hi, b >= 0.0}});
    return f;
}

inline Integrand identity(double lo = 0.0, double hi = 1.0) { return affine(0.0, 1.0, lo, hi).rename("x"); }

/// sum c_k x^k on [lo, hi]; Lipschitz constant from |p'| <= sum k |c_k| r^(k-1).
inline Integrand polynomial(std::vector<double> c, double lo, double hi) {
    const double r = std::max(std::abs(lo), std::abs(hi));
    double lip = 0.0, sup = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        sup += std::abs(c[k]) * std::pow(r, static_cast<double>(k));
        if (k > 0) lip += static_cast<double>(k) * std::abs(c[k]) * std::pow(r, static_cast<double>(k - 1));
    }
    std::string d = "poly(";
    for (std::size_t k = 0; k < c.size(); ++k) d += (k ? ", " : "") + format_number(c[k]);
    Integrand f(d + ")", 1, [c](double x) {
        double v = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
        return RieszValue::scalar(v);
    });
    f.with_sup(sup).with_lipschitz(lip);
    return f;
}

/// value * 1_A.
inline Integrand indicator(const IntervalSet& a, RieszValue value) {
    std::vector<double> breaks;
    for (const auto& p : a.pieces()) {
        breaks.push_back(p.lo);
        breaks.push_back(p.hi);
    }
    const RieszValue zero = RieszValue::zero(value.dim(), value.space());
    Integrand f("indicator(" + to_string(PavingSet(a)) + ")", value.dim(),
                [a, value, zero](double x) { return a.contains(x) ? value : zero; });
    const double s = value.max_abs();
    f.with_sup(s)
        .with_oscillation([a, s](const PavingSet& c) {
            const IntervalSet& ci = c.intervals();
            return (ci.subset_of(a) || ci.disjoint_from(a)) ? 0.0 : s;
        })
        .with_variation(s * static_cast<double>(breaks.size()));
    return f;
}

inline Integrand indicator(const IntervalSet& a) { return indicator(a, RieszValue::scalar(1.0)); }

/// 1 on dyadic rationals of denominator at most 2^m, 0 elsewhere. Every double
/// is a dyadic rational, so the denominator bound is what makes the set
/// countable-in-practice and its complement carry the random tags.
inline Integrand dyadic_rational_indicator(int m = 30) {
    Integrand f("dyadic(" + std::to_string(m) + ")", 1, [m](double x) {
        const double y = std::ldexp(x, m);
        return RieszValue::scalar(y == std::floor(y) ? 1.0 : 0.0);
    });
    f.with_sup(1.0);
    return f;
}

/// Sum a_k 1_{A_k} with pairwise disjoint A_k.
inline Integrand simple(std::vector<std::pair<RieszValue, PavingSet>> parts) {
    if (parts.empty()) throw ContractViolation("integrators", "simple", "needs at least one part");
    const std::size_t d = parts[0].first.dim();
    double sup = 0.0;
    std::size_t breaks = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].first.dim() != d) throw StructuralError("integrators", "simple", "coefficient dimensions differ");
        for (std::size_t j = 0; j < i; ++j)
            if (!parts[i].second.disjoint_from(parts[j].second))
                throw ContractViolation("integrators", "simple", "cells must be disjoint");
        sup = std::max(sup, parts[i].first.max_abs());
        if (parts[i].second.is_interval()) breaks += 2 * parts[i].second.intervals().pieces().size();
    }
    auto shared = std::make_shared<const std::vector<std::pair<RieszValue, PavingSet>>>(std::move(parts));
    const RieszValue zero = RieszValue::zero(d);
    std::string desc = "simple(";
    for (std::size_t i = 0; i < shared->size(); ++i)
        desc += (i ? "; " : "") + to_string((*shared)[i].first) + " on " + to_string((*shared)[i].second);
    Integrand f(desc + ")", d, [shared, zero](double x) {
        for (const auto& [a, s] : *shared)
            if (s.contains(x)) return a;
        return zero;
    });
    f.with_sup(sup)
        .with_oscillation([shared, sup](const PavingSet& c) {
            bool inside_some = false, meets = false;
            for (const auto& [a, s] : *shared) {
                if (c.disjoint_from(s)) continue;
                if (meets) return 2.0 * sup;  // meets two cells
                meets = true;
                inside_some = c.subset_of(s);
            }
            return (!meets || inside_some) ? 0.0 : 2.0 * sup;
        })
        .with_variation(2.0 * sup * static_cast<double>(breaks));
    return f;
}

/// Scalar integrands stacked into one R^d-valued integrand.
inline Integrand stack(std::vector<Integrand> parts) {
    if (parts.empty()) throw ContractViolation("integrators", "stack", "needs components");
    std::string d = "[";
    std::optional<double> sup = 0.0;
    bool cell_mod = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].dim() != 1) throw StructuralError("integrators", "stack", "components must be scalar");
        d += (i ? ", " : "") + parts[i].descriptor();
        if (sup && parts[i].sup_norm())
            sup = std::max(*sup, *parts[i].sup_norm());
        else
            sup.reset();
        cell_mod = cell_mod && parts[i].has_cell_modulus();
    }
    auto shared = std::make_shared<const std::vector<Integrand>>(std::move(parts));
    Integrand f(d + "]", shared->size(), [shared](double x) {
        RieszValue::Storage s(shared->size());
        for (std::size_t i = 0; i < shared->size(); ++i) s[i] = (*shared)[i](x).as_scalar();
        return RieszValue(std::span<const double>(s.data(), s.size()));
    });
    if (sup) f.with_sup(*sup);
    if (cell_mod)
        f.with_oscillation([shared](const PavingSet& c) {
            double m = 0.0;
            for (const auto& p : *shared) m = std::max(m, p.cell_oscillation(c));
            return m;
        });
    return f;
}

namespace detail {

inline std::optional<double> add_opt(const std::optional<double>& a, const std::optional<double>& b) {
    if (a && b) return *a + *b;
    return std::nullopt;
}

/// Combines two integrands pointwise; oscillations combine by `osc_rule`.
template <class Op, class OscRule, class SupRule>
Integrand combine(const Integrand& f, const Integrand& g, std::string name, Op op, OscRule osc_rule, SupRule sup_rule) {
    if (f.dim() != g.dim()) throw StructuralError("integrators", name.c_str(), "integrand dimensions differ");
    Integrand h(name + "(" + f.descriptor() + ", " + g.descriptor() + ")", f.dim(),
                [f, g, op](double x) { return op(f(x), g(x)); });
    if (auto s = sup_rule(f.sup_norm(), g.sup_norm())) h.with_sup(*s);
    if (f.has_cell_modulus() && g.has_cell_modulus())
        h.with_oscillation([f, g, osc_rule](const PavingSet& c) {
            return osc_rule(f.cell_oscillation(c), g.cell_oscillation(c));
        });
    return h;
}

}  // namespace detail

inline Integrand sum(const Integrand& f, const Integrand& g) {
    Integrand h = detail::combine(
        f, g, "add", [](const RieszValue& a, const RieszValue& b) { return a + b; },
        [](double a, double b) { return a + b; }, detail::add_opt);
    if (auto v = detail::add_opt(f.variation(), g.variation())) h.with_variation(*v);
    return h;
}

inline Integrand difference(const Integrand& f, const Integrand& g) {
    Integrand h = detail::combine(
        f, g, "sub", [](const RieszValue& a, const RieszValue& b) { return a - b; },
        [](double a, double b) { return a + b; }, detail::add_opt);
    if (auto v = detail::add_opt(f.variation(), g.variation())) h.with_variation(*v);
    return h;
}

/// Componentwise f ^ g.
inline Integrand minimum(const Integrand& f, const Integrand& g) {
    return detail::combine(
        f, g, "min", [](const RieszValue& a, const RieszValue& b) { return meet(a, b); },
        [](double a, double b) { return std::max(a, b); },
        [](const std::optional<double>& a, const std::optional<double>& b) -> std::optional<double> {
            if (a && b) return std::max(*a, *b);
            return std::nullopt;
        });
}

/// Componentwise f v g.
inline Integrand maximum(const Integrand& f, const Integrand& g) {
    return detail::combine(
        f, g, "max", [](const RieszValue& a, const RieszValue& b) { return join(a, b); },
        [](double a, double b) { return std::max(a, b); },
        [](const std::optional<double>& a, const std::optional<double>& b) -> std::optional<double> {
            if (a && b) return std::max(*a, *b);
            return std::nullopt;
        });
}

inline Integrand scaled(double s, const Integrand& f) {
    Integrand h(format_number(s) + "*" + f.descriptor(), f.dim(), [s, f](double x) { return s * f(x); });
    if (f.sup_norm()) h.with_sup(std::abs(s) * *f.sup_norm());
    if (f.has_cell_modulus())
        h.with_oscillation([s, f](const PavingSet& c) { return std::abs(s) * f.cell_oscillation(c); });
    if (f.variation()) h.with_variation(std::abs(s) * *f.variation());
    return h;
}

/// f + c for a constant vector c.
inline Integrand shifted(const Integrand& f, const RieszValue& c) {
    Integrand h(f.descriptor() + "+" + to_string(c), f.dim(), [c, f](double x) { return f(x) + c; });
    if (f.sup_norm()) h.with_sup(*f.sup_norm() + c.max_abs());
    if (f.has_cell_modulus()) h.with_oscillation([f](const PavingSet& c2) { return f.cell_oscillation(c2); });
    if (f.variation()) h.with_variation(*f.variation());
    h.with_monotone_pieces(f.monotone_pieces());
    return h;
}

/// |f|, f+ or f- (componentwise); oscillation does not grow.
inline Integrand lattice_part(const Integrand& f, const char* which) {
    const std::string w = which;
    Integrand h(w + "(" + f.descriptor() + ")", f.dim(), [f, w](double x) {
        const RieszValue v = f(x);
        if (w == "abs") return abs(v);
        if (w == "pos") return pos_part(v);
        return neg_part(v);
    });
    if (f.sup_norm()) h.with_sup(*f.sup_norm());
    if (f.has_cell_modulus()) h.with_oscillation([f](const PavingSet& c) { return f.cell_oscillation(c); });
    if (f.variation()) h.with_variation(*f.variation());
    return h;
}

inline Integrand absolute(const Integrand& f) { return lattice_part(f, "abs"); }
inline Integrand positive_part(const Integrand& f) { return lattice_part(f, "pos"); }
inline Integrand negative_part(const Integrand& f) { return lattice_part(f, "neg"); }

/// f 1_A: cells straddling the boundary of A get osc <= osc_f + sup|f|.
inline Integrand restricted(const Integrand& f, const PavingSet& a) {
    const RieszValue zero = RieszValue::zero(f.dim());
    Integrand h(f.descriptor() + "*1_" + to_string(a), f.dim(),
                [f, a, zero](double x) { return a.contains(x) ? f(x) : zero; });
    if (f.sup_norm()) h.with_sup(*f.sup_norm());
    if (f.has_cell_modulus()) {
        auto sup = f.sup_norm();
        h.with_oscillation([f, a, sup](const PavingSet& c) {
            if (c.subset_of(a)) return f.cell_oscillation(c);
            if (c.disjoint_from(a)) return 0.0;
            return sup ? f.cell_oscillation(c) + *sup : kUnbounded;
        });
    }
    return h;
}

/// g = f off N, arbitrary values `wild` on N.
inline Integrand modified_on(const Integrand& f, const PavingSet& n, RieszValue wild) {
    Integrand h(f.descriptor() + "|wild on " + to_string(n), f.dim(),
                [f, n, wild](double x) { return n.contains(x) ? wild : f(x); });
    if (f.sup_norm()) h.with_sup(std::max(*f.sup_norm(), wild.max_abs()));
    if (f.has_cell_modulus()) {
        const double sup = std::max(f.sup_norm().value_or(kUnbounded), wild.max_abs());
        h.with_oscillation([f, n, sup](const PavingSet& c) {
            return c.disjoint_from(n) ? f.cell_oscillation(c) : 2.0 * sup;
        });
    }
    return h;
}

}  // namespace integrands

/// A countable combination sum a_i 1_{A_i} over disjoint cells.
struct ElementaryFunction {
    std::string descriptor;
    std::size_t dim = 1;
    std::function<RieszValue(std::size_t)> coefficient;  ///< 1-based
    std::function<PavingSet(std::size_t)> cell;          ///< 1-based
    std::optional<std::size_t> length;                   ///< finite combinations
    /// Declared tails: sup_{i>n} ||a_i|| and the union of A_i for i > n.
    std::function<double(std::size_t)> coefficient_tail;
    std::function<PavingSet(std::size_t)> cell_tail;
    /// Index of the cell holding x, if any (needed for pointwise evaluation).
    std::function<std::optional<std::size_t>(double)> index_of;

    RieszValue operator()(double x) const {
        if (!index_of) throw StructuralError("integrators", "ElementaryFunction", "no point location declared");
        if (auto i = index_of(x)) return coefficient(*i);
        return RieszValue::zero(dim);
    }

    /// The same function seen as an integrand: cells inside one A_i are exact.
    Integrand as_integrand() const {
        auto self = std::make_shared<const ElementaryFunction>(*this);
        Integrand f(descriptor, dim, [self](double x) { return (*self)(x); });
        std::optional<double> sup;
        if (coefficient_tail) sup = coefficient_tail(0);
        if (sup) f.with_sup(*sup);
        f.with_oscillation([self, sup](const PavingSet& c) {
            const double x = c.is_interval() ? detail_interior(c) : c.inf();
            const auto i = self->index_of(x);
            if (i && c.subset_of(self->cell(*i))) return 0.0;
            if (!i && self->cell_tail && c.disjoint_from(self->cell_tail(0))) return 0.0;
            return sup ? 2.0 * *sup : kUnbounded;
        });
        return f;
    }

private:
    static double detail_interior(const PavingSet& c) {
        const Piece& p = c.intervals().pieces().front();
        return p.lo_closed ? p.lo : p.lo + 0.5 * (p.hi - p.lo);
    }
};

namespace elementary {

/// Finitely many disjoint parts.
inline ElementaryFunction finite(std::vector<std::pair<RieszValue, PavingSet>> parts) {
    if (parts.empty()) throw ContractViolation("integrators", "elementary::finite", "needs at least one part");
    auto shared = std::make_shared<const std::vector<std::pair<RieszValue, PavingSet>>>(std::move(parts));
    ElementaryFunction e;
    e.descriptor = "elementary(" + std::to_string(shared->size()) + " parts)";
    e.dim = (*shared)[0].first.dim();
    e.coefficient = [shared](std::size_t i) { return (*shared)[i - 1].first; };
    e.cell = [shared](std::size_t i) { return (*shared)[i - 1].second; };
    e.length = shared->size();
    e.coefficient_tail = [shared](std::size_t n) {
        double m = 0.0;
        for (std::size_t i = n; i < shared->size(); ++i) m = std::max(m, (*shared)[i].first.max_abs());
        return m;
    };
    e.cell_tail = [shared](std::size_t n) {
        PavingSet u = (*shared)[0].second.is_interval() ? PavingSet(IntervalSet{})
                                                        : PavingSet(FiniteSubset((*shared)[0].second.finite().universe(), {}));
        for (std::size_t i = n; i < shared->size(); ++i) u = u.unite((*shared)[i].second);
        return u;
    };
    e.index_of = [shared](double x) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < shared->size(); ++i)
            if ((*shared)[i].second.contains(x)) return i + 1;
        return std::nullopt;
    };
    return e;
}

/// Geometric dyadic cells of [lo, hi): A_i = [hi - l 2^-(i-1), hi - l 2^-i),
/// coefficients a_i, with declared coefficient tail.
inline ElementaryFunction geometric(std::string descriptor, double lo, double hi,
                                    std::function<RieszValue(std::size_t)> coefficient,
                                    std::function<double(std::size_t)> coefficient_tail, std::size_t dim = 1) {
    ElementaryFunction e;
    e.descriptor = std::move(descriptor);
    e.dim = dim;
    const double l = hi - lo;
    auto edge = [lo, hi, l](std::size_t i) { return i == 0 ? lo : hi - l * std::ldexp(1.0, -static_cast<int>(i)); };
    e.coefficient = std::move(coefficient);
    e.cell = [edge](std::size_t i) { return PavingSet::half_open(edge(i - 1), edge(i)); };
    e.coefficient_tail = std::move(coefficient_tail);
    e.cell_tail = [edge, hi](std::size_t n) { return PavingSet::half_open(edge(n), hi); };
    e.index_of = [edge, lo, hi, l](double x) -> std::optional<std::size_t> {
        if (!(lo <= x && x < hi)) return std::nullopt;
        // hi - x in (l 2^-i, l 2^-(i-1)]  ->  i = floor(log2(l/(hi-x))) + 1, then fix rounding.
        std::size_t i = static_cast<std::size_t>(std::max(1.0, std::floor(std::log2(l / (hi - x))) + 1.0));
        while (i > 1 && x < edge(i - 1)) --i;
        while (x >= edge(i)) ++i;
        return i;
    };
    return e;
}

/// The fixture a_i = 2^-i on the geometric dyadic cells of [0, 1).
inline ElementaryFunction dyadic_halves() {
    return geometric(
        "elemseries(2^-i, dyadic)", 0.0, 1.0, [](std::size_t i) { return RieszValue::scalar(std::ldexp(1.0, -static_cast<int>(i))); },
        [](std::size_t n) { return std::ldexp(1.0, -static_cast<int>(n + 1)); });
}

enum class StairKind {
    floor,           ///< f(left); for f increasing in every coordinate, u = L h
    lower_lipschitz  ///< f(left) - L h; below f for any L-Lipschitz f, u = 2 L h
};

/// Uniform staircase of f over `cells` equal cells of [lo, hi).
inline ElementaryFunction staircase(const Integrand& f, double lo, double hi, std::size_t cells, double lipschitz,
                                    StairKind kind) {
    if (cells == 0) throw ContractViolation("integrators", "staircase", "needs at least one cell");
    auto edges = std::make_shared<std::vector<double>>(cells + 1);
    const double w = hi - lo;
    const double inv = 1.0 / static_cast<double>(cells);
    for (std::size_t i = 0; i <= cells; ++i) (*edges)[i] = i == cells ? hi : lo + w * (static_cast<double>(i) * inv);
    const double h = w * inv;
    auto coeffs = std::make_shared<std::vector<RieszValue>>();
    coeffs->reserve(cells);
    double sup = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        RieszValue v = f((*edges)[i]);
        if (kind == StairKind::lower_lipschitz) v = v - RieszValue::constant(v.dim(), lipschitz * h, v.space());
        sup = std::max(sup, v.max_abs());
        coeffs->push_back(std::move(v));
    }
    std::vector<double> suffix(cells + 1, 0.0);
    for (std::size_t i = cells; i-- > 0;) suffix[i] = std::max(suffix[i + 1], (*coeffs)[i].max_abs());
    auto sfx = std::make_shared<std::vector<double>>(std::move(suffix));
    ElementaryFunction e;
    e.descriptor = std::string(kind == StairKind::floor ? "floor" : "lower") + "-staircase(" + f.descriptor() + ", " +
                   std::to_string(cells) + ")";
    e.dim = f.dim();
    e.coefficient = [coeffs](std::size_t i) { return (*coeffs)[i - 1]; };
    e.cell = [edges](std::size_t i) { return PavingSet::half_open((*edges)[i - 1], (*edges)[i]); };
    e.length = cells;
    e.coefficient_tail = [sfx](std::size_t n) { return n < sfx->size() ? (*sfx)[n] : 0.0; };
    e.cell_tail = [edges, hi](std::size_t n) {
        return n >= edges->size() - 1 ? PavingSet(IntervalSet{}) : PavingSet::half_open((*edges)[n], hi);
    };
    e.index_of = [edges, lo, hi, cells](double x) -> std::optional<std::size_t> {
        if (!(lo <= x && x < hi)) return std::nullopt;
        auto it = std::upper_bound(edges->begin(), edges->end(), x);
        std::size_t i = static_cast<std::size_t>(it - edges->begin());
        return std::min(i, cells);
    };
    return e;
}

}  // namespace elementary

/// u_1 >= u_2 >= ... >= 0: declared uniform envelopes.
struct UniformRegulatorSequence {
    std::string name;
    std::function<RieszValue(std::size_t)> u;

    static UniformRegulatorSequence geometric(std::size_t dim, double scale, double ratio) {
        return {"geometric(" + format_number(scale) + ", " + format_number(ratio) + ")", [=](std::size_t n) {
                    return RieszValue::constant(dim, scale * std::pow(ratio, static_cast<double>(n)));
                }};
    }

    bool monotone_on(std::size_t count) const {
        for (std::size_t n = 1; n < count; ++n) {
            const RieszValue a = u(n), b = u(n + 1);
            if (!b.is_nonnegative() || !leq(b, a)) return false;
        }
        return true;
    }
};

}  // namespace ordint
