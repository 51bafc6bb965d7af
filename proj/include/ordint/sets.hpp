#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ordint/errors.hpp"

namespace ordint {

/// One interval of the real line with explicit endpoint closedness.
struct Piece {
    double lo;
    double hi;
    bool lo_closed;
    bool hi_closed;

    bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
    bool degenerate() const { return lo == hi && lo_closed && hi_closed; }
    double length() const { return empty() ? 0.0 : hi - lo; }
    bool contains(double x) const {
        return (x > lo || (x == lo && lo_closed)) && (x < hi || (x == hi && hi_closed));
    }

    friend bool operator==(const Piece&, const Piece&) = default;
};

inline Piece intersect(const Piece& a, const Piece& b) {
    Piece r{};
    if (a.lo > b.lo) {
        r.lo = a.lo, r.lo_closed = a.lo_closed;
    } else if (b.lo > a.lo) {
        r.lo = b.lo, r.lo_closed = b.lo_closed;
    } else {
        r.lo = a.lo, r.lo_closed = a.lo_closed && b.lo_closed;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi, r.hi_closed = a.hi_closed;
    } else if (b.hi < a.hi) {
        r.hi = b.hi, r.hi_closed = b.hi_closed;
    } else {
        r.hi = a.hi, r.hi_closed = a.hi_closed && b.hi_closed;
    }
    return r;
}

/// Finite union of intervals in canonical form: sorted, pairwise disjoint,
/// non-touching, no empty pieces. Two sets are equal iff their forms are.
class IntervalSet {
public:
    using Pieces = boost::container::small_vector<Piece, 1>;

    IntervalSet() = default;

    /// [lo, hi)
    static IntervalSet half_open(double lo, double hi) { return from_piece({lo, hi, true, false}); }
    /// [lo, hi]
    static IntervalSet closed(double lo, double hi) { return from_piece({lo, hi, true, true}); }
    /// (lo, hi)
    static IntervalSet open(double lo, double hi) { return from_piece({lo, hi, false, false}); }
    static IntervalSet point(double c) { return closed(c, c); }

    static IntervalSet from_piece(const Piece& p) {
        IntervalSet s;
        if (!p.empty()) s.pieces_.push_back(p);
        return s;
    }

    static IntervalSet from_pieces(Pieces pieces) {
        IntervalSet s;
        s.pieces_ = std::move(pieces);
        s.normalize();
        return s;
    }

    const Pieces& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    double length() const {
        double s = 0.0;
        for (const auto& p : pieces_) s += p.length();
        return s;
    }
    double inf() const { return pieces_.empty() ? 0.0 : pieces_.front().lo; }
    double sup() const { return pieces_.empty() ? 0.0 : pieces_.back().hi; }
    double diameter() const { return pieces_.empty() ? 0.0 : sup() - inf(); }
    bool is_single_piece() const { return pieces_.size() == 1; }

    bool contains(double x) const {
        return std::any_of(pieces_.begin(), pieces_.end(), [x](const Piece& p) { return p.contains(x); });
    }
    /// Membership in the closure.
    bool closure_contains(double x) const {
        return std::any_of(pieces_.begin(), pieces_.end(), [x](const Piece& p) { return p.lo <= x && x <= p.hi; });
    }

    IntervalSet intersect(const IntervalSet& o) const {
        Pieces out;
        for (const auto& a : pieces_)
            for (const auto& b : o.pieces_) {
                Piece c = ordint::intersect(a, b);
                if (!c.empty()) out.push_back(c);
            }
        return from_pieces(std::move(out));
    }

    IntervalSet unite(const IntervalSet& o) const {
        Pieces out = pieces_;
        out.insert(out.end(), o.pieces_.begin(), o.pieces_.end());
        return from_pieces(std::move(out));
    }

    IntervalSet complement() const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        Pieces out;
        double lo = -inf;
        bool lo_closed = false;
        for (const auto& p : pieces_) {
            Piece gap{lo, p.lo, lo_closed, !p.lo_closed};
            if (!gap.empty() && !(gap.lo == -inf && gap.hi == -inf)) out.push_back(gap);
            lo = p.hi;
            lo_closed = !p.hi_closed;
        }
        Piece last{lo, inf, lo_closed, false};
        if (!last.empty()) out.push_back(last);
        return from_pieces(std::move(out));
    }

    IntervalSet minus(const IntervalSet& o) const { return intersect(o.complement()); }

    bool subset_of(const IntervalSet& o) const { return minus(o).empty(); }
    bool disjoint_from(const IntervalSet& o) const { return intersect(o).empty(); }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    void normalize() {
        pieces_.erase(std::remove_if(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.empty(); }),
                      pieces_.end());
        std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
            if (a.lo != b.lo) return a.lo < b.lo;
            return a.lo_closed && !b.lo_closed;
        });
        Pieces merged;
        for (const auto& p : pieces_) {
            if (!merged.empty()) {
                Piece& cur = merged.back();
                const bool touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
                if (touches) {
                    if (p.hi > cur.hi) {
                        cur.hi = p.hi, cur.hi_closed = p.hi_closed;
                    } else if (p.hi == cur.hi) {
                        cur.hi_closed = cur.hi_closed || p.hi_closed;
                    }
                    continue;
                }
            }
            merged.push_back(p);
        }
        pieces_ = std::move(merged);
    }

    Pieces pieces_;
};

/// Subset of the finite ground {0, ..., universe-1}; elements sorted, unique.
class FiniteSubset {
public:
    FiniteSubset() = default;
    FiniteSubset(std::size_t universe, std::vector<std::uint32_t> elements)
        : universe_(universe), elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        if (!elements_.empty() && elements_.back() >= universe_)
            throw ContractViolation("measure-theory", "FiniteSubset", "element outside the universe");
    }

    static FiniteSubset all(std::size_t universe) {
        std::vector<std::uint32_t> e(universe);
        for (std::size_t i = 0; i < universe; ++i) e[i] = static_cast<std::uint32_t>(i);
        return FiniteSubset(universe, std::move(e));
    }

    std::size_t universe() const { return universe_; }
    const std::vector<std::uint32_t>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    bool contains(double x) const {
        if (x < 0 || x != std::floor(x)) return false;
        return std::binary_search(elements_.begin(), elements_.end(), static_cast<std::uint32_t>(x));
    }

    FiniteSubset intersect(const FiniteSubset& o) const {
        std::vector<std::uint32_t> out;
        std::set_intersection(elements_.begin(), elements_.end(), o.elements_.begin(), o.elements_.end(),
                              std::back_inserter(out));
        return FiniteSubset(universe_, std::move(out));
    }
    FiniteSubset unite(const FiniteSubset& o) const {
        std::vector<std::uint32_t> out;
        std::set_union(elements_.begin(), elements_.end(), o.elements_.begin(), o.elements_.end(),
                       std::back_inserter(out));
        return FiniteSubset(universe_, std::move(out));
    }
    FiniteSubset minus(const FiniteSubset& o) const {
        std::vector<std::uint32_t> out;
        std::set_difference(elements_.begin(), elements_.end(), o.elements_.begin(), o.elements_.end(),
                            std::back_inserter(out));
        return FiniteSubset(universe_, std::move(out));
    }
    bool subset_of(const FiniteSubset& o) const {
        return std::includes(o.elements_.begin(), o.elements_.end(), elements_.begin(), elements_.end());
    }

    friend bool operator==(const FiniteSubset&, const FiniteSubset&) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint32_t> elements_;
};

/// An element of a paving: either a finite union of intervals or a subset of
/// a finite ground. Ground points are doubles in both cases (finite elements
/// are the integers 0..n-1).
class PavingSet {
public:
    PavingSet() : rep_(IntervalSet{}) {}
    PavingSet(IntervalSet s) : rep_(std::move(s)) {}  // NOLINT implicit by design of the variant
    PavingSet(FiniteSubset s) : rep_(std::move(s)) {}  // NOLINT

    static PavingSet half_open(double lo, double hi) { return IntervalSet::half_open(lo, hi); }
    static PavingSet point(double c) { return IntervalSet::point(c); }

    bool is_interval() const { return std::holds_alternative<IntervalSet>(rep_); }
    bool is_finite() const { return std::holds_alternative<FiniteSubset>(rep_); }
    const IntervalSet& intervals() const {
        if (!is_interval()) throw StructuralError("measure-theory", "PavingSet", "not an interval set");
        return std::get<IntervalSet>(rep_);
    }
    const FiniteSubset& finite() const {
        if (!is_finite()) throw StructuralError("measure-theory", "PavingSet", "not a finite subset");
        return std::get<FiniteSubset>(rep_);
    }

    bool empty() const {
        return std::visit([](const auto& s) { return s.empty(); }, rep_);
    }
    bool contains(double x) const {
        return std::visit([x](const auto& s) { return s.contains(x); }, rep_);
    }
    bool closure_contains(double x) const {
        return is_interval() ? intervals().closure_contains(x) : finite().contains(x);
    }
    /// True when the set is a single point.
    bool is_singleton() const {
        if (is_finite()) return finite().size() == 1;
        const auto& p = intervals().pieces();
        return p.size() == 1 && p[0].degenerate();
    }
    double inf() const {
        return is_interval() ? intervals().inf()
                             : (finite().empty() ? 0.0 : static_cast<double>(finite().elements().front()));
    }
    double sup() const {
        return is_interval() ? intervals().sup()
                             : (finite().empty() ? 0.0 : static_cast<double>(finite().elements().back()));
    }
    double diameter() const { return empty() ? 0.0 : sup() - inf(); }

    PavingSet intersect(const PavingSet& o) const { return binary(o, "intersect", [](auto& a, auto& b) { return a.intersect(b); }); }
    PavingSet unite(const PavingSet& o) const { return binary(o, "unite", [](auto& a, auto& b) { return a.unite(b); }); }
    PavingSet minus(const PavingSet& o) const { return binary(o, "minus", [](auto& a, auto& b) { return a.minus(b); }); }
    bool subset_of(const PavingSet& o) const { return minus(o).empty(); }
    bool disjoint_from(const PavingSet& o) const { return intersect(o).empty(); }

    friend bool operator==(const PavingSet&, const PavingSet&) = default;

private:
    template <class Op>
    PavingSet binary(const PavingSet& o, const char* name, Op op) const {
        if (rep_.index() != o.rep_.index())
            throw StructuralError("measure-theory", name, "interval and finite sets do not mix");
        if (is_interval()) return PavingSet(op(std::get<IntervalSet>(rep_), std::get<IntervalSet>(o.rep_)));
        const auto& a = std::get<FiniteSubset>(rep_);
        const auto& b = std::get<FiniteSubset>(o.rep_);
        if (a.universe() != b.universe())
            throw StructuralError("measure-theory", name, "finite sets over different universes");
        return PavingSet(op(a, b));
    }

    std::variant<IntervalSet, FiniteSubset> rep_;
};

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_string(const PavingSet& s) {
    if (s.is_finite()) {
        std::string out = "{";
        bool first = true;
        for (auto e : s.finite().elements()) {
            if (!first) out += ",";
            out += std::to_string(e);
            first = false;
        }
        return out + "}";
    }
    if (s.empty()) return "{}";
    std::string out;
    for (const auto& p : s.intervals().pieces()) {
        if (!out.empty()) out += " u ";
        if (p.degenerate()) {
            out += "{" + format_number(p.lo) + "}";
            continue;
        }
        out += p.lo_closed ? "[" : "(";
        out += format_number(p.lo) + ", " + format_number(p.hi);
        out += p.hi_closed ? "]" : ")";
    }
    return out;
}

/// The ground set together with its paving.
class PavedSpace {
public:
    /// [lo, hi) with the algebra of finite unions of intervals inside it.
    static PavedSpace interval(double lo, double hi) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw ContractViolation("measure-theory", "PavedSpace", "interval ground must be [lo, hi), lo < hi");
        return PavedSpace(PavingSet::half_open(lo, hi));
    }
    /// {0..n-1} with its power set.
    static PavedSpace finite(std::size_t n) {
        if (n == 0) throw ContractViolation("measure-theory", "PavedSpace", "finite ground must be nonempty");
        return PavedSpace(FiniteSubset::all(n));
    }

    const PavingSet& ground() const { return ground_; }
    bool is_interval() const { return ground_.is_interval(); }

    bool in_paving(const PavingSet& a) const {
        if (a.is_interval() != ground_.is_interval()) return false;
        if (a.is_finite() && a.finite().universe() != ground_.finite().universe()) return false;
        if (a.is_interval()) {
            for (const auto& p : a.intervals().pieces())
                if (!std::isfinite(p.lo) || !std::isfinite(p.hi)) return false;
        }
        return a.subset_of(ground_);
    }

    void require(const PavingSet& a, const char* operation) const {
        if (!in_paving(a))
            throw ContractViolation("measure-theory", operation, "set " + to_string(a) + " is outside the paving");
    }

private:
    explicit PavedSpace(PavingSet g) : ground_(std::move(g)) {}
    PavingSet ground_;
};

}  // namespace ordint
