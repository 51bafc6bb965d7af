#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"

namespace ordint {

/// A selector phi: N -> N given by finitely many values and a constant tail.
/// Indices are 1-based to match the usual double-sequence notation.
class SelectorFunction {
public:
    SelectorFunction(std::vector<std::size_t> values, std::size_t tail_value)
        : values_(std::move(values)), tail_(tail_value) {
        if (tail_ < 1 || std::any_of(values_.begin(), values_.end(), [](std::size_t v) { return v < 1; }))
            throw ContractViolation("convergence", "SelectorFunction", "selector values must be >= 1");
    }

    static SelectorFunction identity(std::size_t depth) { return stretch(1, depth); }

    static SelectorFunction constant(std::size_t c) { return SelectorFunction({}, c); }

    /// j -> k*j on 1..depth, then k*(depth+1).
    static SelectorFunction stretch(std::size_t k, std::size_t depth) {
        std::vector<std::size_t> v(depth);
        for (std::size_t j = 1; j <= depth; ++j) v[j - 1] = k * j;
        return SelectorFunction(std::move(v), k * (depth + 1));
    }

    std::size_t operator()(std::size_t j) const {
        if (j == 0) throw ContractViolation("convergence", "SelectorFunction", "index is 1-based");
        return j <= values_.size() ? values_[j - 1] : tail_;
    }

    /// min over j > depth of phi(j).
    std::size_t min_beyond(std::size_t depth) const {
        std::size_t m = tail_;
        for (std::size_t j = depth + 1; j <= values_.size(); ++j) m = std::min(m, values_[j - 1]);
        return m;
    }

    std::size_t depth() const { return values_.size(); }
    std::size_t tail_value() const { return tail_; }

private:
    std::vector<std::size_t> values_;
    std::size_t tail_;
};

/// a_ij = scale * ratio^i / j.
struct GeometricFamily {
    RieszValue scale;
    double ratio;
};

/// a_ij = c_i / j, with a declared bound sup_after(n) >= sup_{i > n} c_i.
struct HarmonicFamily {
    std::function<RieszValue(std::size_t)> coefficient;
    std::function<RieszValue(std::size_t)> sup_after;
};

/// Explicit finite table rows[i-1][j-1]; every entry outside the table is <= tail.
struct TableFamily {
    std::vector<std::vector<RieszValue>> rows;
    RieszValue tail;
};

using RegulatorFamily = std::variant<GeometricFamily, HarmonicFamily, TableFamily>;

/// A (D)-sequence represented as a finite sum of closed-form families.
class Regulator {
public:
    static Regulator geometric(RieszValue scale, double ratio) {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw ContractViolation("convergence", "Regulator", "geometric ratio must lie in (0,1)");
        if (!scale.is_nonnegative())
            throw ContractViolation("convergence", "Regulator", "geometric scale must be nonnegative");
        const std::size_t d = scale.dim();
        return Regulator(d, {GeometricFamily{std::move(scale), ratio}});
    }

    static Regulator harmonic(std::size_t dim, std::function<RieszValue(std::size_t)> coefficient,
                              std::function<RieszValue(std::size_t)> sup_after) {
        return Regulator(dim, {HarmonicFamily{std::move(coefficient), std::move(sup_after)}});
    }

    static Regulator table(std::vector<std::vector<RieszValue>> rows, RieszValue tail) {
        const std::size_t d = tail.dim();
        for (const auto& row : rows) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (!row[j].is_nonnegative() || (j + 1 < row.size() && !leq(row[j + 1], row[j])))
                    throw ContractViolation("convergence", "Regulator",
                                            "table rows must be nonnegative and nonincreasing");
            }
        }
        return Regulator(d, {TableFamily{std::move(rows), std::move(tail)}});
    }

    static Regulator zero(std::size_t dim) { return geometric(RieszValue::zero(dim), 0.5); }

    std::size_t dim() const { return dim_; }
    const std::vector<RegulatorFamily>& families() const { return families_; }

    /// Exact entry when every family knows it.
    std::optional<RieszValue> entry(std::size_t i, std::size_t j) const {
        RieszValue total = RieszValue::zero(dim_);
        for (const auto& fam : families_) {
            auto e = family_entry(fam, i, j);
            if (!e) return std::nullopt;
            total = total + *e;
        }
        return total;
    }

    /// Entry with unknown table cells read as 0: a lower bound of the true entry.
    RieszValue entry_lower(std::size_t i, std::size_t j) const {
        RieszValue total = RieszValue::zero(dim_);
        for (const auto& fam : families_) {
            if (auto e = family_entry(fam, i, j)) total = total + *e;
        }
        return total;
    }

    /// Upper bound on sup_{j > depth} a_{j, phi(j)} plus every unknown entry at j <= depth.
    RieszValue tail_bound(const SelectorFunction& phi, std::size_t depth) const {
        RieszValue total = RieszValue::zero(dim_);
        const double min_phi = static_cast<double>(phi.min_beyond(depth));
        for (const auto& fam : families_) {
            if (const auto* g = std::get_if<GeometricFamily>(&fam)) {
                total = total + g->scale * (std::pow(g->ratio, static_cast<double>(depth + 1)) / min_phi);
            } else if (const auto* h = std::get_if<HarmonicFamily>(&fam)) {
                if (!h->sup_after)
                    throw StructuralError("convergence", "regulator_envelope",
                                          "harmonic family without a declared tail bound");
                total = total + h->sup_after(depth) / min_phi;
            } else {
                const auto& t = std::get<TableFamily>(fam);
                RieszValue known = RieszValue::zero(dim_);
                for (std::size_t j = depth + 1; j <= t.rows.size(); ++j) {
                    const auto& row = t.rows[j - 1];
                    if (phi(j) <= row.size()) known = join(known, row[phi(j) - 1]);
                }
                total = total + join(known, t.tail);
            }
        }
        return total;
    }

    /// Sampled check of a_ij >= a_{i,j+1} >= 0 on 1..rows x 1..cols.
    bool monotone_on(std::size_t rows, std::size_t cols) const {
        for (std::size_t i = 1; i <= rows; ++i) {
            for (std::size_t j = 1; j <= cols; ++j) {
                auto a = entry(i, j);
                auto b = entry(i, j + 1);
                if (!a || !b) continue;
                if (!b->is_nonnegative() || !leq(*b, *a)) return false;
            }
        }
        return true;
    }

    friend Regulator operator+(const Regulator& a, const Regulator& b) {
        if (a.dim_ != b.dim_) throw StructuralError("convergence", "Regulator::+", "dimension mismatch");
        std::vector<RegulatorFamily> fams = a.families_;
        fams.insert(fams.end(), b.families_.begin(), b.families_.end());
        return Regulator(a.dim_, std::move(fams));
    }

private:
    Regulator(std::size_t dim, std::vector<RegulatorFamily> fams) : dim_(dim), families_(std::move(fams)) {}

    std::optional<RieszValue> family_entry(const RegulatorFamily& fam, std::size_t i, std::size_t j) const {
        if (i == 0 || j == 0) throw ContractViolation("convergence", "Regulator::entry", "indices are 1-based");
        if (const auto* g = std::get_if<GeometricFamily>(&fam))
            return g->scale * (std::pow(g->ratio, static_cast<double>(i)) / static_cast<double>(j));
        if (const auto* h = std::get_if<HarmonicFamily>(&fam)) return h->coefficient(i) / static_cast<double>(j);
        const auto& t = std::get<TableFamily>(fam);
        if (i > t.rows.size() || j > t.rows[i - 1].size()) return std::nullopt;
        return t.rows[i - 1][j - 1];
    }

    std::size_t dim_;
    std::vector<RegulatorFamily> families_;
};

struct Envelope {
    RieszValue value;  ///< sup over j <= depth of a_{j, phi(j)}
    RieszValue tail;   ///< the true envelope lies in [value, value + tail]
};

inline Envelope regulator_envelope(const Regulator& reg, const SelectorFunction& phi, std::size_t depth) {
    if (depth < 1) throw ContractViolation("convergence", "regulator_envelope", "depth must be >= 1");
    RieszValue value = RieszValue::zero(reg.dim());
    for (std::size_t j = 1; j <= depth; ++j) value = join(value, reg.entry_lower(j, phi(j)));
    return {value, reg.tail_bound(phi, depth)};
}

/// Meet of the envelope values over the stretch selectors j -> k*j, k = 1..budget.
/// Tends to 0 with the budget for every supported family.
inline RieszValue weak_sigma_distributivity_probe(const Regulator& reg, std::size_t phi_budget, std::size_t depth) {
    if (phi_budget < 1)
        throw ContractViolation("convergence", "weak_sigma_distributivity_probe", "phi_budget must be >= 1");
    std::optional<RieszValue> best;
    for (std::size_t k = 1; k <= phi_budget; ++k) {
        auto env = regulator_envelope(reg, SelectorFunction::stretch(k, depth), depth);
        best = best ? meet(*best, env.value) : env.value;
    }
    return *best;
}

/// Truncated triple sequence a_{nij}; column indices past the truncation read
/// the last stored column (an over-estimate for sequences decreasing in j).
class TripleSequence {
public:
    TripleSequence(std::size_t n, std::size_t i, std::size_t j, RieszValue fill)
        : n_(n), i_(i), j_(j), data_(n * i * j, std::move(fill)) {}

    std::size_t n_count() const { return n_; }
    std::size_t i_count() const { return i_; }
    std::size_t j_count() const { return j_; }

    RieszValue& at(std::size_t n, std::size_t i, std::size_t j) { return data_[index(n, i, j)]; }
    const RieszValue& at(std::size_t n, std::size_t i, std::size_t j) const { return data_[index(n, i, j)]; }

private:
    std::size_t index(std::size_t n, std::size_t i, std::size_t j) const {
        if (n < 1 || n > n_ || i < 1 || i > i_ || j < 1)
            throw ContractViolation("convergence", "TripleSequence", "index outside truncation");
        j = std::min(j, j_);
        return ((n - 1) * i_ + (i - 1)) * j_ + (j - 1);
    }

    std::size_t n_, i_, j_;
    std::vector<RieszValue> data_;
};

/// Truncated double sequence b_{ij} with the same column clamping rule.
class DoubleSequence {
public:
    DoubleSequence(std::size_t i, std::size_t j, RieszValue fill) : i_(i), j_(j), data_(i * j, std::move(fill)) {}

    std::size_t i_count() const { return i_; }
    std::size_t j_count() const { return j_; }

    RieszValue& at(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    const RieszValue& at(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i < 1 || i > i_ || j < 1)
            throw ContractViolation("convergence", "DoubleSequence", "index outside truncation");
        return (i - 1) * j_ + (std::min(j, j_) - 1);
    }

    std::size_t i_, j_;
    std::vector<RieszValue> data_;
};

/// Left side  L ^ (sum_{n<=k} sup_{i<=depth} a_{n,i,phi(i+n)}).
inline RieszValue fremlin_left(const TripleSequence& a, const RieszValue& L, const SelectorFunction& phi,
                               std::size_t k, std::size_t depth) {
    RieszValue sum = RieszValue::zero(L.dim(), L.space());
    for (std::size_t n = 1; n <= k; ++n) {
        RieszValue sup = RieszValue::zero(L.dim(), L.space());
        for (std::size_t i = 1; i <= depth; ++i) sup = join(sup, a.at(n, i, phi(i + n)));
        sum = sum + sup;
    }
    return meet(L, sum);
}

/// Right side  sup_{j<=depth} (L ^ b_{j,phi(j)}).
inline RieszValue fremlin_right(const DoubleSequence& b, const RieszValue& L, const SelectorFunction& phi,
                                std::size_t depth) {
    RieszValue sup = RieszValue::zero(L.dim(), L.space());
    for (std::size_t j = 1; j <= depth; ++j) sup = join(sup, meet(L, b.at(j, phi(j))));
    return sup;
}

/// Validates the combiner inequality for one (L, phi, k) on the truncations.
inline bool fremlin_inequality_check(const TripleSequence& a, const DoubleSequence& b, const RieszValue& L,
                                     const SelectorFunction& phi, std::size_t k, std::size_t depth) {
    if (!L.is_nonnegative()) throw ContractViolation("convergence", "fremlin_inequality_check", "L must be >= 0");
    if (k > a.n_count() || depth > a.i_count() || depth > b.i_count())
        throw ContractViolation("convergence", "fremlin_inequality_check", "truncations do not cover k/depth");
    return leq(fremlin_left(a, L, phi, k, depth), fremlin_right(b, L, phi, depth));
}

}  // namespace ordint
