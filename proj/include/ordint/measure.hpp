#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordint/convergence.hpp"
#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"
#include "ordint/sets.hpp"
#include "ordint/summation.hpp"

namespace ordint {

enum SetFunctionProperty : unsigned {
    kNonnegative = 1u << 0,
    kFinitelyAdditive = 1u << 1,
    kSigmaAdditive = 1u << 2,
    kRegularIntegrator = 1u << 3,
};

/// A paving-indexed set function with values in R^d.
class VectorSetFunction {
public:
    using Evaluator = std::function<RieszValue(const PavingSet&)>;

    VectorSetFunction(std::string descriptor, std::size_t dim, Evaluator eval, unsigned properties,
                      std::optional<RieszValue> length_density = std::nullopt)
        : descriptor_(std::move(descriptor)),
          dim_(dim),
          eval_(std::move(eval)),
          properties_(properties),
          length_density_(std::move(length_density)) {}

    RieszValue operator()(const PavingSet& a) const { return eval_(a); }

    const std::string& descriptor() const { return descriptor_; }
    std::size_t dim() const { return dim_; }
    unsigned properties() const { return properties_; }
    bool has(SetFunctionProperty p) const { return (properties_ & p) != 0; }
    /// When present: mu(B) <= density * length(B) for every interval set B.
    const std::optional<RieszValue>& length_density() const { return length_density_; }

private:
    std::string descriptor_;
    std::size_t dim_;
    Evaluator eval_;
    unsigned properties_;
    std::optional<RieszValue> length_density_;
};

namespace measures {

inline constexpr unsigned kMeasure = kNonnegative | kFinitelyAdditive | kSigmaAdditive | kRegularIntegrator;

inline VectorSetFunction length() {
    return VectorSetFunction(
        "length", 1, [](const PavingSet& a) { return RieszValue::scalar(a.intervals().length()); }, kMeasure,
        RieszValue::scalar(1.0));
}

inline VectorSetFunction counting() {
    return VectorSetFunction(
        "counting", 1, [](const PavingSet& a) { return RieszValue::scalar(static_cast<double>(a.finite().size())); },
        kMeasure);
}

/// mu(A) = [s_1 len(A), ..., s_d len(A)].
inline VectorSetFunction vector_length(std::vector<double> scales) {
    if (scales.empty()) throw ContractViolation("measure-theory", "vector_length", "needs at least one scale");
    unsigned props = kFinitelyAdditive | kSigmaAdditive | kRegularIntegrator;
    bool nonneg = true;
    for (double s : scales) nonneg = nonneg && s >= 0.0;
    if (nonneg) props |= kNonnegative;
    std::string desc = "vector(length";
    for (double s : scales) desc += ", " + format_number(s);
    desc += ")";
    RieszValue density(std::span<const double>(scales.data(), scales.size()));
    return VectorSetFunction(
        desc, scales.size(),
        [scales](const PavingSet& a) {
            const double len = a.intervals().length();
            RieszValue::Storage out(scales.size());
            for (std::size_t i = 0; i < scales.size(); ++i) out[i] = scales[i] * len;
            return RieszValue(std::span<const double>(out.data(), out.size()));
        },
        props, nonneg ? std::optional<RieszValue>(density) : std::nullopt);
}

/// Truncated model of the cofinite charge on N: the ground {0..n-1} stands for
/// N, and its top block {tail_start..n-1} stands for a neighbourhood of
/// infinity. mu(A) = 1 iff A contains that block. On a genuinely infinite
/// ground this is finitely additive on the finite/cofinite algebra; on the
/// truncated power set only nonnegativity survives, which is all the
/// sigma-additivity counterexample needs.
inline VectorSetFunction cofinite_charge(std::size_t universe, std::size_t tail_start) {
    if (tail_start >= universe)
        throw ContractViolation("measure-theory", "cofinite_charge", "tail block must be nonempty");
    return VectorSetFunction(
        "cofinite(" + std::to_string(universe) + ")", 1,
        [universe, tail_start](const PavingSet& a) {
            const auto& s = a.finite();
            if (s.universe() != universe) throw StructuralError("measure-theory", "cofinite", "wrong universe");
            for (std::size_t k = tail_start; k < universe; ++k)
                if (!s.contains(static_cast<double>(k))) return RieszValue::scalar(0.0);
            return RieszValue::scalar(1.0);
        },
        kNonnegative);
}

}  // namespace measures

inline RieszValue eval_measure(const VectorSetFunction& mu, const PavedSpace& space, const PavingSet& a) {
    space.require(a, "eval_measure");
    return mu(a);
}

inline bool is_null(const VectorSetFunction& mu, const PavingSet& a) { return mu(a).is_zero(); }

/// |mu(A u B) - mu(A) - mu(B)| for disjoint A, B.
inline RieszValue finite_additivity_residual(const VectorSetFunction& mu, const PavingSet& a, const PavingSet& b) {
    if (!a.disjoint_from(b))
        throw ContractViolation("measure-theory", "finite_additivity_residual", "sets must be disjoint");
    return abs(mu(a.unite(b)) - mu(a) - mu(b));
}

/// A countable family of pairwise disjoint sets with a known union.
struct DisjointStream {
    PavingSet union_set;
    std::function<PavingSet(std::size_t)> part;  ///< 1-based
    std::optional<std::size_t> length;           ///< finite streams end here
    /// Optional: Lebesgue length of union_set minus the first n parts.
    std::function<double(std::size_t)> remaining_length;
};

/// Compares mu(A) with sum_{n<=depth} mu(A_n). Certified when the residual is
/// within a declared tail (finite streams: exactly 0; length streams: the
/// measure's length density times the remaining length), diverged when it
/// exceeds that tail, inconclusive when no tail is declared.
inline ConvergenceReport check_sigma_additivity(const VectorSetFunction& mu, const DisjointStream& parts,
                                                std::size_t depth) {
    const std::size_t n = parts.length ? std::min(*parts.length, depth) : depth;
    std::vector<PavingSet> sets;
    sets.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        sets.push_back(parts.part(i));
        if (!sets.back().subset_of(parts.union_set))
            throw ContractViolation("measure-theory", "check_sigma_additivity",
                                    "part " + std::to_string(i) + " leaves the union");
        for (std::size_t k = 0; k + 1 < sets.size(); ++k)
            if (!sets[k].disjoint_from(sets.back()))
                throw ContractViolation("measure-theory", "check_sigma_additivity",
                                        "parts " + std::to_string(k + 1) + " and " + std::to_string(i) +
                                            " overlap");
    }
    const bool complete = parts.length && *parts.length <= depth;
    if (complete) {
        PavingSet u = parts.union_set.is_interval() ? PavingSet(IntervalSet{})
                                                    : PavingSet(FiniteSubset(parts.union_set.finite().universe(), {}));
        for (const auto& s : sets) u = u.unite(s);
        if (!(u == parts.union_set))
            throw ContractViolation("measure-theory", "check_sigma_additivity", "finite stream does not cover A");
    }

    const RieszValue total = mu(parts.union_set);
    VectorAccumulator acc(total.dim(), total.space());
    ConvergenceReport report;
    RieszValue running = RieszValue::zero(total.dim(), total.space());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const RieszValue v = mu(sets[i]);
        acc.add(v);
        running = running + v;
        report.trace.push_back({i, abs(total - running), RieszValue::zero(total.dim(), total.space())});
    }
    const RieszValue partial = acc.total();
    const RieszValue residual = abs(total - partial);
    report.limit_estimate = partial;
    report.worst_residual = residual;

    std::optional<RieszValue> tail;
    if (complete) {
        tail = RieszValue::zero(total.dim(), total.space());
    } else if (parts.remaining_length && mu.length_density()) {
        tail = *mu.length_density() * parts.remaining_length(n);
    }
    if (!tail) {
        report.verdict = Verdict::inconclusive;
        report.certified_bound = residual;
        return report;
    }
    const RieszValue slack = RieszValue::constant(total.dim(), 1e-12 * std::max(1.0, total.max_abs()), total.space());
    report.certified_bound = *tail;
    if (leq(residual, *tail + slack))
        report.verdict = Verdict::certified;
    else
        report.verdict = Verdict::diverged;
    return report;
}

/// Result of integrating indicators against a set function.
struct RegularIntegratorCheck {
    struct Row {
        PavingSet set;
        RieszValue measure;
        RieszValue integral;
        RieszValue bound;
        bool ok;
    };
    std::vector<Row> rows;
    bool all_ok = true;
};

/// `integrate_indicator(A)` must return an object with `.value` and
/// `.cauchy_bound`: the integral of 1_A and its certified bound.
template <class IntegrateIndicator>
RegularIntegratorCheck check_regular_integrator(const VectorSetFunction& mu, IntegrateIndicator&& integrate_indicator,
                                                std::span<const PavingSet> sample_sets) {
    RegularIntegratorCheck out;
    for (const auto& a : sample_sets) {
        const RieszValue m = mu(a);
        const auto report = integrate_indicator(a);
        const RieszValue slack = RieszValue::constant(m.dim(), 1e-12 * std::max(1.0, m.max_abs()), m.space());
        const bool ok = leq(abs(report.value - m), report.cauchy_bound + slack);
        out.rows.push_back({a, m, report.value, report.cauchy_bound, ok});
        out.all_ok = out.all_ok && ok;
    }
    return out;
}

/// A monotone set function with C(empty) = 0, used for Choquet integrals.
class Capacity {
public:
    Capacity(std::string descriptor, VectorSetFunction::Evaluator eval)
        : descriptor_(std::move(descriptor)), eval_(std::move(eval)) {}

    static Capacity from_measure(const VectorSetFunction& mu) {
        if (!mu.has(kNonnegative))
            throw ContractViolation("measure-theory", "Capacity", "a capacity must be nonnegative");
        return Capacity("capacity(" + mu.descriptor() + ")", [mu](const PavingSet& a) { return mu(a); });
    }

    /// C(A) = length(A)^k.
    static Capacity power_of_length(double k) {
        if (!(k > 0.0)) throw ContractViolation("measure-theory", "Capacity", "exponent must be positive");
        return Capacity("capacity(pow(length, " + format_number(k) + "))", [k](const PavingSet& a) {
            return RieszValue::scalar(std::pow(a.intervals().length(), k));
        });
    }

    RieszValue operator()(const PavingSet& a) const {
        RieszValue v = eval_(a);
        if (!v.is_nonnegative()) throw ContractViolation("measure-theory", "Capacity", "negative capacity value");
        return v;
    }

    RieszValue normalization(const PavedSpace& space) const { return (*this)(space.ground()); }
    const std::string& descriptor() const { return descriptor_; }

    /// Monotonicity on one nested pair A subset of B (exact comparison).
    bool monotone_on(const PavingSet& a, const PavingSet& b) const {
        if (!a.subset_of(b)) throw ContractViolation("measure-theory", "Capacity::monotone_on", "A must be inside B");
        return leq((*this)(a), (*this)(b));
    }

private:
    std::string descriptor_;
    VectorSetFunction::Evaluator eval_;
};

}  // namespace ordint
