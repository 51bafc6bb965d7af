#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"
#include "ordint/summation.hpp"

namespace ordint {

/// Declared domination |a_n| <= scale * ratio^n for every n.
struct GeometricTail {
    RieszValue scale;
    double ratio;

    /// Bound on sum_{n > depth} |a_n|.
    RieszValue after(std::size_t depth) const {
        return scale * (std::pow(ratio, static_cast<double>(depth + 1)) / (1.0 - ratio));
    }
};

/// A lazily enumerated series a_1, a_2, ... (1-based). Finite streams carry a
/// length; past it the terms are 0.
struct TermStream {
    std::size_t dim = 1;
    SpaceTag space = kEuclidean;
    std::function<RieszValue(std::size_t)> term;
    std::optional<std::size_t> length;
    std::optional<GeometricTail> tail;

    static TermStream empty(std::size_t dim) { return {dim, kEuclidean, nullptr, std::size_t{0}, std::nullopt}; }

    static TermStream finite(std::vector<RieszValue> terms) {
        if (terms.empty()) throw ContractViolation("convergence", "TermStream", "use TermStream::empty");
        TermStream s;
        s.dim = terms[0].dim();
        s.space = terms[0].space();
        s.length = terms.size();
        s.term = [t = std::move(terms)](std::size_t n) { return t[n - 1]; };
        return s;
    }

    std::size_t available(std::size_t depth) const { return length ? std::min(*length, depth) : depth; }
};

enum class SumMode {
    nonnegative,  ///< every term must be >= 0
    absolute      ///< positive and negative parts summed separately
};

struct UnconditionalSum {
    RieszValue value;
    std::optional<RieszValue> tail_bound;  ///< absent when the stream declares no tail
    RieszValue permutation_spread;          ///< max deviation seen across permutations
};

namespace detail {

inline std::vector<RieszValue> collect_terms(const TermStream& s, std::size_t depth) {
    std::vector<RieszValue> out;
    const std::size_t n = s.available(depth);
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        RieszValue t = s.term(i);
        if (t.dim() != s.dim || t.space() != s.space)
            throw StructuralError("convergence", "series", "term " + std::to_string(i) + " has the wrong shape");
        out.push_back(std::move(t));
    }
    return out;
}

inline RieszValue sum_parts(const std::vector<RieszValue>& terms, const std::vector<std::size_t>& order,
                            std::size_t dim, SpaceTag space, SumMode mode) {
    VectorAccumulator pos(dim, space), neg(dim, space);
    pos.reserve(order.size());
    if (mode == SumMode::absolute) neg.reserve(order.size());
    for (std::size_t idx : order) {
        if (mode == SumMode::nonnegative) {
            pos.add(terms[idx]);
        } else {
            pos.add(pos_part(terms[idx]));
            neg.add(neg_part(terms[idx]));
        }
    }
    return mode == SumMode::nonnegative ? pos.total() : pos.total() - neg.total();
}

}  // namespace detail

/// Limit of the finite-subset net of partial sums, truncated to `depth` terms.
/// For nonnegative terms this is the supremum of the increasing partial sums.
/// `permutation_trials` seeded shuffles of the first `depth` terms must agree
/// with the identity order within 1e-12 * depth (relative to the term scale).
inline UnconditionalSum unconditional_sum(const TermStream& s, std::size_t depth, std::size_t permutation_trials = 0,
                                          std::uint64_t seed = 0, SumMode mode = SumMode::nonnegative) {
    if (depth < 1) throw ContractViolation("convergence", "unconditional_sum", "depth must be >= 1");
    const auto terms = detail::collect_terms(s, depth);
    if (mode == SumMode::nonnegative) {
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (!terms[i].is_nonnegative())
                throw ContractViolation("convergence", "unconditional_sum",
                                        "negative term " + std::to_string(i + 1) + " in nonnegative mode");
    }
    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    UnconditionalSum r;
    r.value = detail::sum_parts(terms, order, s.dim, s.space, mode);
    r.permutation_spread = RieszValue::zero(s.dim, s.space);

    double scale = 0.0;
    for (const auto& t : terms) scale = std::max(scale, t.max_abs());
    const double allowed = 1e-12 * static_cast<double>(std::max<std::size_t>(terms.size(), 1)) * std::max(scale, 1.0);

    std::mt19937_64 rng(seed);
    for (std::size_t trial = 0; trial < permutation_trials; ++trial) {
        std::shuffle(order.begin(), order.end(), rng);
        const RieszValue v = detail::sum_parts(terms, order, s.dim, s.space, mode);
        r.permutation_spread = join(r.permutation_spread, abs(v - r.value));
    }
    if (r.permutation_spread.max_abs() > allowed)
        throw ContractViolation("convergence", "unconditional_sum", "rearrangements disagree beyond 1e-12*depth");

    if (s.length && *s.length <= depth)
        r.tail_bound = RieszValue::zero(s.dim, s.space);
    else if (s.tail)
        r.tail_bound = s.tail->after(depth);
    return r;
}

/// Ordered partial sum a_1 + ... + a_depth.
inline RieszValue conditional_sum(const TermStream& s, std::size_t depth) {
    const auto terms = detail::collect_terms(s, depth);
    RieszValue total = RieszValue::zero(s.dim, s.space);
    for (const auto& t : terms) total = total + t;
    return total;
}

}  // namespace ordint
