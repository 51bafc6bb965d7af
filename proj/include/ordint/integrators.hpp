#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ordint/convergence.hpp"
#include "ordint/errors.hpp"
#include "ordint/integrand.hpp"
#include "ordint/lattice.hpp"
#include "ordint/measure.hpp"
#include "ordint/partition.hpp"
#include "ordint/sets.hpp"
#include "ordint/summability.hpp"
#include "ordint/summation.hpp"

namespace ordint {

struct TraceRow {
    std::size_t step;
    std::size_t n_cells;
    RieszValue value;
    double oscillation;  ///< sup-norm window oscillation
    RieszValue bound;
};

struct IntegralReport {
    std::string integrator;
    RieszValue value;
    RieszValue cauchy_bound;
    Verdict verdict = Verdict::inconclusive;
    bool exact = false;
    std::optional<RieszValue> modulus_bound;  ///< rigorous part, when a modulus is known
    RieszValue policy_spread;
    std::vector<TraceRow> steps;
    std::string note;
};

/// The product fitting the shapes of f and mu.
inline ProductRule infer_product(std::size_t dx, std::size_t dy) {
    if (dx == 1 && dy == 1) return ProductRule::scalar_scalar();
    if (dy == 1) return ProductRule::vector_scalar();
    if (dx == 1) return ProductRule::scalar_vector();
    if (dx == dy) return ProductRule::componentwise();
    throw StructuralError("integrators", "infer_product", "no product between these dimensions");
}

struct IntegrationOptions {
    double tol = 1e-6;
    std::size_t window = 4;
    std::size_t start_step = 0;
    std::size_t max_steps = 24;
    std::vector<TagPolicy> policies{TagPolicy::midpoint()};
    std::optional<ProductRule> product;
};

namespace detail {

/// One step of any chain walk: sums per tag policy and the modulus bound.
struct StepData {
    std::size_t n_cells = 0;
    std::vector<RieszValue> sums;
    std::optional<RieszValue> bound;
    std::string note;
};

inline RieszValue bound_term(const ProductRule& rule, std::size_t dx, double osc, const RieszValue& m) {
    return apply_product(rule, RieszValue::constant(dx, osc), abs(m));
}

/// Sum over cells of osc_i * |mu_i| (cells with mu_i = 0 skipped), or the
/// variation bound V * max|mu_i|, whichever is known and smaller.
inline std::optional<RieszValue> modulus_bound(const Integrand& f, const ProductRule& rule,
                                               const std::vector<PavingSet>& cells,
                                               const std::vector<RieszValue>& measures, std::size_t dz) {
    std::optional<RieszValue> cell_bound;
    bool finite = true;
    VectorAccumulator acc(dz);
    RieszValue max_mu = RieszValue::zero(measures.empty() ? 1 : measures[0].dim());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (measures[i].is_zero()) continue;
        max_mu = join(max_mu, abs(measures[i]));
        if (!finite) continue;
        const double osc = f.cell_oscillation(cells[i]);
        if (!std::isfinite(osc)) {
            finite = false;
            continue;
        }
        if (osc != 0.0) acc.add(bound_term(rule, f.dim(), osc, measures[i]));
    }
    if (finite) cell_bound = acc.count() ? acc.total() : RieszValue::zero(dz);
    std::optional<RieszValue> var_bound;
    if (f.variation()) var_bound = bound_term(rule, f.dim(), *f.variation(), max_mu);
    if (cell_bound && var_bound) return meet(*cell_bound, *var_bound);
    return cell_bound ? cell_bound : var_bound;
}

inline RieszValue tagged_sum(const Integrand& f, const ProductRule& rule, const std::vector<double>& tags,
                             const std::vector<RieszValue>& measures, std::size_t dz) {
    VectorAccumulator acc(dz);
    acc.reserve(tags.size());
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (measures[i].is_zero()) continue;
        acc.add(apply_product(rule, f(tags[i]), measures[i]));
    }
    return acc.count() ? acc.total() : RieszValue::zero(dz);
}

inline std::vector<double> make_tags(const std::vector<PavingSet>& cells, const TagPolicy& policy, std::size_t step) {
    Tagger tagger(policy, step, TagMode::plain);
    std::vector<double> tags;
    tags.reserve(cells.size());
    for (const auto& c : cells) tags.push_back(tagger(c));
    return tags;
}

inline RieszValue const_like(const RieszValue& v, double c) { return RieszValue::constant(v.dim(), c, v.space()); }

/// Walks steps start..start+max_steps-1. Certified once the modulus bound, the
/// window oscillation and the policy spread are all within tol (after a full
/// window), or immediately when the step is exact. At budget exhaustion the
/// walk is diverged when the policies keep disagreeing beyond what the
/// modulus allows, otherwise inconclusive.
template <class StepFn>
IntegralReport walk(const std::string& name, const IntegrationOptions& opt, StepFn&& step_fn) {
    if (opt.window == 0) throw ContractViolation("integrators", name.c_str(), "window must be >= 1");
    if (!(opt.tol > 0.0)) throw ContractViolation("integrators", name.c_str(), "tolerance must be positive");
    IntegralReport r;
    r.integrator = name;
    std::vector<RieszValue> history;
    std::vector<double> spreads;
    std::vector<std::optional<RieszValue>> bounds;
    for (std::size_t k = 0; k < opt.max_steps; ++k) {
        const std::size_t step = opt.start_step + k;
        StepData d;
        try {
            d = step_fn(step);
        } catch (const ResourceError& e) {
            r.note = e.what();
            break;
        }
        const RieszValue value = d.sums.front();
        RieszValue spread = const_like(value, 0.0);
        for (const auto& s : d.sums) spread = join(spread, abs(s - value));
        history.push_back(value);
        spreads.push_back(spread.max_abs());
        bounds.push_back(d.bound);

        RieszValue wosc = const_like(value, 0.0);
        const std::size_t from = history.size() > opt.window ? history.size() - opt.window : 0;
        for (std::size_t i = from; i < history.size(); ++i) wosc = join(wosc, abs(history[i] - value));

        RieszValue cb = join(wosc, spread);
        if (d.bound) cb = join(cb, *d.bound);
        r.value = value;
        r.cauchy_bound = cb;
        r.modulus_bound = d.bound;
        r.policy_spread = spread;
        if (!d.note.empty()) r.note = d.note;
        r.steps.push_back({step, d.n_cells, value, wosc.max_abs(), cb});

        if (d.bound && d.bound->is_zero() && spread.is_zero()) {
            r.exact = true;
            r.verdict = Verdict::certified;
            r.cauchy_bound = const_like(value, 0.0);
            r.steps.back().bound = r.cauchy_bound;
            return r;
        }
        if (d.bound && history.size() >= opt.window && leq(cb, const_like(cb, opt.tol))) {
            r.verdict = Verdict::certified;
            return r;
        }
    }
    if (history.empty()) {
        throw ResourceError("integrators", name.c_str(), r.note.empty() ? "no step could be computed" : r.note);
    }
    r.verdict = Verdict::inconclusive;
    const std::size_t n = spreads.size();
    if (n >= opt.window) {
        bool persistent = true;
        for (std::size_t i = n - opt.window; i < n; ++i) {
            if (!(spreads[i] > opt.tol)) persistent = false;
            if (i > n - opt.window && spreads[i] < spreads[i - 1]) persistent = false;
        }
        const auto& last_bound = bounds.back();
        const bool beyond_modulus = last_bound && spreads.back() > opt.tol + 2.0 * last_bound->max_abs();
        if (beyond_modulus || (!last_bound && persistent)) {
            r.verdict = Verdict::diverged;
            if (r.note.empty()) r.note = "tag policies disagree";
        }
    }
    return r;
}

}  // namespace detail

/// S(f, mu, P) = sum_i f(tau_i) . mu(sigma_i).
inline RieszValue riemann_sum(const Integrand& f, const VectorSetFunction& mu, const TaggedPartition& p,
                              std::optional<ProductRule> product = std::nullopt) {
    const ProductRule rule = product.value_or(infer_product(f.dim(), mu.dim()));
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    std::vector<RieszValue> m;
    m.reserve(p.size());
    for (const auto& c : p.cells()) m.push_back(mu(c));
    return detail::tagged_sum(f, rule, p.tags(), m, dz);
}

/// Rigorous bound |S(f, P) - integral| from the integrand's modulus, if any.
inline std::optional<RieszValue> riemann_bound(const Integrand& f, const VectorSetFunction& mu, const Partition& p,
                                               std::optional<ProductRule> product = std::nullopt) {
    const ProductRule rule = product.value_or(infer_product(f.dim(), mu.dim()));
    std::vector<RieszValue> m;
    m.reserve(p.size());
    for (const auto& c : p.cells()) m.push_back(mu(c));
    return detail::modulus_bound(f, rule, p.cells(), m, rule.result_dim(f.dim(), mu.dim()));
}

namespace detail {

inline void require_certifiable(const VectorSetFunction& mu, const char* op) {
    if (!mu.has(kNonnegative) || !mu.has(kFinitelyAdditive))
        throw ContractViolation("integrators", op, "measure must be declared nonnegative and finitely additive");
}

/// Riemann data of one partition under several policies.
inline StepData riemann_step(const Integrand& f, const VectorSetFunction& mu, const ProductRule& rule,
                             const Partition& p, const std::vector<TagPolicy>& policies, std::size_t step,
                             bool certifiable) {
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    const auto& cells = p.cells();
    std::vector<RieszValue> m;
    m.reserve(cells.size());
    for (const auto& c : cells) m.push_back(mu(c));
    StepData d;
    d.n_cells = cells.size();
    for (const auto& pol : policies) {
        const TaggedPartition tp(p, pol, step);
        d.sums.push_back(tagged_sum(f, rule, tp.tags(), m, dz));
    }
    if (certifiable) d.bound = modulus_bound(f, rule, cells, m, dz);
    return d;
}

}  // namespace detail

enum class SubsetVariant {
    indicator,  ///< integrate f 1_A along chains of the whole ground
    per_set     ///< integrate f along chains of A itself
};

enum class ChainKind { dyadic, graded };

struct NetRiemannOptions : IntegrationOptions {
    SubsetVariant variant = SubsetVariant::per_set;
    ChainKind chain = ChainKind::dyadic;
    std::size_t graded_blocks = 40;
};

/// Net Riemann integral of f over A, walking a dyadic (or graded) refinement
/// chain. With the indicator variant the chain lives on the ground of `space`.
inline IntegralReport net_riemann_integral(const Integrand& f, const VectorSetFunction& mu, const PavedSpace& space,
                                           const PavingSet& a, const NetRiemannOptions& opt = {}) {
    space.require(a, "net_riemann_integral");
    if (opt.policies.empty()) throw ContractViolation("integrators", "net_riemann_integral", "no tag policies");
    const ProductRule rule = opt.product.value_or(infer_product(f.dim(), mu.dim()));
    const bool certifiable = mu.has(kNonnegative) && mu.has(kFinitelyAdditive);
    const bool indicator = opt.variant == SubsetVariant::indicator && !(a == space.ground());
    const Integrand g = indicator ? integrands::restricted(f, a) : f;
    const PavingSet& target = indicator ? space.ground() : a;
    if (target.empty()) {
        IntegralReport r;
        r.integrator = "net_riemann";
        const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
        r.value = r.cauchy_bound = r.policy_spread = RieszValue::zero(dz);
        r.modulus_bound = r.value;
        r.exact = true;
        r.verdict = Verdict::certified;
        r.steps.push_back({0, 0, r.value, 0.0, r.value});
        return r;
    }
    const RefinementChain chain = opt.chain == ChainKind::graded ? RefinementChain::graded(target, opt.graded_blocks)
                                                                 : RefinementChain::dyadic(target);
    return detail::walk("net_riemann", opt, [&](std::size_t step) {
        return detail::riemann_step(g, mu, rule, chain.partition(step), opt.policies, step, certifiable);
    });
}

struct SStarOptions : IntegrationOptions {
    StreamSchedule schedule;
    std::optional<PavingSet> leading_cell;  ///< extends the coverings by {N}
    std::size_t permutation_trials = 1;
    std::uint64_t seed = 0;

    SStarOptions() { max_steps = schedule.levels; }
};

namespace detail {

/// sup|f| * mu(rest): bound on the part of the integral the truncated series misses.
inline std::optional<RieszValue> remainder_bound(const Integrand& f, const VectorSetFunction& mu,
                                                 const ProductRule& rule, const PavingSet& rest) {
    const RieszValue m = mu(rest);
    if (m.is_zero()) return RieszValue::zero(rule.result_dim(f.dim(), mu.dim()));
    if (!f.sup_norm()) return std::nullopt;
    return bound_term(rule, f.dim(), *f.sup_norm(), m);
}

inline std::optional<RieszValue> add_opt(const std::optional<RieszValue>& a, const std::optional<RieszValue>& b) {
    if (a && b) return *a + *b;
    return std::nullopt;
}

}  // namespace detail

/// S*-partition integral: outer refinements of countable dyadic coverings,
/// inner unconditional sums over the first `groups` groups of cells.
inline IntegralReport s_star_partition_integral(const Integrand& f, const VectorSetFunction& mu, const PavingSet& a,
                                                const SStarOptions& opt = {}) {
    if (opt.policies.empty()) throw ContractViolation("integrators", "s_star_partition_integral", "no tag policies");
    const ProductRule rule = opt.product.value_or(infer_product(f.dim(), mu.dim()));
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    const bool certifiable = mu.has(kNonnegative) && mu.has(kSigmaAdditive);
    return detail::walk("s_star", opt, [&](std::size_t outer) {
        CountablePartition cover = opt.schedule.at(a, outer);
        if (opt.leading_cell) cover = cover.with_leading_cell(*opt.leading_cell);
        const auto cells = cover.cells(opt.schedule.groups);
        std::vector<RieszValue> m;
        m.reserve(cells.size());
        for (const auto& c : cells) m.push_back(c.empty() ? RieszValue::zero(mu.dim()) : mu(c));
        detail::StepData d;
        d.n_cells = cells.size();
        for (const auto& pol : opt.policies) {
            const auto tags = detail::make_tags(cells, pol, outer);
            std::vector<RieszValue> terms;
            terms.reserve(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i)
                terms.push_back(m[i].is_zero() ? RieszValue::zero(dz) : apply_product(rule, f(tags[i]), m[i]));
            const auto us = unconditional_sum(TermStream::finite(std::move(terms)), cells.size(),
                                              opt.permutation_trials, opt.seed + outer, SumMode::absolute);
            d.sums.push_back(us.value);
        }
        if (certifiable) {
            d.bound = detail::add_opt(detail::modulus_bound(f, rule, cells, m, dz),
                                      detail::remainder_bound(f, mu, rule, cover.remainder_after(opt.schedule.groups)));
        }
        return d;
    });
}

struct SionOptions : IntegrationOptions {
    StreamSchedule schedule;
    Truncation truncation = Truncation::first_groups(40);

    SionOptions() { max_steps = schedule.levels; }
};

/// Sion integral: finite sums over truncations of the countable coverings.
/// Truncations must keep the covered set increasing along the walk.
inline IntegralReport sion_integral(const Integrand& f, const VectorSetFunction& mu, const PavingSet& a,
                                    const SionOptions& opt = {}) {
    if (opt.policies.empty()) throw ContractViolation("integrators", "sion_integral", "no tag policies");
    const ProductRule rule = opt.product.value_or(infer_product(f.dim(), mu.dim()));
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    const bool certifiable = mu.has(kNonnegative) && mu.has(kSigmaAdditive);
    std::optional<PavingSet> prev_covered;
    return detail::walk("sion", opt, [&](std::size_t outer) {
        const CountablePartition cover = opt.schedule.at(a, outer);
        auto cells = cover.cells(opt.schedule.groups);
        const std::size_t k = std::min(opt.truncation.count(outer - opt.start_step, cover), cells.size());
        cells.resize(k);
        const PavingSet covered = CountablePartition::covered(a, cells, k);
        if (prev_covered && !prev_covered->subset_of(covered))
            throw ContractViolation("integrators", "sion_integral", "truncation is not monotone under refinement");
        prev_covered = covered;
        std::vector<RieszValue> m;
        m.reserve(k);
        for (const auto& c : cells) m.push_back(c.empty() ? RieszValue::zero(mu.dim()) : mu(c));
        detail::StepData d;
        d.n_cells = k;
        for (const auto& pol : opt.policies)
            d.sums.push_back(detail::tagged_sum(f, rule, detail::make_tags(cells, pol, outer), m, dz));
        if (certifiable)
            d.bound = detail::add_opt(detail::modulus_bound(f, rule, cells, m, dz),
                                      detail::remainder_bound(f, mu, rule, a.minus(covered)));
        return d;
    });
}

struct HenstockOptions : IntegrationOptions {
    std::size_t max_depth = 40;
};

/// Gauge integral: one gauge-fine partition per gauge of the schedule.
inline IntegralReport henstock_integral(const Integrand& f, const VectorSetFunction& mu, const PavingSet& interval,
                                        const std::function<Gauge(std::size_t)>& gauges,
                                        const HenstockOptions& opt = {}) {
    const ProductRule rule = opt.product.value_or(infer_product(f.dim(), mu.dim()));
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    const bool certifiable = mu.has(kNonnegative) && mu.has(kFinitelyAdditive);
    return detail::walk("henstock", opt, [&](std::size_t step) {
        const Gauge g = gauges(step);
        const TaggedPartition p = gauge_fine_partition(interval, g, opt.max_depth);
        std::vector<RieszValue> m;
        m.reserve(p.size());
        for (const auto& c : p.cells()) m.push_back(mu(c));
        detail::StepData d;
        d.n_cells = p.size();
        d.sums.push_back(detail::tagged_sum(f, rule, p.tags(), m, dz));
        if (certifiable) d.bound = detail::modulus_bound(f, rule, p.cells(), m, dz);
        return d;
    });
}

/// sum a_i . mu(A_i) split into positive and negative parts, each an
/// unconditional sum, with the declared tail sup_{i>n}|a_i| . mu(U_{i>n} A_i).
inline IntegralReport pavlakos_elementary_integral(const ElementaryFunction& e, const VectorSetFunction& mu,
                                                   std::size_t depth, double tol = 1e-6,
                                                   std::optional<ProductRule> product = std::nullopt) {
    if (!mu.has(kNonnegative) || !mu.has(kSigmaAdditive))
        throw ContractViolation("integrators", "pavlakos_elementary_integral",
                                "measure must be declared nonnegative and sigma-additive");
    const ProductRule rule = product.value_or(infer_product(e.dim, mu.dim()));
    const std::size_t dz = rule.result_dim(e.dim, mu.dim());
    const std::size_t n = e.length ? std::min(*e.length, depth) : depth;
    IntegralReport r;
    r.integrator = "pavlakos_elementary";
    VectorAccumulator pos(dz), neg(dz);
    pos.reserve(n);
    neg.reserve(n);
    std::size_t next_trace = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        const RieszValue a = e.coefficient(i);
        const RieszValue m = mu(e.cell(i));
        pos.add(apply_product(rule, pos_part(a), m));
        neg.add(apply_product(rule, neg_part(a), m));
        if (i == next_trace || i == n) {
            r.steps.push_back({i, i, pos.total() - neg.total(), 0.0, RieszValue::zero(dz)});
            next_trace *= 2;
        }
    }
    r.value = n ? pos.total() - neg.total() : RieszValue::zero(dz);
    r.policy_spread = RieszValue::zero(dz);
    std::optional<RieszValue> tail;
    if (e.length && *e.length <= depth) {
        tail = RieszValue::zero(dz);
    } else if (e.coefficient_tail && e.cell_tail) {
        tail = detail::bound_term(rule, e.dim, e.coefficient_tail(n), mu(e.cell_tail(n)));
    }
    r.modulus_bound = tail;
    r.cauchy_bound = tail ? *tail : RieszValue::constant(dz, kUnbounded);
    if (!r.steps.empty()) r.steps.back().bound = r.cauchy_bound;
    if (!tail) {
        r.verdict = Verdict::inconclusive;
        r.note = "no declared tail";
        r.cauchy_bound = RieszValue::zero(dz);
    } else {
        r.exact = tail->is_zero();
        r.verdict = leq(*tail, RieszValue::constant(dz, tol)) ? Verdict::certified : Verdict::inconclusive;
    }
    return r;
}

struct PavlakosOptions {
    std::size_t first = 1;
    std::size_t last = 10;
    std::size_t depth = 1u << 22;  ///< terms per elementary integral
    double tol = 1e-6;
    std::size_t samples = 257;     ///< grid points for the envelope check
    std::uint64_t seed = 0;
    std::optional<PavingSet> null_set;
    std::optional<ProductRule> product;
};

namespace detail {

/// |a - b| <= u up to the rounding of the subtraction itself.
inline bool within_envelope(const RieszValue& a, const RieszValue& b, const RieszValue& u) {
    for (std::size_t k = 0; k < a.dim(); ++k) {
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a[k]), std::abs(b[k]));
        if (!(std::abs(a[k] - b[k]) <= u[k] + slack)) return false;
    }
    return true;
}

inline std::vector<double> sample_points(const PavingSet& omega, std::size_t count, std::uint64_t seed,
                                         const std::optional<PavingSet>& skip) {
    std::vector<double> pts;
    if (omega.is_finite()) {
        for (auto e : omega.finite().elements()) pts.push_back(e);
    } else {
        for (const auto& p : omega.intervals().pieces()) {
            for (std::size_t k = 0; k < count; ++k) {
                const double x = p.lo + (p.hi - p.lo) * (static_cast<double>(k) / static_cast<double>(count));
                if (p.contains(x)) pts.push_back(x);
            }
            std::mt19937_64 rng(seed);
            for (std::size_t k = 0; k < count; ++k) {
                const double x = p.lo + (p.hi - p.lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
                if (p.contains(x)) pts.push_back(x);
            }
        }
    }
    if (skip) pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double x) { return skip->contains(x); }), pts.end());
    return pts;
}

}  // namespace detail

/// Pavlakos integral of f through elementary approximations with declared
/// uniform envelopes |approx_n - f| <= u_n off the null set.
inline IntegralReport pavlakos_integral(const Integrand& f, const std::function<ElementaryFunction(std::size_t)>& approx,
                                        const UniformRegulatorSequence& u, const VectorSetFunction& mu,
                                        const PavingSet& omega, const PavlakosOptions& opt = {}) {
    if (opt.first < 1 || opt.last < opt.first)
        throw ContractViolation("integrators", "pavlakos_integral", "need 1 <= first <= last");
    const ProductRule rule = opt.product.value_or(infer_product(f.dim(), mu.dim()));
    const std::size_t dz = rule.result_dim(f.dim(), mu.dim());
    const auto pts = detail::sample_points(omega, opt.samples, opt.seed, opt.null_set);
    const RieszValue mu_rest = abs(mu(opt.null_set ? omega.minus(*opt.null_set) : omega));
    IntegralReport r;
    r.integrator = "pavlakos";
    r.policy_spread = RieszValue::zero(dz);
    std::optional<std::vector<RieszValue>> prev_vals;
    for (std::size_t n = opt.first; n <= opt.last; ++n) {
        const ElementaryFunction e = approx(n);
        const RieszValue un = u.u(n);
        std::vector<RieszValue> vals;
        vals.reserve(pts.size());
        for (double x : pts) {
            const RieszValue ex = e(x);
            if (!detail::within_envelope(ex, f(x), un))
                throw ContractViolation("integrators", "pavlakos_integral",
                                        "approximation " + std::to_string(n) + " leaves the envelope at x = " +
                                            format_number(x));
            vals.push_back(ex);
        }
        if (prev_vals)
            for (std::size_t i = 0; i < vals.size(); ++i)
                if (!leq((*prev_vals)[i], vals[i]))
                    throw ContractViolation("integrators", "pavlakos_integral",
                                            "approximations are not increasing at x = " + format_number(pts[i]));
        prev_vals = std::move(vals);
        const IntegralReport er = pavlakos_elementary_integral(e, mu, opt.depth, opt.tol, rule);
        const RieszValue bound = er.modulus_bound ? *er.modulus_bound + apply_product(rule, un, mu_rest)
                                                  : RieszValue::constant(dz, kUnbounded);
        r.value = er.value;
        r.cauchy_bound = bound;
        r.modulus_bound = er.modulus_bound ? std::optional<RieszValue>(bound) : std::nullopt;
        const std::size_t cells = e.length.value_or(opt.depth);
        double osc = 0.0;
        for (const auto& row : r.steps) osc = std::max(osc, (row.value - er.value).max_abs());
        r.steps.push_back({n, cells, er.value, osc, bound});
    }
    r.verdict = (r.modulus_bound && leq(*r.modulus_bound, RieszValue::constant(dz, opt.tol))) ? Verdict::certified
                                                                                            : Verdict::inconclusive;
    return r;
}

/// One approximating net for the abstract Lebesgue integral: members f_i and
/// a declared Cauchy envelope |f_i - f_j| <= u_i for j >= i.
struct ApproximatingNet {
    std::string name;
    std::function<Integrand(std::size_t)> member;  ///< 1-based
    std::function<double(std::size_t)> u;
    std::size_t count = 1;
};

/// Limit of base integrals along each net; certified only when every net
/// agrees with every other within their combined bounds.
inline IntegralReport abstract_lebesgue_integral(const std::vector<ApproximatingNet>& nets,
                                                 const std::function<IntegralReport(const Integrand&)>& base,
                                                 const RieszValue& mu_of_a, const PavingSet& a, double tol = 1e-6,
                                                 std::size_t samples = 129) {
    if (nets.empty()) throw ContractViolation("integrators", "abstract_lebesgue_integral", "no approximating nets");
    IntegralReport r;
    r.integrator = "abstract_lebesgue";
    const auto pts = detail::sample_points(a, samples, 7, std::nullopt);
    std::vector<RieszValue> values, bounds;
    for (std::size_t k = 0; k < nets.size(); ++k) {
        const auto& net = nets[k];
        std::optional<Integrand> prev;
        IntegralReport last;
        for (std::size_t i = 1; i <= net.count; ++i) {
            const Integrand fi = net.member(i);
            if (prev)
                for (double x : pts)
                    if ((fi(x) - (*prev)(x)).max_abs() > net.u(i - 1))
                        throw ContractViolation("integrators", "abstract_lebesgue_integral",
                                                "net " + net.name + " leaves its declared envelope");
            last = base(fi);
            const RieszValue b = last.cauchy_bound + apply_product(infer_product(1, mu_of_a.dim()),
                                                                   RieszValue::scalar(net.u(i)), abs(mu_of_a));
            r.steps.push_back({k * 1000 + i, last.steps.empty() ? 0 : last.steps.back().n_cells, last.value,
                               0.0, b});
            prev = fi;
        }
        values.push_back(last.value);
        bounds.push_back(r.steps.back().bound);
    }
    r.value = values.front();
    r.cauchy_bound = bounds.front();
    r.policy_spread = RieszValue::zero(r.value.dim());
    bool agree = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
        r.cauchy_bound = join(r.cauchy_bound, bounds[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const RieszValue gap = abs(values[i] - values[j]);
            r.policy_spread = join(r.policy_spread, gap);
            if (!leq(gap, bounds[i] + bounds[j])) agree = false;
        }
    }
    r.modulus_bound = r.cauchy_bound;
    if (!agree) {
        r.verdict = Verdict::diverged;
        r.note = "approximating nets disagree";
    } else {
        r.verdict = leq(r.cauchy_bound, RieszValue::constant(r.cauchy_bound.dim(), tol)) ? Verdict::certified
                                                                                        : Verdict::inconclusive;
    }
    return r;
}

struct SaksOptions {
    double tol = 1e-6;
    /// Declared |integral over the union - integral over A_k|, if known.
    std::function<RieszValue(std::size_t)> tail;
};

/// Limit of base integrals along an inclusion-increasing chain of sets.
inline IntegralReport saks_integral(const std::vector<PavingSet>& chain,
                                    const std::function<IntegralReport(const PavingSet&)>& base,
                                    const SaksOptions& opt = {}) {
    if (chain.empty()) throw ContractViolation("integrators", "saks_integral", "empty chain");
    for (std::size_t k = 1; k < chain.size(); ++k)
        if (!chain[k - 1].subset_of(chain[k]))
            throw ContractViolation("integrators", "saks_integral",
                                    "chain is not increasing at position " + std::to_string(k + 1));
    IntegralReport r;
    r.integrator = "saks";
    std::vector<RieszValue> vals;
    IntegralReport last;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        last = base(chain[k]);
        vals.push_back(last.value);
        r.steps.push_back({k + 1, last.steps.empty() ? 0 : last.steps.back().n_cells, last.value,
                           k ? (last.value - vals[k - 1]).max_abs() : 0.0, last.cauchy_bound});
    }
    r.value = last.value;
    r.policy_spread = RieszValue::zero(r.value.dim());
    const bool constant_chain = std::all_of(chain.begin(), chain.end(), [&](const PavingSet& s) { return s == chain[0]; });
    std::optional<RieszValue> tail;
    if (constant_chain)
        tail = RieszValue::zero(r.value.dim());
    else if (opt.tail)
        tail = opt.tail(chain.size());
    const bool base_ok = last.verdict == Verdict::certified && last.modulus_bound.has_value();
    if (tail && base_ok) {
        r.cauchy_bound = last.cauchy_bound + *tail;
        r.modulus_bound = r.cauchy_bound;
        r.exact = last.exact && tail->is_zero();
        r.verdict = leq(r.cauchy_bound, RieszValue::constant(r.cauchy_bound.dim(), opt.tol)) ? Verdict::certified
                                                                                           : Verdict::inconclusive;
    } else {
        r.cauchy_bound = vals.size() > 1 ? abs(vals.back() - vals[vals.size() - 2]) : last.cauchy_bound;
        bool up = true, down = true;
        for (std::size_t k = 1; k < vals.size(); ++k) {
            up = up && leq(vals[k - 1], vals[k]);
            down = down && leq(vals[k], vals[k - 1]);
        }
        r.note = std::string("no declared tail; trend ") + (up ? "increasing" : down ? "decreasing" : "mixed");
        r.verdict = Verdict::inconclusive;
    }
    return r;
}

namespace detail {

/// First point of [lo, hi] where the monotone predicate holds, given
/// !holds(lo) and holds(hi). `score` steers an Illinois-type false position
/// step; the bracket always closes to adjacent doubles, so the answer is the
/// one plain bisection would give.
template <class Holds, class Score>
double first_true(double lo, double hi, Holds&& holds, Score&& score) {
    double slo = score(lo), shi = score(hi);
    int side = 0;
    for (int it = 0; std::nextafter(lo, hi) < hi; ++it) {
        double mid = lo + 0.5 * (hi - lo);
        if (it % 4 != 3 && std::isfinite(slo) && std::isfinite(shi) && shi != slo) {
            const double guess = lo - slo * ((hi - lo) / (shi - slo));
            if (std::isfinite(guess)) mid = guess;
        }
        if (!(mid > lo)) mid = std::nextafter(lo, hi);
        if (!(mid < hi)) mid = std::nextafter(hi, lo);
        const double sm = score(mid);
        if (holds(mid)) {
            hi = mid;
            shi = sm;
            if (side == 1) slo *= 0.5;
            side = 1;
        } else {
            lo = mid;
            slo = sm;
            if (side == -1) shi *= 0.5;
            side = -1;
        }
    }
    return hi;
}

}  // namespace detail

/// {x in omega : f(x) >= t} for scalar f monotone on each declared piece.
inline PavingSet level_set(const Integrand& f, const PavingSet& omega, double t) {
    if (f.dim() != 1) throw StructuralError("integrators", "level_set", "level sets need a scalar integrand");
    if (f.monotone_pieces().empty())
        throw StructuralError("integrators", "level_set",
                              "level set outside the paving: integrand not declared piecewise monotone");
    IntervalSet::Pieces out;
    for (const auto& mp : f.monotone_pieces()) {
        const double a = mp.lo;
        const double b = std::nextafter(mp.hi, mp.lo);  // last point of [lo, hi)
        auto val = [&](double x) { return f(x).as_scalar(); };
        if (mp.increasing) {
            if (val(a) >= t) {
                out.push_back({mp.lo, mp.hi, true, false});
                continue;
            }
            if (!(val(b) >= t)) continue;
            const double x = detail::first_true(
                a, b, [&](double y) { return val(y) >= t; }, [&](double y) { return val(y) - t; });
            out.push_back({x, mp.hi, true, false});
        } else {
            if (!(val(a) >= t)) continue;
            if (val(b) >= t) {
                out.push_back({mp.lo, mp.hi, true, false});
                continue;
            }
            const double x = detail::first_true(
                a, b, [&](double y) { return !(val(y) >= t); }, [&](double y) { return t - val(y); });
            out.push_back({mp.lo, x, true, false});
        }
    }
    return PavingSet(IntervalSet::from_pieces(std::move(out))).intersect(omega);
}

struct ChoquetOptions : NetRiemannOptions {
    double first_endpoint = 1.0;
    std::size_t max_expansions = 40;

    ChoquetOptions() {
        start_step = 16;
        max_steps = 8;
    }
};

/// Choquet integral as the Saks limit in a of the net Riemann integral of
/// u(t) = C({f >= t}) over [0, a). Endpoints double until u(a) = 0.
inline IntegralReport choquet_integral(const Integrand& f, const Capacity& cap, const PavingSet& omega,
                                       const ChoquetOptions& opt = {}) {
    if (f.dim() != 1) throw ContractViolation("integrators", "choquet_integral", "integrand must be scalar");
    for (const auto& mp : f.monotone_pieces())
        if (f(mp.lo).as_scalar() < 0.0 || f(std::nextafter(mp.hi, mp.lo)).as_scalar() < 0.0)
            throw ContractViolation("integrators", "choquet_integral", "integrand must be nonnegative");
    auto u = [f, cap, omega](double t) { return cap(level_set(f, omega, t)); };
    const double u0 = u(0.0).as_scalar();
    double a = opt.first_endpoint;
    std::size_t k = 0;
    std::vector<TraceRow> expansions;
    while (u(a).as_scalar() != 0.0 && k < opt.max_expansions) {
        expansions.push_back({k, 0, u(a), 0.0, RieszValue::scalar(a)});
        a *= 2.0;
        ++k;
    }
    const double ua = u(a).as_scalar();
    Integrand level("u", 1, u);
    level.with_sup(u0).with_variation(u0 - ua);
    const PavedSpace tspace = PavedSpace::interval(0.0, a);
    IntegralReport r = net_riemann_integral(level, measures::length(), tspace, tspace.ground(), opt);
    r.integrator = "choquet";
    if (ua != 0.0) {
        r.verdict = Verdict::inconclusive;
        r.note = "level function still positive at a = " + format_number(a);
    } else {
        r.note = "level sets empty from t = " + format_number(a);
    }
    return r;
}

}  // namespace ordint
