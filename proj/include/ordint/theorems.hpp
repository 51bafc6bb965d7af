#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordint/convergence.hpp"
#include "ordint/integrand.hpp"
#include "ordint/integrators.hpp"
#include "ordint/measure.hpp"
#include "ordint/partition.hpp"

namespace ordint {

/// One verified property: passed iff residual <= bound (or the exact
/// comparison it names held).
struct PropertyCheck {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct PropertyReport {
    std::vector<PropertyCheck> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
    }
    void add(PropertyCheck c) { checks.push_back(std::move(c)); }
    void merge(const PropertyReport& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
};

namespace detail {

inline PropertyCheck within(std::string name, const RieszValue& residual, const RieszValue& bound,
                            std::string detail = {}) {
    PropertyCheck c;
    c.name = std::move(name);
    c.residual = residual.max_abs();
    c.bound = bound.max_abs();
    c.passed = leq(abs(residual), bound);
    c.detail = std::move(detail);
    return c;
}

inline RieszValue rigorous(const IntegralReport& r) {
    return r.modulus_bound ? join(*r.modulus_bound, r.cauchy_bound) : RieszValue::constant(r.value.dim(), kUnbounded);
}

}  // namespace detail

struct LawOptions {
    NetRiemannOptions integration;
    std::size_t termwise_steps = 10;  ///< chain steps checked term by term
};

/// Additivity, positivity, isotonicity and the triangle inequality for the
/// net Riemann integral. Positivity uses f+, isotonicity the pair f ^ g <= g.
inline PropertyReport verify_integral_laws(const Integrand& f, const Integrand& g, const VectorSetFunction& mu,
                                           const PavedSpace& space, const PavingSet& a, const LawOptions& opt = {}) {
    detail::require_certifiable(mu, "verify_integral_laws");
    PropertyReport rep;
    const Integrand fg = integrands::sum(f, g);
    const Integrand fp = integrands::positive_part(f);
    const Integrand lo = integrands::minimum(f, g);
    const Integrand af = integrands::absolute(f);
    const ProductRule rule = opt.integration.product.value_or(infer_product(f.dim(), mu.dim()));
    const RefinementChain chain = RefinementChain::dyadic(a);
    const TagPolicy& pol = opt.integration.policies.front();

    bool add_ok = true, pos_ok = true, iso_ok = true, tri_ok = true;
    double add_worst = 0.0, add_allow = 0.0;
    for (std::size_t k = 0; k < opt.termwise_steps; ++k) {
        const TaggedPartition p = chain.at(k, pol);
        const RieszValue sf = riemann_sum(f, mu, p, rule), sg = riemann_sum(g, mu, p, rule);
        const RieszValue sfg = riemann_sum(fg, mu, p, rule);
        const double scale = std::max({1.0, sf.max_abs(), sg.max_abs(), sfg.max_abs()});
        const double allow = 1e-12 * static_cast<double>(p.size()) * scale;
        const double res = (sfg - sf - sg).max_abs();
        add_worst = std::max(add_worst, res);
        add_allow = std::max(add_allow, allow);
        add_ok = add_ok && res <= allow;
        pos_ok = pos_ok && riemann_sum(fp, mu, p, rule).is_nonnegative();
        iso_ok = iso_ok && leq(riemann_sum(lo, mu, p, rule), sg);
        tri_ok = tri_ok && leq(abs(sf), riemann_sum(af, mu, p, rule));
    }
    rep.add({"riemann_additivity", add_ok, add_worst, add_allow, "every step within 1e-12*|P|"});
    rep.add({"riemann_positivity", pos_ok, 0.0, 0.0, "S(f+, P) >= 0 exactly at every step"});
    rep.add({"riemann_isotonicity", iso_ok, 0.0, 0.0, "S(f^g, P) <= S(g, P) exactly at every step"});
    rep.add({"riemann_triangle", tri_ok, 0.0, 0.0, "|S(f, P)| <= S(|f|, P) exactly at every step"});

    const auto If = net_riemann_integral(f, mu, space, a, opt.integration);
    const auto Ig = net_riemann_integral(g, mu, space, a, opt.integration);
    const auto Ifg = net_riemann_integral(fg, mu, space, a, opt.integration);
    const auto Iaf = net_riemann_integral(af, mu, space, a, opt.integration);
    rep.add(detail::within("integral_additivity", Ifg.value - If.value - Ig.value,
                           detail::rigorous(Ifg) + detail::rigorous(If) + detail::rigorous(Ig)));
    const RieszValue tri_excess = pos_part(abs(If.value) - Iaf.value);
    rep.add(detail::within("integral_triangle", tri_excess, detail::rigorous(If) + detail::rigorous(Iaf)));
    return rep;
}

struct UniformOptions {
    std::size_t count = 20;
    std::optional<PavingSet> null_set;
    std::size_t samples = 257;
    std::uint64_t seed = 0;
};

/// |int f_n - int f| <= u_n mu(Omega \ N) + bounds for n = 1..count, and the
/// limsup - liminf gap of the integrals within u_count mu(Omega \ N) + 2 bound.
inline PropertyReport verify_uniform_convergence(
    const std::function<Integrand(std::size_t)>& f_seq, const Integrand& f, const UniformRegulatorSequence& u,
    const VectorSetFunction& mu, const PavingSet& omega,
    const std::function<IntegralReport(std::size_t, const Integrand&)>& integrate, const UniformOptions& opt = {}) {
    if (!u.monotone_on(opt.count))
        throw ContractViolation("integrators", "verify_uniform_convergence", "u_n must decrease to 0");
    const ProductRule rule = infer_product(f.dim(), mu.dim());
    const auto pts = detail::sample_points(omega, opt.samples, opt.seed, opt.null_set);
    const RieszValue mu_rest = abs(mu(opt.null_set ? omega.minus(*opt.null_set) : omega));
    const IntegralReport If = integrate(0, f);
    const RieszValue bf = detail::rigorous(If);
    PropertyReport rep;
    std::vector<RieszValue> values;
    RieszValue worst_bound = bf;
    bool all_ok = true;
    double worst_res = 0.0, worst_allow = 0.0;
    for (std::size_t n = 1; n <= opt.count; ++n) {
        const Integrand fn = f_seq(n);
        const RieszValue un = u.u(n);
        for (double x : pts)
            if (!detail::within_envelope(fn(x), f(x), un))
                throw ContractViolation("integrators", "verify_uniform_convergence",
                                        "f_" + std::to_string(n) + " leaves u_n at x = " + format_number(x));
        const IntegralReport In = integrate(n, fn);
        const RieszValue bn = detail::rigorous(In);
        worst_bound = join(worst_bound, bn);
        const RieszValue allow = apply_product(rule, un, mu_rest) + bn + bf;
        const RieszValue res = abs(In.value - If.value);
        all_ok = all_ok && leq(res, allow);
        worst_res = std::max(worst_res, res.max_abs());
        worst_allow = std::max(worst_allow, allow.max_abs());
        values.push_back(In.value);
    }
    rep.add({"uniform_gap", all_ok, worst_res, worst_allow, "|int f_n - int f| for every n"});
    const auto ll = order_limsup_liminf(NetSample::from_sequence(values));
    const RieszValue spread = ll.limsup - ll.liminf;
    const RieszValue allow = apply_product(rule, u.u(opt.count), mu_rest) + 2.0 * worst_bound;
    rep.add(detail::within("limsup_liminf_gap", spread, allow));
    return rep;
}

/// S*-integral over a null set is exactly zero.
inline PropertyCheck check_null_integral(const Integrand& f, const VectorSetFunction& mu, const PavingSet& n,
                                         const SStarOptions& opt = {}) {
    if (!is_null(mu, n)) throw ContractViolation("measure-theory", "check_null_integral", "set is not null");
    const auto r = s_star_partition_integral(f, mu, n, opt);
    return {"null_integral", r.value.is_zero() && r.verdict == Verdict::certified, r.value.max_abs(), 0.0,
            to_string(r.verdict)};
}

/// int over Omega equals int over Omega \ N within combined bounds.
inline PropertyCheck check_null_invariance(const Integrand& f, const VectorSetFunction& mu, const PavingSet& omega,
                                           const PavingSet& n, const SStarOptions& opt = {}) {
    const auto a = s_star_partition_integral(f, mu, omega, opt);
    const auto b = s_star_partition_integral(f, mu, omega.minus(n), opt);
    return detail::within("null_invariance", a.value - b.value, detail::rigorous(a) + detail::rigorous(b));
}

/// Coverings of Omega \ N extended by the cell N integrate g (= f off N, wild
/// on N) to the integral of f over Omega along plain coverings of Omega.
inline PropertyCheck check_chain_extension(const Integrand& f, const VectorSetFunction& mu, const PavingSet& omega,
                                           const PavingSet& n, const RieszValue& wild, const SStarOptions& opt = {}) {
    const Integrand g = integrands::modified_on(f, n, wild);
    SStarOptions ext = opt;
    ext.leading_cell = n;
    const auto a = s_star_partition_integral(g, mu, omega.minus(n), ext);
    const auto b = s_star_partition_integral(f, mu, omega, opt);
    return detail::within("chain_extension", a.value - b.value, detail::rigorous(a) + detail::rigorous(b));
}

/// Two integrals of the same function agree within their combined bounds.
inline PropertyCheck check_agreement(std::string name, const IntegralReport& a, const IntegralReport& b) {
    auto c = detail::within(std::move(name), a.value - b.value, detail::rigorous(a) + detail::rigorous(b));
    c.detail = a.integrator + " " + to_string(a.verdict) + " vs " + b.integrator + " " + to_string(b.verdict);
    return c;
}

/// nu(A) = int_A f dmu against sum of nu(A_n) over a countable disjoint
/// covering, with tail sup f * mu(rest).
inline PropertyCheck check_induced_sigma_additivity(const Integrand& f, const VectorSetFunction& mu,
                                                    const PavingSet& a, std::size_t parts,
                                                    const std::function<IntegralReport(const PavingSet&)>& integrate) {
    const CountablePartition cover(a, StreamKind::uniform_halving, 0);
    const DisjointStream s = cover.as_disjoint_stream();
    const auto whole = integrate(a);
    RieszValue total = RieszValue::zero(whole.value.dim());
    RieszValue bound = detail::rigorous(whole);
    for (std::size_t i = 1; i <= parts; ++i) {
        const PavingSet ai = s.part(i);
        if (ai.empty()) continue;
        const auto r = integrate(ai);
        total = total + r.value;
        bound = bound + detail::rigorous(r);
    }
    const ProductRule rule = infer_product(f.dim(), mu.dim());
    if (auto t = detail::remainder_bound(f, mu, rule, cover.remainder_after(parts)))
        bound = bound + *t;
    else
        bound = RieszValue::constant(bound.dim(), kUnbounded);
    return detail::within("induced_sigma_additivity", whole.value - total, bound);
}

}  // namespace ordint
