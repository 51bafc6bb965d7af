#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordint/fixtures.hpp"
#include "ordint/integrand.hpp"
#include "ordint/integrators.hpp"
#include "ordint/measure.hpp"
#include "ordint/summability.hpp"
#include "ordint/theorems.hpp"

namespace ordint {

struct SuiteEntry {
    std::string experiment;
    PropertyCheck check;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<SuiteEntry> entries;

    bool all_passed() const {
        return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.check.passed; });
    }

    void add(const std::string& experiment, const PropertyCheck& c) { entries.push_back({experiment, c}); }
    void add(const std::string& experiment, const PropertyReport& r) {
        for (const auto& c : r.checks) add(experiment, c);
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& e : entries)
            rows.push_back({{"experiment", e.experiment},
                            {"property", e.check.name},
                            {"passed", e.check.passed},
                            {"residual", e.check.residual},
                            {"bound", e.check.bound},
                            {"detail", e.check.detail}});
        return {{"suite", suite}, {"seed", seed}, {"passed", all_passed()}, {"properties", rows}};
    }
};

/// Trial counts per suite; zero keeps the suite default.
struct SuiteOptions {
    std::size_t trials = 0;
    double tol = 0.0;
};

namespace suites {

inline std::string label(const char* stem, std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%03zu", k);
    return std::string(stem) + "-" + buf;
}

inline std::size_t count_or(const SuiteOptions& o, std::size_t d) { return o.trials ? o.trials : d; }
inline double tol_or(const SuiteOptions& o, double d) { return o.tol > 0.0 ? o.tol : d; }

inline Integrand vec2(const std::string& a, const std::string& b) {
    return fixtures::compile_on_unit("vec(" + a + ", " + b + ")");
}

/// Additivity, positivity, isotonicity and the triangle inequality on random
/// pairs: scalar Lipschitz, Lipschitz vs simple, and R^2-valued.
inline void laws(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    fixtures::Rng rng(seed);
    const PavedSpace space = PavedSpace::interval(0.0, 1.0);
    LawOptions lo;
    lo.integration.tol = tol_or(o, 1e-4);
    for (std::size_t k = 0; k < count_or(o, 20); ++k) {
        const auto a = fixtures::random_lipschitz(rng), b = fixtures::random_lipschitz(rng);
        Integrand f = fixtures::compile_on_unit(a.expr), g = fixtures::compile_on_unit(b.expr);
        if (k % 3 == 1) g = integrands::simple(fixtures::random_simple(rng).parts);
        if (k % 3 == 2) {
            const auto c = fixtures::random_lipschitz(rng), d = fixtures::random_lipschitz(rng);
            f = vec2(a.expr, c.expr);
            g = vec2(b.expr, d.expr);
        }
        const auto mu = k % 2 == 0 ? measures::length() : measures::vector_length({1.0, 0.5});
        rep.add(label("pair", k), verify_integral_laws(f, g, mu, space, space.ground(), lo));
    }
}

/// f + 2^-n, and lower staircases of random Lipschitz f.
inline void uniform(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    fixtures::Rng rng(seed);
    const PavedSpace space = PavedSpace::interval(0.0, 1.0);
    const auto mu = measures::length();
    NetRiemannOptions nr;
    nr.tol = tol_or(o, 1e-5);
    {
        const Integrand f = fixtures::compile_on_unit(fixtures::random_lipschitz(rng).expr);
        const auto u = UniformRegulatorSequence::geometric(1, 1.0, 0.5);
        auto seq = [&](std::size_t n) { return integrands::shifted(f, u.u(n)); };
        auto integrate = [&](std::size_t, const Integrand& g) {
            return net_riemann_integral(g, mu, space, space.ground(), nr);
        };
        rep.add("shift", verify_uniform_convergence(seq, f, u, mu, space.ground(), integrate));
    }
    for (std::size_t k = 0; k < count_or(o, 3); ++k) {
        const auto fx = fixtures::random_lipschitz(rng);
        const Integrand f = fixtures::compile_on_unit(fx.expr);
        const double l = fx.lipschitz;
        const UniformRegulatorSequence u{"2L2^-n", [l](std::size_t n) {
                                             return RieszValue::scalar(2.0 * l * std::ldexp(1.0, -static_cast<int>(n)));
                                         }};
        auto seq = [&](std::size_t n) {
            return elementary::staircase(f, 0.0, 1.0, std::size_t{1} << n, l, elementary::StairKind::lower_lipschitz)
                .as_integrand();
        };
        auto integrate = [&](std::size_t n, const Integrand& g) {
            NetRiemannOptions at = nr;
            at.start_step = n;
            return net_riemann_integral(g, mu, space, space.ground(), at);
        };
        rep.add(label("staircase", k), verify_uniform_convergence(seq, f, u, mu, space.ground(), integrate));
    }
}

inline SStarOptions s_star_options(double tol, std::size_t last_level) {
    SStarOptions s;
    s.tol = tol;
    s.schedule.levels = last_level + 1 - s.schedule.first_level;
    s.max_steps = s.schedule.levels;
    return s;
}

/// Pavlakos vs S* on the 1/3 fixture and on lower staircases.
inline void pavlakos_equivalence(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    fixtures::Rng rng(seed);
    const auto mu = measures::length();
    const PavingSet omega = PavingSet::half_open(0.0, 1.0);
    const double tol = tol_or(o, 1e-5);
    const SStarOptions ss = s_star_options(tol, 18);
    {
        const ElementaryFunction e = elementary::dyadic_halves();
        rep.add("thirds", check_agreement("pavlakos_vs_s_star",
                                          pavlakos_elementary_integral(e, mu, std::size_t{1} << 22, tol, std::nullopt),
                                          s_star_partition_integral(e.as_integrand(), mu, omega, ss)));
    }
    const std::size_t n = count_or(o, 3);
    for (std::size_t k = 0; k < n; ++k) {
        const auto fx = fixtures::random_lipschitz(rng, 0.5);
        const Integrand f = fixtures::compile_on_unit(fx.expr);
        const double l = fx.lipschitz;
        const UniformRegulatorSequence u{"2L2^-n", [l](std::size_t m) {
                                             return RieszValue::scalar(2.0 * l * std::ldexp(1.0, -static_cast<int>(m)));
                                         }};
        PavlakosOptions po;
        po.first = 17;
        po.last = 19;
        po.tol = tol;
        po.seed = seed + k;
        auto approx = [&](std::size_t m) {
            return elementary::staircase(f, 0.0, 1.0, std::size_t{1} << m, l, elementary::StairKind::lower_lipschitz);
        };
        rep.add(label("staircase", k), check_agreement("pavlakos_vs_s_star", pavlakos_integral(f, approx, u, mu, omega, po),
                                                       s_star_partition_integral(f, mu, omega, ss)));
    }
}

/// S* vs Sion on R^2-valued integrands.
inline void sion_equivalence(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    fixtures::Rng rng(seed ^ 0x5eedULL);
    const auto mu = measures::length();
    const PavingSet omega = PavingSet::half_open(0.0, 1.0);
    const SStarOptions ss = s_star_options(tol_or(o, 1e-5), 18);
    for (std::size_t k = 0; k < count_or(o, 3); ++k) {
        const Integrand f = vec2(fixtures::random_lipschitz(rng).expr, fixtures::random_lipschitz(rng).expr);
        SionOptions so;
        static_cast<IntegrationOptions&>(so) = ss;
        so.schedule = ss.schedule;
        rep.add(label("plane", k), check_agreement("s_star_vs_sion", s_star_partition_integral(f, mu, omega, ss),
                                                   sion_integral(f, mu, omega, so)));
    }
}

inline void equivalence(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    pavlakos_equivalence(rep, seed, o);
    sion_equivalence(rep, seed, o);
}

/// Zero integrals on null sets, invariance under removing them, and
/// extension of coverings by a null cell carrying wild values.
inline void nullsets(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    fixtures::Rng rng(seed);
    const auto mu = measures::length();
    const PavingSet omega = PavingSet::half_open(0.0, 1.0);
    const SStarOptions ss = s_star_options(tol_or(o, 1e-4), 14);
    for (std::size_t k = 0; k < count_or(o, 5); ++k) {
        const Integrand f = fixtures::compile_on_unit(fixtures::random_lipschitz(rng).expr);
        const PavingSet n = fixtures::random_points(rng, 1 + rng() % 6);
        const std::string name = label("null", k);
        rep.add(name, check_null_integral(f, mu, n, ss));
        rep.add(name, check_null_invariance(f, mu, omega, n, ss));
        rep.add(name, check_chain_extension(f, mu, omega, n, RieszValue::scalar(1e6), ss));
    }
}

/// Geometric series within declared tails, rearrangements, and ordered vs
/// unordered sums of nonnegative terms.
inline void summability(SuiteReport& rep, std::uint64_t seed, const SuiteOptions& o) {
    const std::size_t depth = 60;
    const std::size_t trials = count_or(o, 20);
    {
        TermStream s;
        s.term = [](std::size_t n) { return RieszValue::scalar(std::ldexp(1.0, -static_cast<int>(n))); };
        s.tail = GeometricTail{RieszValue::scalar(1.0), 0.5};
        const auto r = unconditional_sum(s, depth, trials, seed);
        rep.add("geometric", detail::within("declared_tail", r.value - RieszValue::scalar(1.0), *r.tail_bound));
        rep.add("geometric", PropertyCheck{"rearrangements", true, r.permutation_spread.max_abs(),
                                           1e-12 * depth, std::to_string(trials) + " permutations"});
        const RieszValue c = conditional_sum(s, depth);
        rep.add("geometric", PropertyCheck{"conditional_equals_unconditional", c == r.value, (c - r.value).max_abs(),
                                           0.0, "exact"});
    }
    {
        TermStream s;
        s.dim = 2;
        s.term = [](std::size_t n) {
            return RieszValue{std::ldexp(1.0, -static_cast<int>(n)), 3.0 * std::ldexp(1.0, -2 * static_cast<int>(n))};
        };
        s.tail = GeometricTail{RieszValue{1.0, 3.0}, 0.5};
        const auto r = unconditional_sum(s, depth, trials, seed + 1);
        rep.add("vector", detail::within("declared_tail", r.value - RieszValue{1.0, 1.0}, *r.tail_bound));
        const RieszValue c = conditional_sum(s, depth);
        rep.add("vector", PropertyCheck{"conditional_equals_unconditional", c == r.value, (c - r.value).max_abs(), 0.0,
                                        "exact"});
    }
}

/// Choquet integrals of x for C = length and C = length^2, and agreement with
/// net Riemann for an additive capacity.
inline void choquet(SuiteReport& rep, std::uint64_t, const SuiteOptions& o) {
    const PavedSpace space = PavedSpace::interval(0.0, 1.0);
    ChoquetOptions co;
    co.tol = tol_or(o, 1e-6);
    const Integrand x = integrands::identity();
    auto closed_form = [&](const char* name, const Capacity& cap, double expect) {
        const auto r = choquet_integral(x, cap, space.ground(), co);
        auto c = detail::within(name, r.value - RieszValue::scalar(expect), RieszValue::scalar(co.tol));
        c.passed = c.passed && r.verdict == Verdict::certified;
        c.detail = to_string(r.verdict);
        rep.add("closed_form", c);
    };
    closed_form("length", Capacity::from_measure(measures::length()), 0.5);
    closed_form("length_squared", Capacity::power_of_length(2.0), 1.0 / 3.0);
    // Consistency is judged against combined bounds, so a coarser tolerance serves.
    const Integrand f = fixtures::compile_on_unit("1 + x/2");
    ChoquetOptions ca;
    ca.tol = 1e-4;
    ca.start_step = 8;
    NetRiemannOptions nr;
    nr.tol = ca.tol;
    rep.add("additive", check_agreement("choquet_vs_net_riemann",
                                        choquet_integral(f, Capacity::from_measure(measures::length()), space.ground(), ca),
                                        net_riemann_integral(f, measures::length(), space, space.ground(), nr)));
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"laws", "uniform", "equivalence", "nullsets", "summability", "choquet", "all"};
    return n;
}

}  // namespace suites

/// Runs a named suite; entries are ordered by experiment name.
inline SuiteReport run_verification_suite(const std::string& name, std::uint64_t seed, const SuiteOptions& opt = {}) {
    SuiteReport rep;
    rep.suite = name;
    rep.seed = seed;
    auto run = [&](const std::string& s) {
        SuiteReport part;
        if (s == "laws") suites::laws(part, seed, opt);
        else if (s == "uniform") suites::uniform(part, seed, opt);
        else if (s == "equivalence") suites::equivalence(part, seed, opt);
        else if (s == "nullsets") suites::nullsets(part, seed, opt);
        else if (s == "summability") suites::summability(part, seed, opt);
        else if (s == "choquet") suites::choquet(part, seed, opt);
        for (auto& e : part.entries) rep.entries.push_back({name == "all" ? s + "/" + e.experiment : e.experiment, e.check});
    };
    if (name == "all") {
        for (const auto& s : suites::names())
            if (s != "all") run(s);
    } else if (std::find(suites::names().begin(), suites::names().end(), name) != suites::names().end()) {
        run(name);
    } else {
        throw ContractViolation("harness-cli", "run_verification_suite", "unknown suite '" + name + "'");
    }
    std::stable_sort(rep.entries.begin(), rep.entries.end(),
                     [](const SuiteEntry& a, const SuiteEntry& b) { return a.experiment < b.experiment; });
    return rep;
}

}  // namespace ordint
