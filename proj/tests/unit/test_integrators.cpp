#include <gtest/gtest.h>

#include <cmath>

#include "ordint/dsl.hpp"
#include "ordint/integrators.hpp"
#include "support/oracles.hpp"

using namespace ordint;

namespace {

const PavedSpace unit_space = PavedSpace::interval(0.0, 1.0);
const PavingSet unit = unit_space.ground();

double rigorous(const IntegralReport& r) {
    return r.modulus_bound ? std::max(r.modulus_bound->max_abs(), r.cauchy_bound.max_abs()) : INFINITY;
}

}  // namespace

TEST(RiemannSum, ConstantIsExact) {
    const auto p = uniform_tagged_partition(unit, 7, TagPolicy::random(3));
    EXPECT_EQ(riemann_sum(integrands::constant(2.0), measures::length(), p, ProductRule::scalar_scalar()).as_scalar(),
              2.0);
}

TEST(RiemannSum, IdentityLeftTags) {
    const auto p = uniform_tagged_partition(unit, 4, TagPolicy::left());
    EXPECT_EQ(riemann_sum(integrands::identity(), measures::length(), p, ProductRule::scalar_scalar()).as_scalar(),
              oracle::left_sum_identity(4));
    EXPECT_EQ(oracle::left_sum_identity(4), 0.375);
}

TEST(RiemannSum, VectorIntegrand) {
    const auto p = uniform_tagged_partition(unit, 4, TagPolicy::left());
    const Integrand f = integrands::stack({integrands::identity(), integrands::constant(1.0)});
    EXPECT_EQ(riemann_sum(f, measures::length(), p, infer_product(2, 1)), (RieszValue{0.375, 1.0}));
}

TEST(NetRiemann, IdentityCertified) {
    NetRiemannOptions o;
    o.tol = 1e-6;
    const auto r = net_riemann_integral(integrands::identity(), measures::length(), unit_space, unit, o);
    EXPECT_EQ(r.verdict, Verdict::certified);
    EXPECT_LE(std::abs(r.value.as_scalar() - oracle::integral_identity_unit()), 1e-6);
    EXPECT_LE(r.steps.back().n_cells, std::size_t{1} << 20);
    ASSERT_TRUE(r.modulus_bound.has_value());
    EXPECT_LE(std::abs(r.value.as_scalar() - 0.5), r.modulus_bound->as_scalar());
}

TEST(NetRiemann, SimpleFunctionExactFromRefiningStep) {
    const Integrand f = integrands::simple({{RieszValue::scalar(3.0), PavingSet::half_open(0.0, 0.25)},
                                            {RieszValue::scalar(-1.0), PavingSet::half_open(0.5, 1.0)}});
    NetRiemannOptions o;
    o.tol = 1e-12;
    const auto r = net_riemann_integral(f, measures::length(), unit_space, unit, o);
    EXPECT_EQ(r.verdict, Verdict::certified);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.value.as_scalar(), 0.25);
    EXPECT_EQ(r.steps.back().step, 2u);
    const auto chain = RefinementChain::dyadic(unit);
    for (std::size_t k = 2; k < 9; ++k)
        for (const auto& pol : {TagPolicy::left(), TagPolicy::right(), TagPolicy::random(k)})
            EXPECT_EQ(riemann_sum(f, measures::length(), chain.at(k, pol)).as_scalar(), 0.25);
}

TEST(NetRiemann, DyadicIndicatorNeverCertifies) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        NetRiemannOptions o;
        o.policies = {TagPolicy::left(), TagPolicy::random(seed)};
        o.max_steps = 14;
        const auto r = net_riemann_integral(integrands::dyadic_rational_indicator(), measures::length(), unit_space,
                                            unit, o);
        EXPECT_NE(r.verdict, Verdict::certified);
        EXPECT_GE(r.policy_spread.as_scalar(), 0.5);
    }
}

TEST(NetRiemann, IndicatorVariantMatchesPerSet) {
    const PavingSet a = PavingSet::half_open(0.25, 0.75);
    NetRiemannOptions per, ind;
    per.tol = ind.tol = 1e-5;
    ind.variant = SubsetVariant::indicator;
    const auto f = integrands::affine(1.0, 2.0);
    const auto r1 = net_riemann_integral(f, measures::length(), unit_space, a, per);
    const auto r2 = net_riemann_integral(f, measures::length(), unit_space, a, ind);
    EXPECT_NEAR(r1.value.as_scalar(), 1.0, 1e-5);  // int_{1/4}^{3/4} 1 + 2x dx
    EXPECT_LE(std::abs(r1.value.as_scalar() - r2.value.as_scalar()), rigorous(r1) + rigorous(r2));
}

TEST(NetRiemann, CountingMeasureIsExact) {
    const auto space = PavedSpace::finite(8);
    const PavingSet a = FiniteSubset(8, {1, 3, 4});
    const auto r = net_riemann_integral(integrands::polynomial({0.0, 0.0, 1.0}, 0.0, 7.0), measures::counting(), space, a);
    EXPECT_EQ(r.value.as_scalar(), 1.0 + 9.0 + 16.0);
    EXPECT_EQ(r.verdict, Verdict::certified);
}

TEST(SStar, ConstantAndNullSet) {
    const auto c = s_star_partition_integral(integrands::constant(2.5), measures::length(), unit);
    // Exact up to the truncated tail c mu(rest), which the bound carries.
    EXPECT_LE(std::abs(c.value.as_scalar() - 2.5), rigorous(c));
    EXPECT_LE(rigorous(c), 2.5 * std::ldexp(1.0, -39));
    const PavingSet n = IntervalSet::from_pieces({{0.25, 0.25, true, true}, {0.5, 0.5, true, true}});
    const auto z = s_star_partition_integral(integrands::identity(), measures::length(), n);
    EXPECT_TRUE(z.value.is_zero());
    EXPECT_EQ(z.verdict, Verdict::certified);
}

TEST(SStar, Identity) {
    SStarOptions o;
    o.tol = 1e-5;
    o.schedule.levels = 12;
    o.max_steps = 12;
    const auto r = s_star_partition_integral(integrands::identity(), measures::length(), unit, o);
    EXPECT_LE(std::abs(r.value.as_scalar() - 0.5), 1e-5);
}

TEST(Sion, IdentityAgreesWithSStar) {
    SionOptions o;
    o.tol = 1e-5;
    const auto r = sion_integral(integrands::identity(), measures::length(), unit, o);
    EXPECT_LE(std::abs(r.value.as_scalar() - 0.5), 1e-5);
    SStarOptions so;
    so.tol = 1e-5;
    const auto s = s_star_partition_integral(integrands::identity(), measures::length(), unit, so);
    EXPECT_LE(std::abs(r.value.as_scalar() - s.value.as_scalar()), rigorous(r) + rigorous(s));
    const auto c = sion_integral(integrands::constant(3.0), measures::length(), unit);
    EXPECT_LE(std::abs(c.value.as_scalar() - 3.0), rigorous(c));
    EXPECT_LE(rigorous(c), 3.0 * std::ldexp(1.0, -39));
}

TEST(Sion, SlowTruncationIsInconclusive) {
    SionOptions o;
    o.tol = 1e-6;
    // One more geometric group per refinement: the uncovered tail halves per
    // step while the bound needs 2^-20.
    o.truncation = {"slow", [](std::size_t outer, const CountablePartition& c) { return c.cells(1 + outer).size(); }};
    o.schedule.levels = 8;
    o.max_steps = 8;
    const auto r = sion_integral(integrands::identity(), measures::length(), unit, o);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(Henstock, Identity) {
    HenstockOptions o;
    o.tol = 1e-6;
    const auto r = henstock_integral(integrands::identity(), measures::length(), unit,
                                     [](std::size_t k) { return Gauge::constant(std::ldexp(0.5, -static_cast<int>(k))); },
                                     o);
    EXPECT_LE(std::abs(r.value.as_scalar() - 0.5), 1e-6);
    EXPECT_EQ(r.verdict, Verdict::certified);
}

TEST(Henstock, PointIndicatorVanishes) {
    HenstockOptions o;
    o.tol = 1e-6;
    o.max_steps = 30;
    const auto f = integrands::indicator(IntervalSet::point(0.5));
    const auto r = henstock_integral(f, measures::length(), unit,
                                     [](std::size_t k) { return Gauge::focused(0.5, 0.25, std::ldexp(1.0, -static_cast<int>(k) - 2)); },
                                     o);
    EXPECT_LE(std::abs(r.value.as_scalar()), 1e-6);
}

TEST(Henstock, ConstantExactAtEveryGauge) {
    HenstockOptions o;
    o.max_steps = 6;
    const auto r = henstock_integral(integrands::constant(1.75), measures::length(), unit,
                                     [](std::size_t k) { return Gauge::constant(std::ldexp(0.3, -static_cast<int>(k))); }, o);
    for (const auto& row : r.steps) EXPECT_EQ(row.value.as_scalar(), 1.75);
}

TEST(Pavlakos, ElementaryFixtures) {
    const auto thirds = pavlakos_elementary_integral(elementary::dyadic_halves(), measures::length(), 40, 1e-9);
    EXPECT_NEAR(thirds.value.as_scalar(), oracle::dyadic_halves_integral(), 1e-9);
    EXPECT_EQ(thirds.verdict, Verdict::certified);

    const auto simple = elementary::finite({{RieszValue::scalar(2.0), PavingSet::half_open(0.0, 0.5)},
                                            {RieszValue::scalar(-4.0), PavingSet::half_open(0.75, 1.0)}});
    const auto s = pavlakos_elementary_integral(simple, measures::length(), 10);
    EXPECT_EQ(s.value.as_scalar(), 0.0);
    EXPECT_TRUE(s.exact);

    const auto zero = elementary::finite({{RieszValue::scalar(0.0), unit}});
    EXPECT_TRUE(pavlakos_elementary_integral(zero, measures::length(), 10).value.is_zero());
}

TEST(Pavlakos, RequiresSigmaAdditiveMeasure) {
    EXPECT_THROW(pavlakos_elementary_integral(elementary::dyadic_halves(), measures::cofinite_charge(4, 2), 10),
                 ContractViolation);
}

TEST(Pavlakos, FloorStaircaseOfIdentity) {
    const Integrand x = integrands::identity();
    auto approx = [&](std::size_t n) {
        return elementary::staircase(x, 0.0, 1.0, std::size_t{1} << n, 1.0, elementary::StairKind::floor);
    };
    const auto u = UniformRegulatorSequence::geometric(1, 1.0, 0.5);
    PavlakosOptions o;
    o.first = 4;
    o.last = 12;
    const auto r = pavlakos_integral(x, approx, u, measures::length(), unit, o);
    // Staircase integral 0.5 - 2^-(n+1).
    EXPECT_EQ(r.value.as_scalar(), 0.5 - std::ldexp(1.0, -13));
    EXPECT_LE(std::abs(r.value.as_scalar() - 0.5), std::ldexp(1.0, -12) + o.tol);
}

TEST(Pavlakos, SameElementaryFunction) {
    const auto e = elementary::dyadic_halves();
    const auto u = UniformRegulatorSequence::geometric(1, 1e-12, 0.5);
    PavlakosOptions o;
    o.first = o.last = 1;
    o.depth = 40;
    const auto r = pavlakos_integral(e.as_integrand(), [&](std::size_t) { return e; }, u, measures::length(), unit, o);
    EXPECT_EQ(r.value, pavlakos_elementary_integral(e, measures::length(), 40).value);
}

TEST(Pavlakos, IndependentOfStaircaseFamily) {
    const Integrand x = integrands::identity();
    const auto u = UniformRegulatorSequence::geometric(1, 2.0, 0.5);
    PavlakosOptions o;
    o.first = 10;
    o.last = 12;
    const auto a = pavlakos_integral(
        x, [&](std::size_t n) { return elementary::staircase(x, 0.0, 1.0, std::size_t{1} << n, 1.0, elementary::StairKind::floor); },
        u, measures::length(), unit, o);
    const auto b = pavlakos_integral(
        x,
        [&](std::size_t n) {
            return elementary::staircase(x, 0.0, 1.0, std::size_t{1} << n, 1.0, elementary::StairKind::lower_lipschitz);
        },
        u, measures::length(), unit, o);
    EXPECT_LE(std::abs(a.value.as_scalar() - b.value.as_scalar()), rigorous(a) + rigorous(b));
}

TEST(AbstractLebesgue, StaircaseNets) {
    const Integrand x = integrands::identity();
    auto base = [&](const Integrand& g) {
        NetRiemannOptions o;
        o.tol = 1e-9;
        o.max_steps = 16;
        return net_riemann_integral(g, measures::length(), unit_space, unit, o);
    };
    auto stairs = [&](std::size_t mult, double offset) {
        return ApproximatingNet{"stairs" + std::to_string(mult),
                                [=](std::size_t i) {
                                    return integrands::shifted(
                                        elementary::staircase(x, 0.0, 1.0, mult << i, 1.0, elementary::StairKind::floor)
                                            .as_integrand(),
                                        RieszValue::scalar(offset));
                                },
                                [=](std::size_t i) { return std::ldexp(1.0, -static_cast<int>(i)) / static_cast<double>(mult); },
                                8};
    };
    const auto ok = abstract_lebesgue_integral({stairs(1, 0.0), stairs(2, 0.0)}, base, RieszValue::scalar(1.0), unit, 1e-2);
    EXPECT_NE(ok.verdict, Verdict::diverged);
    EXPECT_NEAR(ok.value.as_scalar(), 0.5, 1e-2);
    const auto bad = abstract_lebesgue_integral({stairs(1, 0.0), stairs(2, 0.1)}, base, RieszValue::scalar(1.0), unit);
    EXPECT_EQ(bad.verdict, Verdict::diverged);
}

TEST(AbstractLebesgue, ConstantNetOfSimpleFunction) {
    const Integrand f = integrands::simple({{RieszValue::scalar(2.0), PavingSet::half_open(0.0, 0.5)}});
    auto base = [&](const Integrand& g) { return net_riemann_integral(g, measures::length(), unit_space, unit); };
    const auto r = abstract_lebesgue_integral({{"const", [&](std::size_t) { return f; }, [](std::size_t) { return 0.0; }, 3}},
                                              base, RieszValue::scalar(1.0), unit);
    EXPECT_EQ(r.value.as_scalar(), 1.0);
    EXPECT_EQ(r.verdict, Verdict::certified);
}

TEST(Saks, ConstantChainIsBase) {
    auto base = [&](const PavingSet& a) {
        return net_riemann_integral(integrands::constant(4.0), measures::length(), unit_space, a);
    };
    const PavingSet a = PavingSet::half_open(0.0, 0.5);
    const auto r = saks_integral({a, a, a}, base);
    EXPECT_EQ(r.value, base(a).value);
    EXPECT_EQ(r.verdict, Verdict::certified);
}

TEST(Saks, ExpandingChainToOneThird) {
    const Integrand f = integrands::polynomial({1.0, -2.0, 1.0}, 0.0, 1.0);  // (1 - x)^2
    auto base = [&](const PavingSet& a) {
        NetRiemannOptions o;
        o.tol = 5e-7;
        return net_riemann_integral(f, measures::length(), unit_space, a, o);
    };
    std::vector<PavingSet> chain;
    for (int k : {4, 8, 12}) chain.push_back(PavingSet::half_open(0.0, 1.0 - std::ldexp(1.0, -k)));
    SaksOptions so;
    // Set k is [0, 1 - 2^-4k); its tail is 2^-12k / 3.
    so.tail = [](std::size_t k) {
        return RieszValue::scalar(std::ldexp(1.0, -12 * static_cast<int>(k)) / 3.0);
    };
    const auto r = saks_integral(chain, base, so);
    EXPECT_NEAR(r.value.as_scalar(), oracle::one_minus_x_squared(1.0 - std::ldexp(1.0, -12)), 1e-6);
    EXPECT_NEAR(r.value.as_scalar(), 1.0 / 3.0, 1e-6);
    EXPECT_EQ(r.verdict, Verdict::certified);
}

TEST(Saks, ImproperInverseSqrt) {
    const auto space = PavedSpace::interval(0.0, 1.0);
    std::vector<PavingSet> chain;
    const int last = 30;
    for (int k : {20, 25, last}) chain.push_back(PavingSet::half_open(std::ldexp(1.0, -k), 1.0));
    const Integrand f = dsl::compile("x^-0.5", IntervalSet::half_open(std::ldexp(1.0, -last), 1.0));
    auto base = [&](const PavingSet& a) {
        NetRiemannOptions o;
        o.tol = 1e-5;
        o.chain = ChainKind::graded;
        o.max_steps = 40;
        return net_riemann_integral(f, measures::length(), space, a, o);
    };
    SaksOptions so;
    so.tol = 1e-4;
    so.tail = [&](std::size_t) { return RieszValue::scalar(2.0 * std::sqrt(std::ldexp(1.0, -last))); };
    const auto r = saks_integral(chain, base, so);
    EXPECT_NEAR(r.value.as_scalar(), oracle::inverse_sqrt(std::ldexp(1.0, -last)), 1e-5);
    EXPECT_NEAR(r.value.as_scalar(), 2.0, 1e-4);
}

TEST(Saks, RejectsShrinkingChain) {
    auto base = [&](const PavingSet& a) { return net_riemann_integral(integrands::constant(1.0), measures::length(), unit_space, a); };
    EXPECT_THROW(saks_integral({unit, PavingSet::half_open(0.0, 0.5)}, base), ContractViolation);
}

TEST(Choquet, ClosedForms) {
    ChoquetOptions o;
    o.tol = 1e-6;
    const auto c = choquet_integral(integrands::affine(0.7, 0.0), Capacity::from_measure(measures::length()), unit, o);
    EXPECT_NEAR(c.value.as_scalar(), 0.7, 1e-6);
    for (double k : {1.0, 2.0}) {
        const auto r = choquet_integral(integrands::identity(), Capacity::power_of_length(k), unit, o);
        EXPECT_NEAR(r.value.as_scalar(), oracle::power_capacity_of_identity(k), 1e-6);
        EXPECT_EQ(r.verdict, Verdict::certified);
    }
}

TEST(Choquet, RejectsVectorAndNegative) {
    const auto cap = Capacity::from_measure(measures::length());
    EXPECT_THROW(choquet_integral(integrands::stack({integrands::identity(), integrands::identity()}), cap, unit),
                 ContractViolation);
    EXPECT_THROW(choquet_integral(integrands::affine(-1.0, 1.0), cap, unit), ContractViolation);
}

TEST(LevelSet, MatchesThreshold) {
    const auto s = level_set(integrands::identity(), unit, 0.25);
    EXPECT_EQ(s, PavingSet::half_open(0.25, 1.0));
    EXPECT_TRUE(level_set(integrands::identity(), unit, 2.0).empty());
}
