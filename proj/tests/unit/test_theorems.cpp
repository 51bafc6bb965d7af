#include <gtest/gtest.h>

#include <cmath>

#include "ordint/suites.hpp"
#include "ordint/theorems.hpp"

using namespace ordint;

namespace {
const PavedSpace unit_space = PavedSpace::interval(0.0, 1.0);
const PavingSet unit = unit_space.ground();

NetRiemannOptions net(double tol) {
    NetRiemannOptions o;
    o.tol = tol;
    return o;
}
}  // namespace

TEST(Laws, IdentityAndComplement) {
    LawOptions o;
    o.integration = net(1e-6);
    const auto rep = verify_integral_laws(integrands::identity(), integrands::affine(1.0, -1.0), measures::length(),
                                          unit_space, unit, o);
    EXPECT_TRUE(rep.all_passed());
    EXPECT_EQ(rep.checks.size(), 6u);
}

TEST(Laws, VectorMeasure) {
    LawOptions o;
    o.integration = net(1e-4);
    const auto rep = verify_integral_laws(integrands::affine(-0.5, 1.0), integrands::constant(0.25),
                                          measures::vector_length({1.0, 3.0}), unit_space, unit, o);
    EXPECT_TRUE(rep.all_passed());
}

TEST(Laws, RejectsUncertifiableMeasure) {
    EXPECT_THROW(verify_integral_laws(integrands::identity(), integrands::identity(), measures::cofinite_charge(4, 2),
                                      PavedSpace::finite(4), FiniteSubset::all(4)),
                 ContractViolation);
}

TEST(Uniform, ShiftedIdentity) {
    const auto u = UniformRegulatorSequence::geometric(1, 1.0, 0.5);
    auto seq = [](std::size_t n) {
        return integrands::shifted(integrands::identity(), RieszValue::scalar(std::ldexp(1.0, -static_cast<int>(n))));
    };
    auto integrate = [](std::size_t, const Integrand& g) {
        return net_riemann_integral(g, measures::length(), unit_space, unit, net(1e-6));
    };
    UniformOptions o;
    o.count = 12;
    const auto rep = verify_uniform_convergence(seq, integrands::identity(), u, measures::length(), unit, integrate, o);
    EXPECT_TRUE(rep.all_passed());
}

TEST(Uniform, EnvelopeViolationThrows) {
    const auto u = UniformRegulatorSequence::geometric(1, 0.1, 0.5);
    auto seq = [](std::size_t) { return integrands::shifted(integrands::identity(), RieszValue::scalar(1.0)); };
    auto integrate = [](std::size_t, const Integrand& g) {
        return net_riemann_integral(g, measures::length(), unit_space, unit, net(1e-3));
    };
    EXPECT_THROW(verify_uniform_convergence(seq, integrands::identity(), u, measures::length(), unit, integrate),
                 ContractViolation);
}

TEST(NullSets, IntegralAndInvariance) {
    const PavingSet n = IntervalSet::from_pieces({{0.125, 0.125, true, true}, {0.625, 0.625, true, true}});
    EXPECT_TRUE(check_null_integral(integrands::affine(3.0, 1.0), measures::length(), n).passed);
    EXPECT_THROW(check_null_integral(integrands::identity(), measures::length(), PavingSet::half_open(0.0, 0.1)),
                 ContractViolation);
    SStarOptions o;
    o.tol = 1e-5;
    EXPECT_TRUE(check_null_invariance(integrands::identity(), measures::length(), unit, n, o).passed);
}

TEST(NullSets, ChainExtensionIgnoresWildValues) {
    const PavingSet n = PavingSet::point(0.5);
    SStarOptions o;
    o.tol = 1e-5;
    const auto c = check_chain_extension(integrands::identity(), measures::length(), unit, n, RieszValue::scalar(1e6), o);
    EXPECT_TRUE(c.passed) << c.residual << " > " << c.bound;
}

TEST(Agreement, NetRiemannAndSion) {
    const auto a = net_riemann_integral(integrands::identity(), measures::length(), unit_space, unit, net(1e-5));
    SionOptions so;
    so.tol = 1e-5;
    const auto b = sion_integral(integrands::identity(), measures::length(), unit, so);
    EXPECT_TRUE(check_agreement("identity", a, b).passed);
}

TEST(InducedMeasure, SigmaAdditive) {
    auto integrate = [](const PavingSet& a) {
        return net_riemann_integral(integrands::identity(), measures::length(), unit_space, a, net(1e-6));
    };
    const auto c = check_induced_sigma_additivity(integrands::identity(), measures::length(), unit, 20, integrate);
    EXPECT_TRUE(c.passed) << c.residual << " > " << c.bound;
}

TEST(Suites, UnknownNameThrows) {
    EXPECT_THROW(run_verification_suite("nope", 42), ContractViolation);
}

TEST(Suites, SummabilityPasses) {
    const auto rep = run_verification_suite("summability", 42, {4, 0.0});
    EXPECT_TRUE(rep.all_passed());
    EXPECT_TRUE(std::is_sorted(rep.entries.begin(), rep.entries.end(),
                               [](const SuiteEntry& a, const SuiteEntry& b) { return a.experiment < b.experiment; }));
}

TEST(Suites, DeterministicJson) {
    const auto a = run_verification_suite("nullsets", 9, {2, 0.0}).to_json();
    const auto b = run_verification_suite("nullsets", 9, {2, 0.0}).to_json();
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_TRUE(a.at("passed").get<bool>());
}
