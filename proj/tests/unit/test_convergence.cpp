#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ordint/convergence.hpp"
#include "ordint/regulator.hpp"
#include "ordint/summability.hpp"
#include "support/oracles.hpp"

using namespace ordint;

namespace {

// a_ij = 2^-i / j
Regulator halves_over_j() { return Regulator::geometric(RieszValue::scalar(1.0), 0.5); }

NetSample scalar_net(std::size_t n, double (*f)(std::size_t)) {
    std::vector<RieszValue> v;
    for (std::size_t i = 1; i <= n; ++i) v.push_back(RieszValue::scalar(f(i)));
    return NetSample::from_sequence(std::move(v));
}

}  // namespace

TEST(Regulator, EnvelopeIdentitySelector) {
    const auto env = regulator_envelope(halves_over_j(), SelectorFunction::identity(3), 3);
    EXPECT_EQ(env.value.as_scalar(), std::max({0.5, 0.25 / 2, 0.125 / 3}));
    EXPECT_LE(env.tail.as_scalar(), std::ldexp(1.0, -4));
}

TEST(Regulator, EnvelopeConstantSelector) {
    const auto env = regulator_envelope(halves_over_j(), SelectorFunction::constant(1), 4);
    EXPECT_EQ(env.value.as_scalar(), 0.5);
    EXPECT_LE(env.tail.as_scalar(), std::ldexp(1.0, -5) + 1e-18);
}

TEST(Regulator, ZeroRegulator) {
    const auto env = regulator_envelope(Regulator::zero(2), SelectorFunction::stretch(3, 5), 5);
    EXPECT_TRUE(env.value.is_zero());
    EXPECT_TRUE(env.tail.is_zero());
    EXPECT_TRUE(weak_sigma_distributivity_probe(Regulator::zero(1), 4, 10).is_zero());
}

TEST(Regulator, WeakSigmaDistributivityProbe) {
    EXPECT_EQ(weak_sigma_distributivity_probe(halves_over_j(), 1, 20).as_scalar(), 0.5);
    // phi(j) = 8j gives max_j 2^-j / (8j) = 1/16.
    EXPECT_EQ(weak_sigma_distributivity_probe(halves_over_j(), 8, 20).as_scalar(), 1.0 / 16.0);
}

TEST(Regulator, Contracts) {
    EXPECT_THROW(Regulator::geometric(RieszValue::scalar(1.0), 1.0), ContractViolation);
    EXPECT_THROW(Regulator::geometric(RieszValue::scalar(-1.0), 0.5), ContractViolation);
    EXPECT_THROW(SelectorFunction({1, 0}, 2), ContractViolation);
    EXPECT_THROW(regulator_envelope(halves_over_j(), SelectorFunction::identity(1), 0), ContractViolation);
}

TEST(DConvergence, HarmonicNetCertified) {
    const auto reg = Regulator::harmonic(
        1, [](std::size_t) { return RieszValue::scalar(1.0); }, [](std::size_t) { return RieszValue::scalar(1.0); });
    const auto net = scalar_net(200, [](std::size_t n) { return 1.0 / static_cast<double>(n); });
    const auto r = check_d_convergence(net, RieszValue::scalar(0.0), reg,
                                       {SelectorFunction::identity(10), SelectorFunction::stretch(2, 10)}, 10);
    EXPECT_EQ(r.verdict, Verdict::certified);
    ASSERT_TRUE(r.first_index.has_value());
}

TEST(DConvergence, ConstantNetCertifiedAtFirstIndex) {
    std::vector<RieszValue> v(20, RieszValue{2.0, -1.0});
    const auto r = check_d_convergence(NetSample::from_sequence(v), RieszValue{2.0, -1.0},
                                       Regulator::geometric({1.0, 1.0}, 0.5), {SelectorFunction::identity(5)}, 5);
    EXPECT_EQ(r.verdict, Verdict::certified);
    EXPECT_EQ(r.first_index, 0u);
}

TEST(DConvergence, AlternatingNetDiverges) {
    const auto net = scalar_net(100, [](std::size_t n) { return n % 2 ? -1.0 : 1.0; });
    const auto r = check_d_convergence(net, RieszValue::scalar(0.0), halves_over_j(),
                                       {SelectorFunction::identity(10)}, 10);
    EXPECT_EQ(r.verdict, Verdict::diverged);
}

TEST(LimsupLiminf, AlternatingMatchesNestedScan) {
    std::vector<double> x;
    for (int n = 1; n <= 100; ++n) x.push_back(n % 2 ? -1.0 : 1.0);
    std::vector<RieszValue> v;
    for (double d : x) v.push_back(RieszValue::scalar(d));
    const auto r = order_limsup_liminf(NetSample::from_sequence(v));
    const auto [ls, li] = oracle::limsup_liminf(x, 10);
    EXPECT_EQ(r.limsup.as_scalar(), ls);
    EXPECT_EQ(r.liminf.as_scalar(), li);
    EXPECT_EQ(ls, 1.0);
    EXPECT_EQ(li, -1.0);
    EXPECT_TRUE(r.bounded);
}

TEST(LimsupLiminf, HarmonicTail) {
    const auto r = order_limsup_liminf(scalar_net(10000, [](std::size_t n) { return 1.0 / static_cast<double>(n); }));
    EXPECT_LE((r.limsup - r.liminf).as_scalar(), 1e-4);
    EXPECT_TRUE(r.converges(1e-4));
}

TEST(LimsupLiminf, ConstantAndRandomAgainstOracle) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x;
        std::vector<RieszValue> v;
        for (int n = 0; n < 57; ++n) {
            x.push_back(u(rng));
            v.push_back(RieszValue::scalar(x.back()));
        }
        const auto r = order_limsup_liminf(NetSample::from_sequence(v), 7);
        const auto [ls, li] = oracle::limsup_liminf(x, 7);
        EXPECT_EQ(r.limsup.as_scalar(), ls);
        EXPECT_EQ(r.liminf.as_scalar(), li);
    }
    const auto c = order_limsup_liminf(NetSample::from_sequence(std::vector<RieszValue>(5, RieszValue{3.0})));
    EXPECT_EQ(c.limsup, RieszValue{3.0});
    EXPECT_EQ(c.liminf, RieszValue{3.0});
}

TEST(NetSample, Contracts) {
    EXPECT_THROW(NetSample(std::vector<NetSample::Entry>{}), ContractViolation);
    EXPECT_THROW(NetSample(std::vector<NetSample::Entry>{{2, RieszValue{1.0}}, {1, RieszValue{1.0}}}), ContractViolation);
    EXPECT_THROW(NetSample(std::vector<NetSample::Entry>{{1, RieszValue{1.0}}, {2, RieszValue{1.0, 2.0}}}), StructuralError);
}

TEST(Summability, GeometricScalar) {
    TermStream s;
    s.term = [](std::size_t n) { return RieszValue::scalar(std::ldexp(1.0, -static_cast<int>(n))); };
    s.tail = GeometricTail{RieszValue::scalar(1.0), 0.5};
    const auto r = unconditional_sum(s, 40, 5, 1);
    EXPECT_LE(std::abs(r.value.as_scalar() - oracle::geometric_sum(0.5)), std::ldexp(1.0, -40));
    ASSERT_TRUE(r.tail_bound.has_value());
    EXPECT_LE(std::abs(r.value.as_scalar() - 1.0), r.tail_bound->as_scalar());
    EXPECT_EQ(conditional_sum(s, 40), r.value);
}

TEST(Summability, GeometricVector) {
    TermStream s;
    s.dim = 2;
    s.term = [](std::size_t n) {
        const double k = static_cast<double>(n);
        return RieszValue{std::pow(2.0, -k), std::pow(3.0, -k)};
    };
    const auto r = unconditional_sum(s, 40, 3, 2);
    EXPECT_NEAR(r.value[0], oracle::geometric_sum(0.5), 1e-9);
    EXPECT_NEAR(r.value[1], oracle::geometric_sum(1.0 / 3.0), 1e-9);
    EXPECT_FALSE(r.tail_bound.has_value());
}

TEST(Summability, EmptyAndSingle) {
    EXPECT_TRUE(unconditional_sum(TermStream::empty(3), 10).value.is_zero());
    const auto one = TermStream::finite({RieszValue{4.0, 5.0}});
    EXPECT_EQ(conditional_sum(one, 10), (RieszValue{4.0, 5.0}));
    const auto u = unconditional_sum(one, 10);
    EXPECT_EQ(u.value, (RieszValue{4.0, 5.0}));
    EXPECT_TRUE(u.tail_bound->is_zero());
}

TEST(Summability, AlternatingHarmonicConditional) {
    TermStream s;
    s.term = [](std::size_t n) { return RieszValue::scalar((n % 2 ? -1.0 : 1.0) / static_cast<double>(n)); };
    EXPECT_NEAR(conditional_sum(s, 10000).as_scalar(), -std::numbers::ln2, 1e-4);
    EXPECT_THROW(unconditional_sum(s, 100), ContractViolation);
}

TEST(Fremlin, ZeroSequences) {
    TripleSequence a(3, 3, 3, RieszValue::scalar(0.0));
    DoubleSequence b(3, 3, RieszValue::scalar(0.0));
    EXPECT_TRUE(fremlin_inequality_check(a, b, RieszValue::scalar(1.0), SelectorFunction::identity(6), 3, 3));
}

TEST(Fremlin, BruteForceCombinerAndZeroCounterexample) {
    oracle::Triple o{3, 3, 3, {}};
    TripleSequence a(3, 3, 3, RieszValue::scalar(0.0));
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = 1; j <= 3; ++j) {
                const double v = std::ldexp(1.0, -static_cast<int>(n + i)) / static_cast<double>(j);
                o.a.push_back(v);
                a.at(n, i, j) = RieszValue::scalar(v);
            }
    const auto bo = oracle::brute_force_combiner(o, 1.0);
    ASSERT_FALSE(bo.b.empty());
    DoubleSequence b(3, 3, RieszValue::scalar(0.0)), zero(3, 3, RieszValue::scalar(0.0));
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 3; ++j) b.at(i, j) = RieszValue::scalar(bo.at(i, j));
    const auto id = SelectorFunction::identity(6);
    EXPECT_TRUE(fremlin_inequality_check(a, b, RieszValue::scalar(1.0), id, 3, 3));
    EXPECT_FALSE(fremlin_inequality_check(a, zero, RieszValue::scalar(1.0), id, 3, 3));
    EXPECT_GT(fremlin_left(a, RieszValue::scalar(1.0), id, 1, 3).as_scalar(), 0.0);
    EXPECT_THROW(fremlin_inequality_check(a, b, RieszValue::scalar(-1.0), id, 3, 3), ContractViolation);
    EXPECT_THROW(fremlin_inequality_check(a, b, RieszValue::scalar(1.0), id, 4, 3), ContractViolation);
}

TEST(Fremlin, LibraryAgreesWithOracleSides) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    oracle::Triple o{2, 3, 2, {}};
    TripleSequence a(2, 3, 2, RieszValue::scalar(0.0));
    for (std::size_t n = 1; n <= 2; ++n)
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = 1; j <= 2; ++j) {
                o.a.push_back(u(rng));
                a.at(n, i, j) = RieszValue::scalar(o.a.back());
            }
    oracle::Double ob{3, 2, {}};
    DoubleSequence b(3, 2, RieszValue::scalar(0.0));
    for (std::size_t i = 1; i <= 3; ++i)
        for (std::size_t j = 1; j <= 2; ++j) {
            ob.b.push_back(u(rng));
            b.at(i, j) = RieszValue::scalar(ob.b.back());
        }
    for (const auto& phi : oracle::all_selectors(5, 2)) {
        const SelectorFunction sel(phi, phi.back());
        for (std::size_t k = 1; k <= 2; ++k)
            EXPECT_EQ(fremlin_left(a, RieszValue::scalar(0.9), sel, k, 3).as_scalar(),
                      oracle::fremlin_left(o, 0.9, phi, k, 3));
        EXPECT_EQ(fremlin_right(b, RieszValue::scalar(0.9), sel, 3).as_scalar(), oracle::fremlin_right(ob, 0.9, phi, 3));
    }
}
