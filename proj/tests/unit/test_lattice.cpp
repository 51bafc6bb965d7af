#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ordint/lattice.hpp"
#include "ordint/summation.hpp"

using namespace ordint;

TEST(Lattice, LeqIsComponentwise) {
    EXPECT_TRUE(leq({1, 2}, {2, 3}));
    EXPECT_FALSE(leq({1, 3}, {2, 2}));
    EXPECT_FALSE(leq({2, 2}, {1, 3}));
    const RieszValue a{-1.5, 4.0, 0.0};
    EXPECT_TRUE(leq(a, a));
}

TEST(Lattice, JoinMeet) {
    const auto jm = join_meet({1, 3}, {2, 2});
    EXPECT_EQ(jm.sup, (RieszValue{2, 3}));
    EXPECT_EQ(jm.inf, (RieszValue{1, 2}));
    const auto id = join_meet({5, -1}, {5, -1});
    EXPECT_EQ(id.sup, (RieszValue{5, -1}));
    EXPECT_EQ(id.inf, (RieszValue{5, -1}));
    const auto neg = join_meet({-1, 0}, {0, -1});
    EXPECT_EQ(neg.sup, (RieszValue{0, 0}));
    EXPECT_EQ(neg.inf, (RieszValue{-1, -1}));
}

TEST(Lattice, AbsParts) {
    const auto p = abs_parts({-1, 2});
    EXPECT_EQ(p.abs, (RieszValue{1, 2}));
    EXPECT_EQ(p.pos, (RieszValue{0, 2}));
    EXPECT_EQ(p.neg, (RieszValue{1, 0}));
    const auto z = abs_parts(RieszValue::zero(3));
    EXPECT_TRUE(z.abs.is_zero() && z.pos.is_zero() && z.neg.is_zero());
    const RieszValue a{0.5, 3.0};
    const auto q = abs_parts(a);
    EXPECT_EQ(q.abs, a);
    EXPECT_EQ(q.pos, a);
    EXPECT_TRUE(q.neg.is_zero());
}

TEST(Lattice, Products) {
    EXPECT_EQ(apply_product(ProductRule::scalar_vector(), RieszValue::scalar(2), {1, 3}), (RieszValue{2, 6}));
    EXPECT_EQ(apply_product(ProductRule::componentwise(), {1, 2}, {3, 4}), (RieszValue{3, 8}));
    EXPECT_EQ(apply_product(ProductRule::vector_scalar(), {1, 3}, RieszValue::scalar(0.5)), (RieszValue{0.5, 1.5}));
    EXPECT_EQ(apply_product(ProductRule::scalar_scalar(), RieszValue::scalar(3), RieszValue::scalar(-2)),
              RieszValue::scalar(-6));
}

TEST(Lattice, DimensionMismatchIsStructural) {
    EXPECT_THROW(join({1, 2}, {1, 2, 3}), StructuralError);
    EXPECT_THROW((void)(RieszValue{1} + RieszValue{1, 2}), StructuralError);
    EXPECT_THROW(apply_product(ProductRule::componentwise(), {1, 2}, {1, 2, 3}), StructuralError);
    EXPECT_THROW(join(RieszValue::scalar(1, SpaceTag{1}), RieszValue::scalar(1)), StructuralError);
    EXPECT_THROW(RieszValue::zero(0), StructuralError);
}

TEST(Lattice, ErrorsNameModuleAndOperation) {
    try {
        (void)meet({1}, {1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.module(), "lattice-core");
        EXPECT_EQ(e.operation(), "meet");
    }
}

TEST(Lattice, ArchimedeanWitness) {
    const double a = std::ldexp(1.0, -10);
    // 257 * a is the first multiple above 0.25 in the second coordinate.
    EXPECT_EQ(archimedean_witness({a, a}, {0.5, 0.25}), 257u);
    EXPECT_EQ(archimedean_witness({0.0, -1.0}, {1.0, 1.0}), 0u);
}

TEST(Lattice, RandomIdentitiesExact) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int t = 0; t < 200; ++t) {
        const RieszValue a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)}, c{u(rng), u(rng), u(rng)};
        EXPECT_EQ(meet(a, join(b, c)), join(meet(a, b), meet(a, c)));
        EXPECT_EQ(join(a, b) + meet(a, b), a + b);
        EXPECT_EQ(join(a + c, b + c), join(a, b) + c);
        EXPECT_EQ(pos_part(a) - neg_part(a), a);
        EXPECT_TRUE(leq(abs(a + b), abs(a) + abs(b)));
    }
}

TEST(Summation, PairwiseMatchesExactForDyadics) {
    std::vector<double> xs;
    for (int i = 1; i <= 1000; ++i) xs.push_back(std::ldexp(1.0, -(i % 30)));
    double exact = 0.0;
    for (double x : xs) exact += x;  // every partial sum is exact at this scale
    EXPECT_EQ(pairwise_sum(xs), exact);
}

TEST(Summation, AccumulatorIsPerCoordinatePairwise) {
    VectorAccumulator acc(2);
    std::vector<double> x, y;
    for (int i = 1; i <= 333; ++i) {
        x.push_back(1.0 / i);
        y.push_back(-0.1 * i);
        acc.add({x.back(), y.back()});
    }
    EXPECT_EQ(acc.count(), 333u);
    EXPECT_EQ(acc.total(), (RieszValue{pairwise_sum(x), pairwise_sum(y)}));
    EXPECT_THROW(acc.add(RieszValue::scalar(1.0)), StructuralError);
}
