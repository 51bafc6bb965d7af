#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "ordint/dsl.hpp"
#include "ordint/integrators.hpp"
#include "support/oracles.hpp"

using namespace ordint;

namespace {
const IntervalSet unit = IntervalSet::half_open(0.0, 1.0);

std::size_t error_position(const std::string& text) {
    try {
        dsl::parse_spec(text);
    } catch (const dsl::ParseError& e) {
        return e.position();
    }
    ADD_FAILURE() << "no parse error for '" << text << "'";
    return 0;
}
}  // namespace

TEST(Dsl, RoundTrip) {
    for (const char* s : {"x^2 + sin(2*x)", "-x", "(1 - x)^2", "piecewise(x < 0.5, 2*x, 1)", "vec(x, 1 - x^2)",
                          "indicator([0, 0.25), (0.5, 1])", "min(x, 0.3) - max(x, exp(-x))", "x^-0.5",
                          "elemseries(2^-i, dyadic)", "elemseries(1/i, uniform(4))", "a - (b - c)", "2/(x + 1)"}) {
        const auto n = dsl::parse_spec(s);
        EXPECT_EQ(dsl::parse_spec(dsl::print(n)), n) << s << " -> " << dsl::print(n);
    }
}

TEST(Dsl, ParseErrorPositions) {
    EXPECT_EQ(error_position("x + * 2"), 4u);
    EXPECT_EQ(error_position("sin(x"), 5u);
    EXPECT_EQ(error_position("2 $ x"), 2u);
    try {
        dsl::parse_spec("x + * 2");
    } catch (const dsl::ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("at position 4"), std::string::npos);
    }
}

TEST(Dsl, StructuralErrors) {
    EXPECT_THROW(dsl::compile("foo(x)", unit), StructuralError);
    EXPECT_THROW(dsl::compile("sin(x, x)", unit), StructuralError);
    EXPECT_THROW(dsl::compile("y + 1", unit), StructuralError);
    EXPECT_THROW(dsl::parse_measure("lebesgue"), StructuralError);
}

TEST(Dsl, Evaluation) {
    const auto f = dsl::compile("x^2 + sin(2*x)", unit);
    EXPECT_DOUBLE_EQ(f(0.3).as_scalar(), 0.09 + std::sin(0.6));
    const auto g = dsl::compile("piecewise(x < 0.5, 2*x, 1)", unit);
    EXPECT_EQ(g(0.25).as_scalar(), 0.5);
    EXPECT_EQ(g(0.75).as_scalar(), 1.0);
    const auto v = dsl::compile("vec(x, 1 - x^2)", unit);
    EXPECT_EQ(v.dim(), 2u);
    EXPECT_EQ(v(0.5), (RieszValue{0.5, 0.75}));
}

TEST(Dsl, IndicatorBoundaries) {
    const auto f = dsl::compile("indicator([0, 0.25), (0.5, 1])", IntervalSet::closed(0.0, 1.0));
    EXPECT_EQ(f(0.0).as_scalar(), 1.0);
    EXPECT_EQ(f(0.25).as_scalar(), 0.0);
    EXPECT_EQ(f(0.5).as_scalar(), 0.0);
    EXPECT_EQ(f(1.0).as_scalar(), 1.0);
}

TEST(Dsl, DyadicRational) {
    const auto f = dsl::compile("dyadic_rational()", unit);
    EXPECT_EQ(f(0.375).as_scalar(), 1.0);
    EXPECT_EQ(f(0.1).as_scalar(), 0.0);
}

TEST(Dsl, EnclosureContainsSamples) {
    const auto n = dsl::parse_spec("x^2 + sin(2*x) - exp(-x)/(x + 1)");
    const auto f = dsl::compile(n, unit);
    for (int k = 0; k < 16; ++k) {
        const double a = k / 16.0, b = (k + 1) / 16.0;
        const PavingSet cell(IntervalSet::closed(a, b));
        const auto r = dsl::enclose(n, cell);
        for (int j = 0; j <= 8; ++j) {
            const double v = f(a + (b - a) * j / 8.0).as_scalar();
            EXPECT_LE(r.lo, v);
            EXPECT_GE(r.hi, v);
        }
    }
}

TEST(Dsl, CompiledFunctionIntegrates) {
    NetRiemannOptions o;
    o.tol = 1e-5;
    const auto f = dsl::compile("(1 - x)^2", IntervalSet::closed(0.0, 1.0));
    const auto r = net_riemann_integral(f, measures::length(), PavedSpace::interval(0.0, 1.0), unit, o);
    EXPECT_NEAR(r.value.as_scalar(), oracle::one_minus_x_squared(1.0), 1e-5);
}

TEST(Dsl, ElementarySeriesOneThird) {
    const auto e = dsl::compile_elementary(dsl::parse_spec("elemseries(2^-i, dyadic)"), 0.0, 1.0);
    const auto r = pavlakos_elementary_integral(e, measures::length(), 40, 1e-9);
    EXPECT_NEAR(r.value.as_scalar(), oracle::dyadic_halves_integral(), 1e-9);
    EXPECT_NEAR(r.value.as_scalar(), 1.0 / 3.0, 1e-9);
}

TEST(Dsl, FiniteElementarySeries) {
    const auto e = dsl::compile_elementary(dsl::parse_spec("elemseries(i, uniform(4))"), 0.0, 1.0);
    const auto r = pavlakos_elementary_integral(e, measures::length(), 10);
    EXPECT_EQ(r.value.as_scalar(), (1.0 + 2.0 + 3.0 + 4.0) / 4.0);
}

TEST(Dsl, Measures) {
    EXPECT_TRUE(dsl::parse_measure("length").measure.has_value());
    const auto v = dsl::parse_measure("vector(length, 1, 2)");
    ASSERT_TRUE(v.measure.has_value());
    EXPECT_EQ(v.measure->dim(), 2u);
    const auto c = dsl::parse_measure("capacity(pow(length, 2))");
    ASSERT_TRUE(c.capacity.has_value());
    EXPECT_FALSE(c.measure.has_value());
    EXPECT_EQ((*c.capacity)(IntervalSet::half_open(0.0, 0.5)).as_scalar(), 0.25);
    EXPECT_THROW(dsl::parse_measure("vector(length)"), StructuralError);
    EXPECT_THROW(dsl::parse_measure("capacity(pow(length, x))"), StructuralError);
}

TEST(Dsl, NonMonotoneToChoquetIsRejected) {
    const auto f = dsl::compile("sin(20*x) + 1", unit);
    EXPECT_THROW(choquet_integral(f, Capacity::power_of_length(2.0), PavingSet(unit)), StructuralError);
}
