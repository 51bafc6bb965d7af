#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ordint/dsl.hpp"
#include "ordint/integrand.hpp"
#include "ordint/lattice.hpp"
#include "ordint/sets.hpp"

// Seeded random integrands for property suites. Coefficients are dyadic
// (multiples of 2^-10) so the printed DSL text reproduces them exactly.

namespace ordint::fixtures {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

inline double dyadic(double v, int bits = 10) { return std::ldexp(std::round(std::ldexp(v, bits)), -bits); }

/// a + b x + c sin(w x + p) on [0, 1) with |b| + |c| w <= lipschitz.
struct LipschitzFixture {
    std::string expr;
    double a = 0.0, b = 0.0, c = 0.0, w = 1.0, p = 0.0;
    double lipschitz = 0.0;
    bool increasing = false;  ///< b >= |c| w
};

inline LipschitzFixture random_lipschitz(Rng& rng, double lipschitz = 1.0) {
    const double a = dyadic(uniform(rng, -1.0, 1.0));
    const double b = dyadic(uniform(rng, -0.5, 0.5) * lipschitz);
    const double w = dyadic(uniform(rng, 1.0, 4.0));
    const double c = dyadic(uniform(rng, -0.5, 0.5) * lipschitz / w);
    const double p = dyadic(uniform(rng, 0.0, 3.0));
    LipschitzFixture f;
    f.expr = format_number(a) + " + " + format_number(b) + "*x + " + format_number(c) + "*sin(" + format_number(w) +
             "*x + " + format_number(p) + ")";
    f.expr = dsl::print(dsl::parse_spec(f.expr));
    f.a = a;
    f.b = b;
    f.c = c;
    f.w = w;
    f.p = p;
    f.lipschitz = std::abs(b) + std::abs(c) * w;
    f.increasing = b >= std::abs(c) * w;
    return f;
}

inline Integrand compile_on_unit(const std::string& expr) { return dsl::compile(expr, IntervalSet::half_open(0.0, 1.0)); }

/// Finitely many disjoint dyadic cells of [0, 1) (multiples of 1/16) with
/// coefficients in (1/8)Z, optionally vector valued.
struct SimpleFixture {
    std::vector<std::pair<RieszValue, PavingSet>> parts;
};

inline SimpleFixture random_simple(Rng& rng, std::size_t dim = 1) {
    std::vector<int> cuts{0, 16};
    const int extra = static_cast<int>(rng() % 6) + 1;
    for (int k = 0; k < extra; ++k) cuts.push_back(static_cast<int>(rng() % 15) + 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    SimpleFixture s;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (rng() % 4 == 0) continue;  // leave a gap where f = 0
        RieszValue::Storage v(dim);
        for (auto& x : v) x = static_cast<double>(static_cast<int>(rng() % 33) - 16) / 8.0;
        s.parts.emplace_back(RieszValue(std::span<const double>(v.data(), v.size())),
                             PavingSet::half_open(cuts[i] / 16.0, cuts[i + 1] / 16.0));
    }
    if (s.parts.empty()) s.parts.emplace_back(RieszValue::constant(dim, 1.0), PavingSet::half_open(0.0, 1.0));
    return s;
}

/// A null set for length: up to `count` dyadic points of [0, 1).
inline PavingSet random_points(Rng& rng, std::size_t count) {
    IntervalSet::Pieces ps;
    for (std::size_t k = 0; k < count; ++k) {
        const double x = static_cast<double>(rng() % 1024) / 1024.0;
        ps.push_back({x, x, true, true});
    }
    return PavingSet(IntervalSet::from_pieces(std::move(ps)));
}

}  // namespace ordint::fixtures
