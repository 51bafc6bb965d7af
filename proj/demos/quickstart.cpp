// Integrates a DSL function with three integrators and prints the reports.
#include <cmath>
#include <cstdio>

#include "ordint/ordint.hpp"

int main() {
    using namespace ordint;
    const auto space = PavedSpace::interval(0.0, 1.0);
    const Integrand f = dsl::compile("x^2 + sin(2*x)", space.ground().intervals());
    const auto mu = measures::length();

    NetRiemannOptions nr;
    nr.tol = 1e-6;
    const auto a = net_riemann_integral(f, mu, space, space.ground(), nr);

    SStarOptions ss;
    ss.tol = 1e-5;
    ss.schedule.levels = ss.max_steps = 14;
    const auto b = s_star_partition_integral(f, mu, space.ground(), ss);

    HenstockOptions hk;
    hk.tol = 1e-5;
    const auto c = henstock_integral(f, mu, space.ground(),
                                     [](std::size_t k) { return Gauge::constant(std::ldexp(0.5, -static_cast<int>(k))); },
                                     hk);

    for (const auto* r : {&a, &b, &c})
        std::printf("%-12s %-12s %.15f  +- %.3g\n", r->integrator.c_str(), to_string(r->verdict), r->value.as_scalar(),
                    r->cauchy_bound.as_scalar());
    std::printf("closed form               %.15f\n", 1.0 / 3.0 + (1.0 - std::cos(2.0)) / 2.0);
}
