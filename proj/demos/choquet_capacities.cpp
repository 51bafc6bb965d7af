// Choquet integral of x on [0, 1) against C(A) = length(A)^k.
#include <cstdio>

#include "ordint/ordint.hpp"

int main() {
    using namespace ordint;
    const PavingSet omega = PavingSet::half_open(0.0, 1.0);
    ChoquetOptions opt;
    opt.tol = 1e-6;
    for (double k : {0.5, 1.0, 2.0, 3.0}) {
        const auto r = choquet_integral(integrands::identity(), Capacity::power_of_length(k), omega, opt);
        std::printf("k = %.1f  %-12s %.12f  expected %.12f\n", k, to_string(r.verdict), r.value.as_scalar(),
                    1.0 / (k + 1.0));
    }
}
