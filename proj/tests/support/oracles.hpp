#pragma once

// Reference values computed independently of the library: closed forms,
// plain loops over doubles, exhaustive searches on tiny grids.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

// Closed forms.

inline double integral_identity_unit() { return 0.5; }

/// int_0^1 (1 - t)^k dt.
inline double power_capacity_of_identity(double k) { return 1.0 / (k + 1.0); }

/// sum_{i>=1} 4^-i.
inline double dyadic_halves_integral() { return 1.0 / 3.0; }

/// sum_{n>=1} r^n.
inline double geometric_sum(double r) { return r / (1.0 - r); }

/// int_0^1 a + b x + c sin(w x + p) dx.
inline double lipschitz_fixture_integral(double a, double b, double c, double w, double p) {
    return a + b / 2.0 + c * (std::cos(p) - std::cos(w + p)) / w;
}

/// int_0^1 (1 - x)^2 dx over [0, 1 - 2^-k].
inline double one_minus_x_squared(double hi) { return (1.0 - std::pow(1.0 - hi, 3.0)) / 3.0; }

/// int_lo^1 x^-1/2 dx.
inline double inverse_sqrt(double lo) { return 2.0 - 2.0 * std::sqrt(lo); }

/// Left-endpoint Riemann sum of x over n equal cells of [0, 1).
inline double left_sum_identity(int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(i) / n;
    return s / n;
}

// Simple functions on [0, 1) with cuts at multiples of 1/16 and coefficients
// in (1/8)Z. The integral is an exact rational with denominator 128.

struct SimpleOracle {
    struct Part {
        int lo16, hi16;
        std::vector<int> coef8;
    };
    std::vector<Part> parts;

    std::vector<double> integral(std::size_t dim) const {
        std::vector<long long> num(dim, 0);
        for (const auto& p : parts)
            for (std::size_t k = 0; k < dim; ++k) num[k] += static_cast<long long>(p.coef8[k]) * (p.hi16 - p.lo16);
        std::vector<double> out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = static_cast<double>(num[k]) / 128.0;
        return out;
    }
};

// Fremlin inequality on truncated triple sequences. The combiner b is found by
// brute force: b_ij = t_i for a row value t_i drawn from the candidate grid
// {0} u {partial column sums of a}, rows searched exhaustively, smallest total
// kept among those satisfying the inequality for every selector of a finite
// family and every k.

struct Triple {
    std::size_t n, i, j;
    std::vector<double> a;  // (n, i, j) 1-based, columns past j clamp to j
    double at(std::size_t nn, std::size_t ii, std::size_t jj) const {
        jj = std::min(jj, j);
        return a[((nn - 1) * i + (ii - 1)) * j + (jj - 1)];
    }
};

struct Double {
    std::size_t i, j;
    std::vector<double> b;
    double at(std::size_t ii, std::size_t jj) const { return b[(ii - 1) * j + (std::min(jj, j) - 1)]; }
};

/// Selectors phi: {1..len} -> {1..cols}, all of them.
inline std::vector<std::vector<std::size_t>> all_selectors(std::size_t len, std::size_t cols) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> v(len, 1);
    while (true) {
        out.push_back(v);
        std::size_t p = 0;
        while (p < len && v[p] == cols) v[p++] = 1;
        if (p == len) break;
        ++v[p];
    }
    return out;
}

inline double fremlin_left(const Triple& a, double L, const std::vector<std::size_t>& phi, std::size_t k,
                           std::size_t depth) {
    double sum = 0.0;
    for (std::size_t n = 1; n <= k; ++n) {
        double sup = 0.0;
        for (std::size_t i = 1; i <= depth; ++i) sup = std::max(sup, a.at(n, i, phi[i + n - 1]));
        sum += sup;
    }
    return std::min(L, sum);
}

inline double fremlin_right(const Double& b, double L, const std::vector<std::size_t>& phi, std::size_t depth) {
    double sup = 0.0;
    for (std::size_t j = 1; j <= depth; ++j) sup = std::max(sup, std::min(L, b.at(j, phi[j - 1])));
    return sup;
}

inline bool fremlin_holds_everywhere(const Triple& a, const Double& b, double L,
                                     const std::vector<std::vector<std::size_t>>& phis) {
    const std::size_t depth = a.i;
    for (const auto& phi : phis)
        for (std::size_t k = 1; k <= a.n; ++k)
            if (fremlin_left(a, L, phi, k, depth) > fremlin_right(b, L, phi, depth)) return false;
    return true;
}

/// Minimal row-constant combiner over the candidate grid; empty b if none.
inline Double brute_force_combiner(const Triple& a, double L) {
    const auto phis = all_selectors(a.n + a.i, a.j);
    std::set<double> grid{0.0};
    for (std::size_t k = 1; k <= a.n; ++k) {
        double s = 0.0;
        for (std::size_t n = 1; n <= k; ++n) {
            double sup = 0.0;
            for (std::size_t i = 1; i <= a.i; ++i)
                for (std::size_t j = 1; j <= a.j; ++j) sup = std::max(sup, a.at(n, i, j));
            s += sup;
        }
        grid.insert(s);
        grid.insert(std::min(s, L));
    }
    const std::vector<double> cand(grid.begin(), grid.end());
    const std::size_t rows = a.i, cols = a.j, m = cand.size();
    Double best{rows, cols, {}};
    double best_total = INFINITY;
    std::vector<std::size_t> pick(rows, 0);
    while (true) {
        Double b{rows, cols, std::vector<double>(rows * cols)};
        double total = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) b.b[r * cols + c] = cand[pick[r]];
            total += cand[pick[r]];
        }
        if (total < best_total && fremlin_holds_everywhere(a, b, L, phis)) {
            best = b;
            best_total = total;
        }
        std::size_t p = 0;
        while (p < rows && pick[p] == m - 1) pick[p++] = 0;
        if (p == rows) break;
        ++pick[p];
    }
    return best;
}

// Henstock: bisect [0, 1] until every cell is shorter than a constant gauge.

inline std::size_t bisection_cells_for_constant_gauge(double r) {
    std::size_t cells = 1;
    double len = 1.0;
    while (!(len < r)) {
        len /= 2.0;
        cells *= 2;
    }
    return cells;
}

// Order-theoretic limsup/liminf by a nested scan.

inline std::pair<double, double> limsup_liminf(const std::vector<double>& x, std::size_t min_tail) {
    const std::size_t n = x.size();
    double ls = INFINITY, li = -INFINITY;
    for (std::size_t k = 0; k + min_tail <= n; ++k) {
        double hi = -INFINITY, lo = INFINITY;
        for (std::size_t m = k; m < n; ++m) {
            hi = std::max(hi, x[m]);
            lo = std::min(lo, x[m]);
        }
        ls = std::min(ls, hi);
        li = std::max(li, lo);
    }
    return {ls, li};
}

}  // namespace oracle
