#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>

#include <boost/container/small_vector.hpp>

#include "ordint/errors.hpp"

namespace ordint {

/// Identifies the ambient Riesz space a value lives in. Values from different
/// spaces never meet in one expression.
struct SpaceTag {
    std::uint32_t id = 0;
    friend auto operator<=>(const SpaceTag&, const SpaceTag&) = default;
};

inline constexpr SpaceTag kEuclidean{0};

/// An element of R^d with the componentwise order. Immutable in spirit: every
/// operation returns a new value.
class RieszValue {
public:
    using Storage = boost::container::small_vector<double, 4>;

    RieszValue() = default;

    RieszValue(std::initializer_list<double> coords, SpaceTag space = kEuclidean)
        : space_(space), coords_(coords.begin(), coords.end()) {
        require_nonempty();
    }

    explicit RieszValue(std::span<const double> coords, SpaceTag space = kEuclidean)
        : space_(space), coords_(coords.begin(), coords.end()) {
        require_nonempty();
    }

    static RieszValue scalar(double v, SpaceTag space = kEuclidean) { return RieszValue({v}, space); }

    static RieszValue zero(std::size_t dim, SpaceTag space = kEuclidean) { return constant(dim, 0.0, space); }

    static RieszValue constant(std::size_t dim, double v, SpaceTag space = kEuclidean) {
        RieszValue r;
        r.space_ = space;
        r.coords_.assign(dim, v);
        r.require_nonempty();
        return r;
    }

    std::size_t dim() const noexcept { return coords_.size(); }
    SpaceTag space() const noexcept { return space_; }
    bool empty() const noexcept { return coords_.empty(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return {coords_.data(), coords_.size()}; }

    /// The single coordinate of a one-dimensional value.
    double as_scalar() const {
        if (dim() != 1) throw StructuralError("lattice-core", "as_scalar", "value is not one-dimensional");
        return coords_[0];
    }

    bool is_zero() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
    }
    bool is_nonnegative() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c >= 0.0; });
    }
    bool is_finite() const noexcept {
        return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
    }
    /// Sup norm, used only for reporting and for the normed instantiation.
    double max_abs() const noexcept {
        double m = 0.0;
        for (double c : coords_) m = std::max(m, std::abs(c));
        return m;
    }

    template <class Op>
    RieszValue map(Op op) const {
        RieszValue r = *this;
        for (double& c : r.coords_) c = op(c);
        return r;
    }

    template <class Op>
    static RieszValue zip(const RieszValue& a, const RieszValue& b, const char* operation, Op op) {
        check_compatible(a, b, operation);
        RieszValue r = a;
        for (std::size_t i = 0; i < r.dim(); ++i) r.coords_[i] = op(a.coords_[i], b.coords_[i]);
        return r;
    }

    static void check_compatible(const RieszValue& a, const RieszValue& b, const char* operation) {
        if (a.space_ != b.space_)
            throw StructuralError("lattice-core", operation, "values belong to different spaces");
        if (a.dim() != b.dim())
            throw StructuralError("lattice-core", operation,
                                  "dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                      std::to_string(b.dim()) + ")");
    }

    friend RieszValue operator+(const RieszValue& a, const RieszValue& b) {
        return zip(a, b, "add", [](double x, double y) { return x + y; });
    }
    friend RieszValue operator-(const RieszValue& a, const RieszValue& b) {
        return zip(a, b, "subtract", [](double x, double y) { return x - y; });
    }
    friend RieszValue operator-(const RieszValue& a) {
        return a.map([](double x) { return -x; });
    }
    friend RieszValue operator*(double s, const RieszValue& a) {
        return a.map([s](double x) { return s * x; });
    }
    friend RieszValue operator*(const RieszValue& a, double s) { return s * a; }
    friend RieszValue operator/(const RieszValue& a, double s) {
        return a.map([s](double x) { return x / s; });
    }
    RieszValue& operator+=(const RieszValue& b) { return *this = *this + b; }
    RieszValue& operator-=(const RieszValue& b) { return *this = *this - b; }

    friend bool operator==(const RieszValue& a, const RieszValue& b) {
        return a.space_ == b.space_ && a.coords_ == b.coords_;
    }

private:
    void require_nonempty() const {
        if (coords_.empty()) throw StructuralError("lattice-core", "construct", "dimension must be at least 1");
    }

    SpaceTag space_{};
    Storage coords_;
};

/// Componentwise order. Exact: no tolerance.
inline bool leq(const RieszValue& a, const RieszValue& b) {
    RieszValue::check_compatible(a, b, "leq");
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!(a[i] <= b[i])) return false;
    return true;
}

inline RieszValue join(const RieszValue& a, const RieszValue& b) {
    return RieszValue::zip(a, b, "join", [](double x, double y) { return std::max(x, y); });
}

inline RieszValue meet(const RieszValue& a, const RieszValue& b) {
    return RieszValue::zip(a, b, "meet", [](double x, double y) { return std::min(x, y); });
}

struct JoinMeet {
    RieszValue sup;
    RieszValue inf;
};

inline JoinMeet join_meet(const RieszValue& a, const RieszValue& b) { return {join(a, b), meet(a, b)}; }

struct AbsParts {
    RieszValue abs;
    RieszValue pos;
    RieszValue neg;
};

inline RieszValue pos_part(const RieszValue& a) {
    return a.map([](double x) { return x > 0.0 ? x : 0.0; });
}
inline RieszValue neg_part(const RieszValue& a) {
    return a.map([](double x) { return x < 0.0 ? -x : 0.0; });
}
inline RieszValue abs(const RieszValue& a) {
    return a.map([](double x) { return std::abs(x); });
}

/// |a| = a v (-a), a+ = a v 0, a- = (-a) v 0.
inline AbsParts abs_parts(const RieszValue& a) { return {abs(a), pos_part(a), neg_part(a)}; }

/// Smallest n with n*a not <= b, for a > 0; returns 0 when a has no positive
/// coordinate (the only way the Archimedean probe can fail).
inline std::uint64_t archimedean_witness(const RieszValue& a, const RieszValue& b) {
    RieszValue::check_compatible(a, b, "archimedean_witness");
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] <= 0.0) continue;
        double n = std::floor(std::max(b[i], 0.0) / a[i]) + 1.0;
        auto k = static_cast<std::uint64_t>(n);
        while (static_cast<double>(k) * a[i] <= b[i]) ++k;
        if (best == 0 || k < best) best = k;
    }
    return best;
}

enum class ProductKind { scalar_scalar, scalar_vector, vector_scalar, componentwise };

/// A bilinear product X x Y -> Z between two of the concrete spaces.
struct ProductRule {
    ProductKind kind = ProductKind::scalar_scalar;
    SpaceTag x_space = kEuclidean;
    SpaceTag y_space = kEuclidean;
    SpaceTag z_space = kEuclidean;

    static ProductRule scalar_scalar() { return {ProductKind::scalar_scalar}; }
    static ProductRule scalar_vector() { return {ProductKind::scalar_vector}; }
    static ProductRule vector_scalar() { return {ProductKind::vector_scalar}; }
    static ProductRule componentwise() { return {ProductKind::componentwise}; }

    /// Output dimension for the given operand dimensions, or throws.
    std::size_t result_dim(std::size_t dx, std::size_t dy) const {
        switch (kind) {
            case ProductKind::scalar_scalar:
                if (dx == 1 && dy == 1) return 1;
                break;
            case ProductKind::scalar_vector:
                if (dx == 1) return dy;
                break;
            case ProductKind::vector_scalar:
                if (dy == 1) return dx;
                break;
            case ProductKind::componentwise:
                if (dx == dy) return dx;
                break;
        }
        throw StructuralError("lattice-core", "apply_product",
                              "operand dimensions " + std::to_string(dx) + "x" + std::to_string(dy) +
                                  " do not fit the product kind");
    }

    friend bool operator==(const ProductRule&, const ProductRule&) = default;
};

inline RieszValue apply_product(const ProductRule& rule, const RieszValue& x, const RieszValue& y) {
    if (x.space() != rule.x_space || y.space() != rule.y_space)
        throw StructuralError("lattice-core", "apply_product", "operand space does not match the rule");
    const std::size_t d = rule.result_dim(x.dim(), y.dim());
    RieszValue::Storage out(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double xi = x.dim() == 1 ? x[0] : x[i];
        const double yi = y.dim() == 1 ? y[0] : y[i];
        out[i] = xi * yi;
    }
    return RieszValue(std::span<const double>(out.data(), out.size()), rule.z_space);
}

inline std::string to_string(const RieszValue& v) {
    std::string s = "[";
    char buf[32];
    for (std::size_t i = 0; i < v.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + "]";
}

}  // namespace ordint
