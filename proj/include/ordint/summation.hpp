#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ordint/lattice.hpp"

namespace ordint {

/// Pairwise summation with a fixed split, so the result does not depend on
/// how the caller chunks the work. Every step is a rounded addition, hence the
/// result is monotone in each term: a_i <= b_i for all i gives sum(a) <= sum(b).
inline double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kBlock = 8;
    if (xs.size() <= kBlock) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Accumulates RieszValues coordinate by coordinate and reduces them pairwise.
class VectorAccumulator {
public:
    explicit VectorAccumulator(std::size_t dim, SpaceTag space = kEuclidean) : space_(space), lanes_(dim) {}

    void reserve(std::size_t n) {
        for (auto& lane : lanes_) lane.reserve(n);
    }

    void add(const RieszValue& v) {
        if (v.dim() != lanes_.size() || v.space() != space_)
            throw StructuralError("lattice-core", "accumulate", "term does not match the accumulator space");
        for (std::size_t i = 0; i < lanes_.size(); ++i) lanes_[i].push_back(v[i]);
    }

    std::size_t count() const { return lanes_.empty() ? 0 : lanes_[0].size(); }

    RieszValue total() const {
        RieszValue::Storage out(lanes_.size());
        for (std::size_t i = 0; i < lanes_.size(); ++i) out[i] = pairwise_sum(lanes_[i]);
        return RieszValue(std::span<const double>(out.data(), out.size()), space_);
    }

private:
    SpaceTag space_;
    std::vector<std::vector<double>> lanes_;
};

}  // namespace ordint
