#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/measure.hpp"
#include "ordint/sets.hpp"

namespace ordint {

enum class TagMode {
    plain,  ///< tag_i in cell_i
    gauge   ///< tag_i in closure(cell_i)
};

enum class TagKind { left, midpoint, right, seeded_random, adversarial_list };

inline const char* to_string(TagKind k) {
    switch (k) {
        case TagKind::left: return "left";
        case TagKind::midpoint: return "midpoint";
        case TagKind::right: return "right";
        case TagKind::seeded_random: return "random";
        case TagKind::adversarial_list: return "adversarial";
    }
    return "?";
}

/// A choice rule picking one point from each cell.
struct TagPolicy {
    TagKind kind = TagKind::midpoint;
    std::uint64_t seed = 0;
    std::vector<double> points;  ///< adversarial_list candidates, tried in order

    static TagPolicy left() { return {TagKind::left, 0, {}}; }
    static TagPolicy midpoint() { return {TagKind::midpoint, 0, {}}; }
    static TagPolicy right() { return {TagKind::right, 0, {}}; }
    static TagPolicy random(std::uint64_t seed) { return {TagKind::seeded_random, seed, {}}; }
    static TagPolicy adversarial(std::vector<double> pts) { return {TagKind::adversarial_list, 0, std::move(pts)}; }

    std::string name() const {
        if (kind == TagKind::seeded_random) return "random:" + std::to_string(seed);
        return to_string(kind);
    }

    /// The standard sample of choice functions: left, midpoint, right, five
    /// seeded random policies and an adversarial list.
    static std::vector<TagPolicy> standard_family(std::uint64_t seed, std::vector<double> adversarial_points) {
        std::vector<TagPolicy> out{left(), midpoint(), right()};
        for (std::uint64_t k = 0; k < 5; ++k) out.push_back(random(seed * 1000003u + k));
        out.push_back(adversarial(std::move(adversarial_points)));
        return out;
    }
};

/// Stateful tag generator for one partition; random draws are sequential in
/// cell order, so tags depend only on (seed, step, cell order).
class Tagger {
public:
    Tagger(const TagPolicy& policy, std::size_t step, TagMode mode)
        : policy_(policy), mode_(mode), rng_(policy.seed * 0x9E3779B97F4A7C15ull + step + 1) {}

    double operator()(const PavingSet& cell) {
        if (cell.empty()) throw ContractViolation("partition-nets", "tag", "cannot tag an empty cell");
        if (cell.is_finite()) return tag_finite(cell.finite());
        return tag_piece(cell.intervals().pieces().front());
    }

private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    double tag_finite(const FiniteSubset& s) {
        const auto& e = s.elements();
        switch (policy_.kind) {
            case TagKind::left: return e.front();
            case TagKind::right: return e.back();
            case TagKind::midpoint: return e[(e.size() - 1) / 2];
            case TagKind::seeded_random: return e[std::min<std::size_t>(e.size() - 1, uniform01() * e.size())];
            case TagKind::adversarial_list:
                for (double p : policy_.points)
                    if (s.contains(p)) return p;
                return e.front();
        }
        return e.front();
    }

    double tag_piece(const Piece& p) {
        if (p.lo == p.hi) return p.lo;
        const bool closure = mode_ == TagMode::gauge;
        const double first = (p.lo_closed || closure) ? p.lo : std::nextafter(p.lo, p.hi);
        const double last = (p.hi_closed || closure) ? p.hi : std::nextafter(p.hi, p.lo);
        switch (policy_.kind) {
            case TagKind::left: return first;
            case TagKind::right: return last;
            case TagKind::midpoint: return std::clamp(p.lo + 0.5 * (p.hi - p.lo), first, last);
            case TagKind::seeded_random: return std::clamp(p.lo + uniform01() * (p.hi - p.lo), first, last);
            case TagKind::adversarial_list:
                for (double x : policy_.points)
                    if (first <= x && x <= last) return x;
                return first;
        }
        return first;
    }

    const TagPolicy& policy_;
    TagMode mode_;
    std::mt19937_64 rng_;
};

using CellList = std::shared_ptr<const std::vector<PavingSet>>;

namespace detail {

struct OwnedPiece {
    Piece piece;
    std::size_t owner;
};

inline void sort_pieces(std::vector<OwnedPiece>& v) {
    std::sort(v.begin(), v.end(), [](const OwnedPiece& a, const OwnedPiece& b) {
        if (a.piece.lo != b.piece.lo) return a.piece.lo < b.piece.lo;
        return a.piece.lo_closed && !b.piece.lo_closed;
    });
}

inline std::vector<OwnedPiece> owned_pieces(const std::vector<PavingSet>& cells) {
    std::vector<OwnedPiece> out;
    out.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (const auto& p : cells[i].intervals().pieces()) out.push_back({p, i});
    sort_pieces(out);
    return out;
}

}  // namespace detail

/// Finite family of pairwise disjoint, nonempty cells whose union is the
/// target. Validated on construction.
class Partition {
public:
    Partition(PavingSet target, std::vector<PavingSet> cells)
        : target_(std::move(target)), cells_(std::make_shared<const std::vector<PavingSet>>(std::move(cells))) {
        validate();
    }
    Partition(PavingSet target, CellList cells) : target_(std::move(target)), cells_(std::move(cells)) { validate(); }

    const PavingSet& target() const { return target_; }
    const std::vector<PavingSet>& cells() const { return *cells_; }
    const CellList& shared_cells() const { return cells_; }
    std::size_t size() const { return cells_->size(); }
    double mesh() const {
        double m = 0.0;
        for (const auto& c : *cells_) m = std::max(m, c.diameter());
        return m;
    }

private:
    void validate() const {
        const auto& cells = *cells_;
        for (const auto& c : cells) {
            if (c.empty()) throw ContractViolation("partition-nets", "Partition", "empty cell");
            if (c.is_interval() != target_.is_interval())
                throw StructuralError("partition-nets", "Partition", "cell and target live in different grounds");
        }
        if (target_.is_finite()) {
            std::vector<char> seen(target_.finite().universe(), 0);
            std::size_t total = 0;
            for (const auto& c : cells) {
                if (c.finite().universe() != target_.finite().universe())
                    throw StructuralError("partition-nets", "Partition", "cell over another universe");
                for (auto e : c.finite().elements()) {
                    if (seen[e]) throw ContractViolation("partition-nets", "Partition", "cells overlap");
                    seen[e] = 1;
                    ++total;
                    if (!target_.finite().contains(e))
                        throw ContractViolation("partition-nets", "Partition", "cell leaves the target");
                }
            }
            if (total != target_.finite().size())
                throw ContractViolation("partition-nets", "Partition", "cells do not cover the target");
            return;
        }
        const auto pieces = detail::owned_pieces(cells);
        IntervalSet::Pieces all;
        all.reserve(pieces.size());
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (i > 0) {
                const Piece& a = pieces[i - 1].piece;
                const Piece& b = pieces[i].piece;
                if (a.hi > b.lo || (a.hi == b.lo && a.hi_closed && b.lo_closed))
                    throw ContractViolation("partition-nets", "Partition", "cells overlap near " + format_number(b.lo));
            }
            all.push_back(pieces[i].piece);
        }
        if (!(IntervalSet::from_pieces(std::move(all)) == target_.intervals()))
            throw ContractViolation("partition-nets", "Partition", "cells do not have the target as union");
    }

    PavingSet target_;
    CellList cells_;
};

/// A partition with one tag per cell.
class TaggedPartition {
public:
    TaggedPartition(Partition partition, std::vector<double> tags, TagMode mode = TagMode::plain)
        : partition_(std::move(partition)), tags_(std::move(tags)), mode_(mode) {
        validate();
    }

    TaggedPartition(Partition partition, const TagPolicy& policy, std::size_t step, TagMode mode = TagMode::plain)
        : partition_(std::move(partition)), mode_(mode) {
        Tagger tagger(policy, step, mode);
        tags_.reserve(partition_.size());
        for (const auto& c : partition_.cells()) tags_.push_back(tagger(c));
        validate();
    }

    const Partition& partition() const { return partition_; }
    const PavingSet& target() const { return partition_.target(); }
    const std::vector<PavingSet>& cells() const { return partition_.cells(); }
    const std::vector<double>& tags() const { return tags_; }
    std::size_t size() const { return tags_.size(); }
    TagMode mode() const { return mode_; }

private:
    void validate() const {
        if (tags_.size() != partition_.size())
            throw ContractViolation("partition-nets", "TaggedPartition", "one tag per cell");
        for (std::size_t i = 0; i < tags_.size(); ++i) {
            const auto& c = partition_.cells()[i];
            const bool ok = mode_ == TagMode::gauge ? c.closure_contains(tags_[i]) : c.contains(tags_[i]);
            if (!ok)
                throw ContractViolation("partition-nets", "TaggedPartition",
                                        "tag " + format_number(tags_[i]) + " outside cell " + to_string(c));
        }
    }

    Partition partition_;
    std::vector<double> tags_;
    TagMode mode_;
};

namespace detail {

/// Index of the cell containing x, or npos.
inline std::size_t locate(const std::vector<OwnedPiece>& sorted, double x) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), x,
                               [](double v, const OwnedPiece& p) { return v < p.piece.lo; });
    for (int back = 0; back < 2 && it != sorted.begin(); ++back) {
        --it;
        if (it->piece.contains(x)) return it->owner;
    }
    return static_cast<std::size_t>(-1);
}

inline double interior_point(const Piece& p) { return p.lo_closed ? p.lo : p.lo + 0.5 * (p.hi - p.lo); }

}  // namespace detail

/// True iff every cell of `fine` lies inside some cell of `coarse`.
inline bool is_refinement(const Partition& fine, const Partition& coarse) {
    if (!(fine.target() == coarse.target()))
        throw ContractViolation("partition-nets", "is_refinement", "partitions have different targets");
    if (fine.target().is_finite()) {
        std::vector<std::size_t> owner(fine.target().finite().universe(), 0);
        for (std::size_t i = 0; i < coarse.size(); ++i)
            for (auto e : coarse.cells()[i].finite().elements()) owner[e] = i;
        for (const auto& c : fine.cells()) {
            const auto& e = c.finite().elements();
            for (auto x : e)
                if (owner[x] != owner[e.front()]) return false;
        }
        return true;
    }
    const auto sorted = detail::owned_pieces(coarse.cells());
    for (const auto& c : fine.cells()) {
        const double x = detail::interior_point(c.intervals().pieces().front());
        const std::size_t k = detail::locate(sorted, x);
        if (k == static_cast<std::size_t>(-1)) return false;
        if (!c.subset_of(coarse.cells()[k])) return false;
    }
    return true;
}

inline bool is_refinement(const TaggedPartition& fine, const TaggedPartition& coarse) {
    return is_refinement(fine.partition(), coarse.partition());
}

/// Cellwise intersections of P and Q, retagged by `policy`.
inline TaggedPartition common_refinement(const Partition& p, const Partition& q, const TagPolicy& policy,
                                         std::size_t step = 0) {
    if (!(p.target() == q.target()))
        throw ContractViolation("partition-nets", "common_refinement", "partitions have different targets");
    std::vector<PavingSet> cells;
    if (p.target().is_finite()) {
        for (const auto& a : p.cells())
            for (const auto& b : q.cells()) {
                PavingSet c = a.intersect(b);
                if (!c.empty()) cells.push_back(std::move(c));
            }
    } else {
        // Sweep: both sorted piece lists, intersect overlapping neighbours.
        const auto pa = detail::owned_pieces(p.cells());
        const auto qa = detail::owned_pieces(q.cells());
        std::size_t j = 0;
        for (const auto& a : pa) {
            while (j < qa.size() && (qa[j].piece.hi < a.piece.lo)) ++j;
            for (std::size_t k = j; k < qa.size() && qa[k].piece.lo <= a.piece.hi; ++k) {
                Piece c = intersect(a.piece, qa[k].piece);
                if (!c.empty()) cells.push_back(IntervalSet::from_piece(c));
            }
        }
    }
    return TaggedPartition(Partition(p.target(), std::move(cells)), policy, step);
}

/// n equal half-open cells of a single-piece interval target.
inline TaggedPartition uniform_tagged_partition(const PavingSet& target, long long n, const TagPolicy& policy) {
    if (n <= 0) throw ContractViolation("partition-nets", "uniform_tagged_partition", "n must be >= 1");
    if (!target.is_interval() || !target.intervals().is_single_piece())
        throw ContractViolation("partition-nets", "uniform_tagged_partition", "target must be one interval");
    const Piece p = target.intervals().pieces().front();
    std::vector<PavingSet> cells;
    cells.reserve(static_cast<std::size_t>(n));
    const double w = p.hi - p.lo;
    double prev = p.lo;
    for (long long i = 1; i <= n; ++i) {
        const double next = i == n ? p.hi : p.lo + w * (static_cast<double>(i) / static_cast<double>(n));
        Piece c{prev, next, i == 1 ? p.lo_closed : true, i == n ? p.hi_closed : false};
        if (!c.empty()) cells.push_back(IntervalSet::from_piece(c));
        prev = next;
    }
    return TaggedPartition(Partition(target, std::move(cells)), policy, 0);
}

namespace detail {

/// Split a piece into `count` equal subcells: boundaries lo + w*(i/count), so
/// successive power-of-two counts refine each other exactly.
inline void split_piece(const Piece& p, std::size_t count, std::vector<PavingSet>& out) {
    if (p.lo == p.hi) {
        out.push_back(IntervalSet::from_piece(p));
        return;
    }
    const double w = p.hi - p.lo;
    const double inv = 1.0 / static_cast<double>(count);
    double prev = p.lo;
    for (std::size_t i = 1; i <= count; ++i) {
        const double next = i == count ? p.hi : p.lo + w * (static_cast<double>(i) * inv);
        Piece c{prev, next, i == 1 ? p.lo_closed : true, i == count ? p.hi_closed : false};
        if (!c.empty()) out.push_back(IntervalSet::from_piece(c));
        prev = next;
    }
}

inline void split_finite(const std::vector<std::uint32_t>& e, std::size_t lo, std::size_t hi, std::size_t depth,
                         std::size_t universe, std::vector<PavingSet>& out) {
    if (depth == 0 || hi - lo == 1) {
        out.push_back(FiniteSubset(universe, std::vector<std::uint32_t>(e.begin() + lo, e.begin() + hi)));
        return;
    }
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    split_finite(e, lo, mid, depth - 1, universe, out);
    split_finite(e, mid, hi, depth - 1, universe, out);
}

}  // namespace detail

/// A cofinal chain through the partitions of a target: step k refines every
/// earlier step. Cells are generated once per step; tags are applied per policy.
class RefinementChain {
public:
    using Generator = std::function<std::vector<PavingSet>(std::size_t)>;

    RefinementChain(std::string name, PavingSet target, Generator gen, std::optional<std::size_t> last_step = {})
        : name_(std::move(name)), target_(std::move(target)), gen_(std::move(gen)), last_step_(last_step) {}

    /// Each piece of the target split into 2^k equal cells (points stay whole).
    /// Finite targets split recursively in halves down to singletons.
    static RefinementChain dyadic(const PavingSet& target) {
        if (target.is_finite()) {
            const auto fs = target.finite();
            std::size_t depth = 0;
            while ((std::size_t{1} << depth) < fs.size()) ++depth;
            return RefinementChain(
                "dyadic", target,
                [fs](std::size_t k) {
                    std::vector<PavingSet> out;
                    if (!fs.empty()) detail::split_finite(fs.elements(), 0, fs.size(), k, fs.universe(), out);
                    return out;
                },
                depth);
        }
        const auto is = target.intervals();
        return RefinementChain("dyadic", target, [is](std::size_t k) {
            if (k > 52) throw ResourceError("partition-nets", "dyadic", "refinement level beyond double resolution");
            std::vector<PavingSet> out;
            out.reserve(is.pieces().size() << k);
            for (const auto& p : is.pieces()) detail::split_piece(p, std::size_t{1} << k, out);
            return out;
        });
    }

    /// Geometric blocks toward the left end of a single-piece target:
    /// [lo, lo + l*2^-J), then [lo + l*2^-(j+1), lo + l*2^-j) for j < J; each
    /// block split into 2^k cells at step k. Suited to integrands with a
    /// singularity just left of the target.
    static RefinementChain graded(const PavingSet& target, std::size_t blocks) {
        if (!target.is_interval() || !target.intervals().is_single_piece())
            throw ContractViolation("partition-nets", "graded", "target must be one interval");
        if (blocks == 0) throw ContractViolation("partition-nets", "graded", "needs at least one block");
        const Piece p = target.intervals().pieces().front();
        std::vector<double> edges;  // increasing
        edges.push_back(p.lo);
        const double w = p.hi - p.lo;
        for (std::size_t j = blocks; j >= 1; --j) edges.push_back(p.lo + w * std::ldexp(1.0, -static_cast<int>(j)));
        edges.push_back(p.hi);
        return RefinementChain("graded", target, [p, edges](std::size_t k) {
            std::vector<PavingSet> out;
            for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
                Piece blk{edges[b], edges[b + 1], b == 0 ? p.lo_closed : true,
                          b + 2 == edges.size() ? p.hi_closed : false};
                if (!blk.empty()) detail::split_piece(blk, std::size_t{1} << k, out);
            }
            return out;
        });
    }

    const std::string& name() const { return name_; }
    const PavingSet& target() const { return target_; }
    std::optional<std::size_t> last_step() const { return last_step_; }

    Partition partition(std::size_t step) const {
        const std::size_t k = last_step_ ? std::min(step, *last_step_) : step;
        return Partition(target_, gen_(k));
    }
    TaggedPartition at(std::size_t step, const TagPolicy& policy, TagMode mode = TagMode::plain) const {
        return TaggedPartition(partition(step), policy, step, mode);
    }

private:
    std::string name_;
    PavingSet target_;
    Generator gen_;
    std::optional<std::size_t> last_step_;
};

/// A positive radius function; a tagged cell is fine when it lies inside the
/// open ball (t - g(t), t + g(t)).
struct Gauge {
    std::string name;
    std::function<double(double)> radius;

    static Gauge constant(double r) {
        return {"constant(" + format_number(r) + ")", [r](double) { return r; }};
    }
    /// min(r, max(|t - c|/2, floor)): small only near c.
    static Gauge focused(double c, double r, double floor) {
        return {"focused(" + format_number(c) + ")",
                [c, r, floor](double t) { return std::min(r, std::max(std::abs(t - c) / 2, floor)); }};
    }
};

inline bool gauge_fine(const Piece& cell, double tag, const Gauge& g) {
    const double r = g.radius(tag);
    return tag - r < cell.lo && cell.hi < tag + r;
}

/// Cousin bisection: a cell is accepted with its left or right endpoint as
/// tag (in that order) when it is gauge-fine; otherwise it is halved. Endpoint
/// tags keep every accepted cell shorter than the gauge at its tag.
inline TaggedPartition gauge_fine_partition(const PavingSet& target, const Gauge& g, std::size_t max_depth) {
    if (!target.is_interval() || !target.intervals().is_single_piece())
        throw ContractViolation("partition-nets", "gauge_fine_partition", "target must be one interval");
    const Piece root = target.intervals().pieces().front();
    std::vector<PavingSet> cells;
    std::vector<double> tags;
    struct Item {
        Piece piece;
        std::size_t depth;
    };
    std::vector<Item> stack{{root, 0}};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const Piece& p = it.piece;
        const double mid = p.lo + 0.5 * (p.hi - p.lo);
        bool done = false;
        for (double t : {p.lo, p.hi}) {
            const double r = g.radius(t);
            if (!(r > 0.0))
                throw ContractViolation("partition-nets", "gauge_fine_partition",
                                        "gauge not positive at " + format_number(t));
            if (gauge_fine(p, t, g)) {
                cells.push_back(IntervalSet::from_piece(p));
                tags.push_back(t);
                done = true;
                break;
            }
        }
        if (done) continue;
        if (it.depth >= max_depth || !(p.lo < mid && mid < p.hi))
            throw ResourceError("partition-nets", "gauge_fine_partition",
                                "bisection depth " + std::to_string(max_depth) + " exhausted near " +
                                    format_number(p.lo));
        // push right first so cells come out left to right
        stack.push_back({{mid, p.hi, true, p.hi_closed}, it.depth + 1});
        stack.push_back({{p.lo, mid, p.lo_closed, false}, it.depth + 1});
    }
    return TaggedPartition(Partition(target, std::move(cells)), std::move(tags), TagMode::gauge);
}

/// Post-hoc check of sigma_i inside (tau_i - g, tau_i + g) for every cell.
inline bool verify_gauge_fine(const TaggedPartition& p, const Gauge& g) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (const auto& piece : p.cells()[i].intervals().pieces())
            if (!gauge_fine(piece, p.tags()[i], g)) return false;
    return true;
}

enum class StreamKind {
    uniform_halving,  ///< every geometric cell split into 2^m
    mesh_equalizing   ///< geometric cells split until no cell exceeds l*2^-m
};

/// One countable disjoint covering of a target. Each nondegenerate piece of
/// length l is exhausted by geometric cells G_n = [hi - l 2^-(n-1), hi - l 2^-n)
/// (group n); closed right endpoints and degenerate pieces are point cells in
/// group 1. At level m each G_n is subdivided per the stream kind. Cells are
/// enumerated group by group; cells of one group follow piece order. Finite
/// targets use the halving partition at step m as group 1 and empty groups
/// afterwards.
class CountablePartition {
public:
    CountablePartition(PavingSet target, StreamKind kind, std::size_t level)
        : target_(std::move(target)), kind_(kind), level_(level) {
        if (target_.empty()) throw ContractViolation("partition-nets", "CountablePartition", "empty target");
        if (target_.is_interval()) {
            for (const auto& p : target_.intervals().pieces()) {
                if (p.lo == p.hi) {
                    points_.push_back(p.lo);
                    continue;
                }
                pieces_.push_back(p);
                if (p.hi_closed) points_.push_back(p.hi);
            }
        } else {
            finite_cells_ = RefinementChain::dyadic(target_).partition(level).cells();
        }
    }

    /// The same covering with N prepended as its first cell (group 0).
    CountablePartition with_leading_cell(PavingSet n) const {
        if (!n.disjoint_from(target_))
            throw ContractViolation("partition-nets", "with_leading_cell", "leading cell meets the target");
        CountablePartition c = *this;
        c.leading_ = std::move(n);
        return c;
    }

    /// Union of all cells, including a leading cell.
    PavingSet union_set() const { return leading_ ? target_.unite(*leading_) : target_; }
    const PavingSet& target() const { return target_; }
    std::size_t level() const { return level_; }
    StreamKind kind() const { return kind_; }

    /// Cells of group n (n >= 1; group 0 is the leading cell if present).
    std::vector<PavingSet> group(std::size_t n) const {
        std::vector<PavingSet> out;
        if (n == 0) {
            if (leading_ && !leading_->empty()) out.push_back(*leading_);
            return out;
        }
        if (target_.is_finite()) {
            if (n == 1) out = finite_cells_;
            return out;
        }
        if (n == 1)
            for (double x : points_) out.push_back(IntervalSet::point(x));
        for (const auto& p : pieces_) {
            const Piece g = geometric_cell(p, n);
            if (!g.empty()) detail::split_piece(g, subdivisions(n), out);
        }
        return out;
    }

    /// Cells of groups 0..groups in enumeration order.
    std::vector<PavingSet> cells(std::size_t groups) const {
        std::vector<PavingSet> out;
        for (std::size_t n = 0; n <= groups; ++n) {
            auto g = group(n);
            out.insert(out.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
        }
        return out;
    }

    /// What the first `groups` groups leave uncovered.
    PavingSet remainder_after(std::size_t groups) const {
        if (target_.is_finite()) return groups >= 1 ? PavingSet(FiniteSubset(target_.finite().universe(), {})) : target_;
        IntervalSet::Pieces rest;
        for (const auto& p : pieces_) {
            if (groups == 0) {
                rest.push_back({p.lo, p.hi, p.lo_closed, false});
            } else {
                rest.push_back({boundary(p, groups), p.hi, true, false});
            }
        }
        if (groups == 0)
            for (double x : points_) rest.push_back({x, x, true, true});
        return IntervalSet::from_pieces(std::move(rest));
    }

    /// Union of the first k enumerated cells.
    static PavingSet covered(const PavingSet& like, const std::vector<PavingSet>& cells, std::size_t k) {
        k = std::min(k, cells.size());
        if (like.is_finite()) {
            FiniteSubset u(like.finite().universe(), {});
            for (std::size_t i = 0; i < k; ++i) u = u.unite(cells[i].finite());
            return u;
        }
        IntervalSet::Pieces all;
        for (std::size_t i = 0; i < k; ++i)
            for (const auto& p : cells[i].intervals().pieces()) all.push_back(p);
        return IntervalSet::from_pieces(std::move(all));
    }

    /// Level-0 view as a disjoint stream: one part per group (the leading
    /// cell, if any, is part 1).
    DisjointStream as_disjoint_stream() const {
        DisjointStream s;
        s.union_set = union_set();
        const bool lead = leading_.has_value();
        auto self = std::make_shared<CountablePartition>(*this);
        s.part = [self, lead](std::size_t i) {
            const std::size_t n = lead ? i - 1 : i;
            auto cells = self->group(n);
            if (self->target_.is_finite()) {
                FiniteSubset u(self->target_.finite().universe(), {});
                for (const auto& c : cells) u = u.unite(c.finite());
                return PavingSet(u);
            }
            IntervalSet::Pieces all;
            for (const auto& c : cells)
                for (const auto& p : c.intervals().pieces()) all.push_back(p);
            return PavingSet(IntervalSet::from_pieces(std::move(all)));
        };
        if (target_.is_finite()) s.length = lead ? 2 : 1;
        s.remaining_length = [self, lead](std::size_t n) {
            const std::size_t groups = lead ? (n == 0 ? 0 : n - 1) : n;
            double len = self->remainder_after(groups).intervals().length();
            if (lead && n == 0) len += self->leading_->intervals().length();
            return len;
        };
        return s;
    }

private:
    static double boundary(const Piece& p, std::size_t n) {
        if (n == 0) return p.lo;
        return p.hi - (p.hi - p.lo) * std::ldexp(1.0, -static_cast<int>(n));
    }
    static Piece geometric_cell(const Piece& p, std::size_t n) {
        return {boundary(p, n - 1), boundary(p, n), n == 1 ? p.lo_closed : true, false};
    }
    std::size_t subdivisions(std::size_t n) const {
        if (kind_ == StreamKind::uniform_halving) return std::size_t{1} << level_;
        return level_ > n ? std::size_t{1} << (level_ - n) : 1;
    }

    PavingSet target_;
    StreamKind kind_;
    std::size_t level_;
    std::vector<Piece> pieces_;
    std::vector<double> points_;
    std::vector<PavingSet> finite_cells_;
    std::optional<PavingSet> leading_;
};

/// Named preset: levels first_level, first_level+1, ... of one stream kind.
struct StreamSchedule {
    StreamKind kind = StreamKind::mesh_equalizing;
    std::size_t first_level = 6;
    std::size_t levels = 12;  ///< outer refinements
    std::size_t groups = 40;  ///< geometric groups summed per inner series

    CountablePartition at(const PavingSet& target, std::size_t outer) const {
        return CountablePartition(target, kind, first_level + outer);
    }
};

/// Dyadic countable partition stream of a target at level 0.
inline CountablePartition dyadic_countable_partition(const PavingSet& target,
                                                     StreamKind kind = StreamKind::mesh_equalizing,
                                                     std::size_t level = 0) {
    if (target.is_interval() && !(target.intervals().length() > 0.0))
        throw ContractViolation("partition-nets", "dyadic_countable_partition", "degenerate target");
    return CountablePartition(target, kind, level);
}

/// How many enumerated cells of a countable partition enter a Sion sum.
struct Truncation {
    std::string name;
    /// (outer index, covering) -> cell count; must be nondecreasing in the
    /// outer index and keep the covered set increasing.
    std::function<std::size_t(std::size_t, const CountablePartition&)> count;

    /// All cells of the first `groups` groups.
    static Truncation first_groups(std::size_t groups) {
        return {"groups(" + std::to_string(groups) + ")", [groups](std::size_t, const CountablePartition& c) {
                    return c.cells(groups).size();
                }};
    }
    /// base + step * outer cells: grows slower than any covering.
    static Truncation linear(std::size_t base, std::size_t step) {
        return {"linear(" + std::to_string(base) + "," + std::to_string(step) + ")",
                [base, step](std::size_t outer, const CountablePartition&) { return base + step * outer; }};
    }
};

/// Sion monotonicity on one pair of consecutive truncations: the coarse
/// selection is covered by the fine one.
inline bool sion_monotone(const PavingSet& target, const std::vector<PavingSet>& coarse, std::size_t k_coarse,
                          const std::vector<PavingSet>& fine, std::size_t k_fine) {
    return CountablePartition::covered(target, coarse, k_coarse)
        .subset_of(CountablePartition::covered(target, fine, k_fine));
}

}  // namespace ordint
