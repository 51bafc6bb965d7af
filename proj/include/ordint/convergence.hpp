#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"
#include "ordint/regulator.hpp"

namespace ordint {

enum class Verdict { certified, inconclusive, diverged };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::inconclusive: return "inconclusive";
        case Verdict::diverged: return "diverged";
    }
    return "?";
}

/// A net observed along a cofinal chain of its directed set. Labels are
/// strictly increasing in the chain order; the directed set itself is never
/// materialised.
class NetSample {
public:
    struct Entry {
        std::uint64_t label;
        RieszValue value;
    };

    NetSample() = default;
    explicit NetSample(std::vector<Entry> entries) : entries_(std::move(entries)) { validate(); }

    /// Labels 1..n for a plain sequence.
    static NetSample from_sequence(std::vector<RieszValue> values) {
        std::vector<Entry> e;
        e.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) e.push_back({i + 1, std::move(values[i])});
        return NetSample(std::move(e));
    }

    std::size_t size() const { return entries_.size(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }

    /// The quasi-subnet obtained by dropping the first `count` samples.
    NetSample drop_prefix(std::size_t count) const {
        return NetSample(std::vector<Entry>(entries_.begin() + static_cast<std::ptrdiff_t>(count), entries_.end()));
    }

    /// Termwise sum of two nets sampled on the same chain.
    friend NetSample operator+(const NetSample& a, const NetSample& b) {
        if (a.size() != b.size())
            throw StructuralError("convergence", "NetSample::+", "nets sampled on different chains");
        std::vector<Entry> e;
        e.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].label != b[i].label)
                throw StructuralError("convergence", "NetSample::+", "nets sampled on different chains");
            e.push_back({a[i].label, a[i].value + b[i].value});
        }
        return NetSample(std::move(e));
    }

private:
    void validate() const {
        if (entries_.empty()) throw ContractViolation("convergence", "NetSample", "a net sample is nonempty");
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i].label <= entries_[i - 1].label)
                throw ContractViolation("convergence", "NetSample", "labels must strictly increase");
            RieszValue::check_compatible(entries_[0].value, entries_[i].value, "NetSample");
        }
    }

    std::vector<Entry> entries_;
};

struct ConvergenceStep {
    std::size_t position;  ///< 0-based sample position or term count
    RieszValue residual;
    RieszValue envelope;
};

struct ConvergenceReport {
    Verdict verdict = Verdict::inconclusive;
    RieszValue limit_estimate;
    RieszValue certified_bound;
    RieszValue worst_residual;
    std::optional<std::size_t> first_index;  ///< sample position i0 that worked for every phi
    std::vector<ConvergenceStep> trace;
};

/// (D)-convergence of a sampled net to `limit` under `reg`, quantified over
/// the supplied selector family. A selector certifies when some tail of the
/// sample stays below the lower envelope; the net is refuted when its last
/// sample exceeds the upper envelope (value + tail) by more than 1e-12.
inline ConvergenceReport check_d_convergence(const NetSample& net, const RieszValue& limit, const Regulator& reg,
                                             const std::vector<SelectorFunction>& phis, std::size_t depth) {
    if (phis.empty()) throw ContractViolation("convergence", "check_d_convergence", "phis must be nonempty");
    if (net.size() == 0) throw ContractViolation("convergence", "check_d_convergence", "empty net");
    RieszValue::check_compatible(net[0].value, limit, "check_d_convergence");
    if (reg.dim() != limit.dim())
        throw StructuralError("convergence", "check_d_convergence", "regulator lives in another space");

    constexpr double kStraddle = 1e-12;
    ConvergenceReport report;
    report.limit_estimate = limit;

    std::vector<RieszValue> residuals;
    residuals.reserve(net.size());
    RieszValue worst = RieszValue::zero(limit.dim(), limit.space());
    for (std::size_t i = 0; i < net.size(); ++i) {
        residuals.push_back(abs(net[i].value - limit));
        worst = join(worst, residuals.back());
    }
    report.worst_residual = worst;

    bool all_certified = true;
    bool refuted = false;
    std::size_t i0_all = 0;
    std::optional<RieszValue> tightest;
    for (const auto& phi : phis) {
        const Envelope env = regulator_envelope(reg, phi, depth);
        const RieszValue upper = env.value + env.tail + RieszValue::constant(limit.dim(), kStraddle, limit.space());
        // Smallest i0 with residual_i <= value for every sampled i >= i0.
        std::size_t i0 = net.size();
        while (i0 > 0 && leq(residuals[i0 - 1], env.value)) --i0;
        report.trace.push_back({i0 < net.size() ? i0 : net.size() - 1, residuals.back(), env.value});
        if (i0 < net.size()) {
            i0_all = std::max(i0_all, i0);
            tightest = tightest ? meet(*tightest, env.value) : env.value;
        } else {
            all_certified = false;
            if (!leq(residuals.back(), upper)) refuted = true;
        }
    }

    if (all_certified) {
        report.verdict = Verdict::certified;
        report.first_index = i0_all;
        report.certified_bound = *tightest;
    } else {
        report.verdict = refuted ? Verdict::diverged : Verdict::inconclusive;
        report.certified_bound = worst;
    }
    return report;
}

struct LimsupLiminf {
    RieszValue limsup;
    RieszValue liminf;
    bool bounded = true;

    /// Order convergence on the sample: limsup and liminf meet within tol.
    bool converges(double tol) const {
        const RieszValue gap = limsup - liminf;
        return leq(gap, RieszValue::constant(gap.dim(), tol, gap.space()));
    }
};

/// Componentwise inf_i sup_{i' >= i} and sup_i inf_{i' >= i} over the sample.
/// The outer index only visits positions that leave a tail of at least
/// `min_tail` samples (default: a tenth of the sample, at least 2), so a single
/// trailing sample cannot pass for the tail of the net.
inline LimsupLiminf order_limsup_liminf(const NetSample& net, std::optional<std::size_t> min_tail = std::nullopt) {
    const std::size_t n = net.size();
    if (n == 0) throw ContractViolation("convergence", "order_limsup_liminf", "empty net");
    std::size_t tail = min_tail.value_or(std::max<std::size_t>(2, (n + 9) / 10));
    tail = std::clamp<std::size_t>(tail, 1, n);

    LimsupLiminf r;
    r.bounded = true;
    for (const auto& e : net.entries()) r.bounded = r.bounded && e.value.is_finite();

    RieszValue suffix_max = net[n - 1].value;
    RieszValue suffix_min = net[n - 1].value;
    std::optional<RieszValue> limsup, liminf;
    for (std::size_t k = n; k-- > 0;) {
        suffix_max = join(suffix_max, net[k].value);
        suffix_min = meet(suffix_min, net[k].value);
        if (n - k >= tail) {
            limsup = limsup ? meet(*limsup, suffix_max) : suffix_max;
            liminf = liminf ? join(*liminf, suffix_min) : suffix_min;
        }
    }
    r.limsup = *limsup;
    r.liminf = *liminf;
    return r;
}

}  // namespace ordint
