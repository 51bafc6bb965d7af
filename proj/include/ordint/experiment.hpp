#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "ordint/dsl.hpp"
#include "ordint/errors.hpp"
#include "ordint/integrators.hpp"
#include "ordint/partition.hpp"
#include "ordint/sets.hpp"

namespace ordint {

/// One experiment, as read from an INI file.
///
///   [space]       ground, target, dimension
///   [function]    expr
///   [measure]     spec
///   [integrator]  name, tolerance, tags, seed, chain, variant, depth,
///                 max_steps, start_step, window, first_level, levels,
///                 stream, gauge
///   [output]      trace, report
struct ExperimentConfig {
    std::string name = "experiment";
    std::string ground = "[0, 1)";
    std::string target;  ///< empty: the ground
    std::size_t dimension = 0;  ///< 0: whatever the function has
    std::string function;
    std::string measure = "length";

    std::string integrator = "net_riemann";
    double tolerance = 1e-6;
    std::string tags = "midpoint";
    std::uint64_t seed = 0;
    std::string chain = "dyadic";
    std::string variant = "per-set";
    std::size_t depth = 40;
    std::size_t max_steps = 24;
    std::size_t start_step = 0;
    std::size_t window = 4;
    std::size_t first_level = 6;
    std::size_t levels = 12;
    std::string stream = "mesh_equalizing";
    double gauge = 0.0;  ///< Henstock radius at step 0 (0: half the target length)

    std::string trace = "trace.csv";
    std::string report = "report.json";
};

namespace detail {

template <class T>
T ini_get(const boost::property_tree::ptree& pt, const std::string& key, T fallback) {
    if (!pt.get_child_optional(key)) return fallback;
    try {
        return pt.get<T>(key);
    } catch (const boost::property_tree::ptree_bad_data&) {
        throw ContractViolation("harness-cli", "load_config", "bad value for " + key);
    }
}

inline bool known(const std::string& v, std::initializer_list<const char*> options) {
    for (const char* o : options)
        if (v == o) return true;
    return false;
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& what) { throw ContractViolation("harness-cli", "validate", what); };
    if (!(c.tolerance > 0.0)) fail("tolerance must be positive");
    if (c.function.empty()) fail("missing [function] expr");
    if (!detail::known(c.integrator, {"net_riemann", "s_star", "sion", "henstock", "pavlakos", "choquet"}))
        fail("unknown integrator '" + c.integrator + "'");
    if (!detail::known(c.chain, {"dyadic", "graded"})) fail("unknown chain '" + c.chain + "'");
    if (!detail::known(c.variant, {"indicator", "per-set"})) fail("unknown variant '" + c.variant + "'");
    if (!detail::known(c.stream, {"mesh_equalizing", "uniform_halving"})) fail("unknown stream '" + c.stream + "'");
    if (c.window == 0) fail("window must be positive");
}

inline ExperimentConfig parse_config(std::istream& in, std::string name = "experiment") {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw StructuralError("harness-cli", "load_config", e.message() + " at line " + std::to_string(e.line()));
    }
    ExperimentConfig c;
    c.name = std::move(name);
    c.ground = detail::ini_get(pt, "space.ground", c.ground);
    c.target = detail::ini_get(pt, "space.target", c.target);
    c.dimension = detail::ini_get(pt, "space.dimension", c.dimension);
    c.function = detail::ini_get(pt, "function.expr", c.function);
    c.measure = detail::ini_get(pt, "measure.spec", c.measure);
    c.integrator = detail::ini_get(pt, "integrator.name", c.integrator);
    c.tolerance = detail::ini_get(pt, "integrator.tolerance", c.tolerance);
    c.tags = detail::ini_get(pt, "integrator.tags", c.tags);
    c.seed = detail::ini_get(pt, "integrator.seed", c.seed);
    c.chain = detail::ini_get(pt, "integrator.chain", c.chain);
    c.variant = detail::ini_get(pt, "integrator.variant", c.variant);
    c.depth = detail::ini_get(pt, "integrator.depth", c.depth);
    c.max_steps = detail::ini_get(pt, "integrator.max_steps", c.max_steps);
    c.start_step = detail::ini_get(pt, "integrator.start_step", c.start_step);
    c.window = detail::ini_get(pt, "integrator.window", c.window);
    c.first_level = detail::ini_get(pt, "integrator.first_level", c.first_level);
    c.levels = detail::ini_get(pt, "integrator.levels", c.levels);
    c.stream = detail::ini_get(pt, "integrator.stream", c.stream);
    c.gauge = detail::ini_get(pt, "integrator.gauge", c.gauge);
    c.trace = detail::ini_get(pt, "output.trace", c.trace);
    c.report = detail::ini_get(pt, "output.report", c.report);
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("harness-cli", "load_config", "cannot open " + path.string());
    return parse_config(in, path.stem().string());
}

/// "[0, 1)", "[0, 0.25) u [0.5, 1]", "finite(16)", "all", "{1, 3, 5}".
inline PavedSpace parse_ground(const std::string& text) {
    const dsl::Node n = dsl::parse_spec(text.find('(') == 0 || text.find('[') == 0 ? "indicator(" + text + ")" : text);
    if (n.kind == dsl::Node::Kind::call && n.name == "finite" && n.args.size() == 1 &&
        n.args[0].kind == dsl::Node::Kind::number && n.args[0].value >= 1)
        return PavedSpace::finite(static_cast<std::size_t>(n.args[0].value));
    if (n.kind == dsl::Node::Kind::call && n.name == "indicator" && n.args.size() == 1) {
        const Piece& p = n.args[0].piece;
        if (!(p.lo_closed && !p.hi_closed))
            throw StructuralError("harness-cli", "parse_ground", "the ground must be a half-open interval [a, b)");
        return PavedSpace::interval(p.lo, p.hi);
    }
    throw StructuralError("harness-cli", "parse_ground", "expected [a, b) or finite(n), got '" + text + "'");
}

inline PavingSet parse_target(const std::string& text, const PavedSpace& space) {
    if (text.empty() || text == "all") return space.ground();
    if (!space.is_interval()) {
        if (text.front() != '{' || text.back() != '}')
            throw StructuralError("harness-cli", "parse_target", "finite targets are written {i, j, ...}");
        std::vector<std::uint32_t> elems;
        std::stringstream ss(text.substr(1, text.size() - 2));
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (tok.find_first_not_of(" \t") != std::string::npos) elems.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        const PavingSet s(FiniteSubset(space.ground().finite().universe(), std::move(elems)));
        space.require(s, "parse_target");
        return s;
    }
    std::string joined = text;
    for (std::size_t p = joined.find(" u "); p != std::string::npos; p = joined.find(" u ")) joined.replace(p, 3, ", ");
    const dsl::Node n = dsl::parse_spec("indicator(" + joined + ")");
    IntervalSet::Pieces ps;
    for (const auto& a : n.args) ps.push_back(a.piece);
    const PavingSet s(IntervalSet::from_pieces(std::move(ps)));
    space.require(s, "parse_target");
    return s;
}

inline std::vector<TagPolicy> parse_tags(const std::string& text, std::uint64_t seed) {
    std::vector<TagPolicy> out;
    std::stringstream ss(text);
    std::string tok;
    std::uint64_t k = 0;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok == "left")
            out.push_back(TagPolicy::left());
        else if (tok == "midpoint")
            out.push_back(TagPolicy::midpoint());
        else if (tok == "right")
            out.push_back(TagPolicy::right());
        else if (tok == "random")
            out.push_back(TagPolicy::random(seed + k++));
        else if (tok == "standard") {
            auto fam = TagPolicy::standard_family(seed, {});
            out.insert(out.end(), fam.begin(), fam.end());
        } else
            throw ContractViolation("harness-cli", "parse_tags", "unknown tag policy '" + tok + "'");
    }
    if (out.empty()) throw ContractViolation("harness-cli", "parse_tags", "no tag policy given");
    return out;
}

/// Trace as CSV: step, n_cells, v_0..v_{d-1}, oscillation, bound (sup norm),
/// all floating values at 17 significant digits.
inline std::string trace_csv(const IntegralReport& r) {
    std::string out = "step,n_cells";
    const std::size_t d = r.value.dim();
    for (std::size_t k = 0; k < d; ++k) out += ",v_" + std::to_string(k);
    out += ",oscillation,bound\n";
    for (const auto& row : r.steps) {
        out += std::to_string(row.step) + "," + std::to_string(row.n_cells);
        for (std::size_t k = 0; k < d; ++k) out += "," + format_number(k < row.value.dim() ? row.value[k] : 0.0);
        out += "," + format_number(row.oscillation) + "," + format_number(row.bound.max_abs()) + "\n";
    }
    return out;
}

inline nlohmann::json coords_json(const RieszValue& v) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t k = 0; k < v.dim(); ++k) a.push_back(v[k]);
    return a;
}

inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::certified: return 0;
        case Verdict::inconclusive: return 2;
        case Verdict::diverged: return 3;
    }
    return 1;
}

struct ExperimentResult {
    IntegralReport report;
    nlohmann::json json;  ///< deterministic: no timing
    std::string csv;
    double wall_seconds = 0.0;
    int exit_code = 1;
};

/// Runs one experiment in memory. Files are written by `write_artifacts`.
inline ExperimentResult run_experiment(const ExperimentConfig& c) {
    validate(c);
    const auto t0 = std::chrono::steady_clock::now();
    const PavedSpace space = parse_ground(c.ground);
    const PavingSet target = parse_target(c.target, space);
    const dsl::MeasureSpec ms = dsl::parse_measure(c.measure);
    const dsl::Node fn = dsl::parse_spec(c.function);
    const IntervalSet domain = space.is_interval()
                                   ? space.ground().intervals()
                                   : IntervalSet::closed(0.0, static_cast<double>(space.ground().finite().universe() - 1));
    IntegrationOptions base;
    base.tol = c.tolerance;
    base.window = c.window;
    base.start_step = c.start_step;
    base.max_steps = c.max_steps;
    base.policies = parse_tags(c.tags, c.seed);

    auto need_measure = [&]() -> const VectorSetFunction& {
        if (!ms.measure)
            throw ContractViolation("harness-cli", "run_experiment", c.integrator + " needs a measure, not a capacity");
        return *ms.measure;
    };

    IntegralReport r;
    if (c.integrator == "pavlakos") {
        if (!space.is_interval() || target.intervals().pieces().size() != 1)
            throw ContractViolation("harness-cli", "run_experiment", "pavlakos needs an interval target");
        const ElementaryFunction e = dsl::compile_elementary(fn, target.inf(), target.sup());
        r = pavlakos_elementary_integral(e, need_measure(), c.depth, c.tolerance, std::nullopt);
    } else {
        const Integrand f = dsl::compile(fn, domain);
        if (c.dimension != 0 && c.dimension != f.dim())
            throw StructuralError("harness-cli", "run_experiment",
                                  "function has dimension " + std::to_string(f.dim()) + ", space declares " +
                                      std::to_string(c.dimension));
        const StreamKind kind =
            c.stream == "uniform_halving" ? StreamKind::uniform_halving : StreamKind::mesh_equalizing;
        const StreamSchedule schedule{kind, c.first_level, c.levels, c.depth};
        if (c.integrator == "net_riemann" || c.integrator == "choquet") {
            NetRiemannOptions o;
            static_cast<IntegrationOptions&>(o) = base;
            o.variant = c.variant == "indicator" ? SubsetVariant::indicator : SubsetVariant::per_set;
            o.chain = c.chain == "graded" ? ChainKind::graded : ChainKind::dyadic;
            if (c.integrator == "net_riemann") {
                r = net_riemann_integral(f, need_measure(), space, target, o);
            } else {
                if (!ms.capacity)
                    throw ContractViolation("harness-cli", "run_experiment", "choquet needs capacity(...)");
                ChoquetOptions co;
                static_cast<NetRiemannOptions&>(co) = o;
                if (c.start_step == 0) co.start_step = ChoquetOptions{}.start_step;
                r = choquet_integral(f, *ms.capacity, target, co);
            }
        } else if (c.integrator == "s_star") {
            SStarOptions o;
            static_cast<IntegrationOptions&>(o) = base;
            o.schedule = schedule;
            o.max_steps = c.levels;
            o.seed = c.seed;
            r = s_star_partition_integral(f, need_measure(), target, o);
        } else if (c.integrator == "sion") {
            SionOptions o;
            static_cast<IntegrationOptions&>(o) = base;
            o.schedule = schedule;
            o.max_steps = c.levels;
            o.truncation = Truncation::first_groups(c.depth);
            r = sion_integral(f, need_measure(), target, o);
        } else {
            if (!space.is_interval())
                throw ContractViolation("harness-cli", "run_experiment", "henstock needs an interval target");
            HenstockOptions o;
            static_cast<IntegrationOptions&>(o) = base;
            o.max_depth = c.depth;
            const double r0 = c.gauge > 0.0 ? c.gauge : 0.5 * target.diameter();
            r = henstock_integral(f, need_measure(), target, [r0](std::size_t k) {
                return Gauge::constant(std::ldexp(r0, -static_cast<int>(k)));
            }, o);
        }
    }

    ExperimentResult out;
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.csv = trace_csv(r);
    out.exit_code = exit_code(r.verdict);
    nlohmann::json j;
    j["name"] = c.name;
    j["integrator"] = r.integrator;
    j["function"] = dsl::print(fn);
    j["measure"] = ms.canonical;
    j["target"] = to_string(target);
    j["value"] = coords_json(r.value);
    j["bound"] = coords_json(r.cauchy_bound);
    j["modulus_bound"] = r.modulus_bound ? coords_json(*r.modulus_bound) : nlohmann::json(nullptr);
    j["verdict"] = to_string(r.verdict);
    j["exact"] = r.exact;
    j["steps"] = r.steps.size();
    j["tolerance"] = c.tolerance;
    j["seed"] = c.seed;
    j["note"] = r.note;
    out.json = std::move(j);
    out.report = std::move(r);
    return out;
}

/// Output directory: ORDINT_OUTPUT_DIR when set, else the working directory.
inline std::filesystem::path output_dir() {
    if (const char* d = std::getenv("ORDINT_OUTPUT_DIR"); d && *d) return d;
    return std::filesystem::current_path();
}

inline std::filesystem::path resolve_output(const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : output_dir() / path;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("harness-cli", "write", "cannot write " + path.string());
    out << text;
    if (!out) throw ResourceError("harness-cli", "write", "write failed for " + path.string());
}

inline void write_artifacts(const ExperimentConfig& c, const ExperimentResult& r) {
    write_text(resolve_output(c.trace), r.csv);
    write_text(resolve_output(c.report), r.json.dump(2) + "\n");
}

}  // namespace ordint
