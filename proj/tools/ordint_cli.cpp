// ordint: run integration experiments and verification suites.
//
//   ordint run <config.ini> [--tol T] [--depth N] [--trace PATH] [--variant indicator|per-set]
//   ordint verify <suite> [--seed N] [--tol T] [--trials N] [--report PATH]
//
// Relative output paths resolve against $ORDINT_OUTPUT_DIR (default: cwd).
// Exit codes: 0 certified/passed, 2 inconclusive, 3 diverged/failed, 1 error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "ordint/experiment.hpp"
#include "ordint/suites.hpp"

namespace {

int run_command(const std::string& path, const std::optional<double>& tol, const std::optional<std::size_t>& depth,
                const std::optional<std::string>& trace, const std::optional<std::string>& variant) {
    ordint::ExperimentConfig c = ordint::load_config(path);
    if (tol) c.tolerance = *tol;
    if (depth) c.depth = *depth;
    if (trace) c.trace = *trace;
    if (variant) c.variant = *variant;
    const ordint::ExperimentResult r = ordint::run_experiment(c);
    ordint::write_artifacts(c, r);
    std::printf("%s: %s value=%s bound=%s steps=%zu wall=%.3fs\n", c.name.c_str(), ordint::to_string(r.report.verdict),
                ordint::to_string(r.report.value).c_str(), ordint::to_string(r.report.cauchy_bound).c_str(),
                r.report.steps.size(), r.wall_seconds);
    if (!r.report.note.empty()) std::printf("  note: %s\n", r.report.note.c_str());
    return r.exit_code;
}

int verify_command(const std::string& suite, std::uint64_t seed, const ordint::SuiteOptions& opt,
                   const std::optional<std::string>& report) {
    const ordint::SuiteReport r = ordint::run_verification_suite(suite, seed, opt);
    for (const auto& e : r.entries)
        std::printf("%-4s %-28s %-34s residual=%.3g bound=%.3g\n", e.check.passed ? "ok" : "FAIL", e.experiment.c_str(),
                    e.check.name.c_str(), e.check.residual, e.check.bound);
    const std::string out = report.value_or("verify-" + suite + ".json");
    ordint::write_text(ordint::resolve_output(out), r.to_json().dump(2) + "\n");
    std::printf("%s: %s (%zu properties)\n", suite.c_str(), r.all_passed() ? "passed" : "FAILED", r.entries.size());
    return r.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order-theoretic integration experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment from an INI config");
    std::string config;
    std::optional<double> tol;
    std::optional<std::size_t> depth;
    std::optional<std::string> trace, variant;
    run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--tol", tol, "Override [integrator] tolerance")->check(CLI::PositiveNumber);
    run->add_option("--depth", depth, "Override [integrator] depth");
    run->add_option("--trace", trace, "Trace CSV path");
    run->add_option("--variant", variant, "Subset variant")->check(CLI::IsMember({"indicator", "per-set"}));

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::uint64_t seed = 42;
    ordint::SuiteOptions sopt;
    std::optional<std::string> report;
    verify->add_option("suite", suite, "laws, uniform, equivalence, nullsets, summability, choquet or all")->required();
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--tol", sopt.tol, "Tolerance override")->check(CLI::NonNegativeNumber);
    verify->add_option("--trials", sopt.trials, "Trial count override");
    verify->add_option("--report", report, "Report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*run) return run_command(config, tol, depth, trace, variant);
        return verify_command(suite, seed, sopt, report);
    } catch (const ordint::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
}
