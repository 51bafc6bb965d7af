#include <gtest/gtest.h>

#include <sstream>

#include "ordint/experiment.hpp"

using namespace ordint;

namespace {
ExperimentConfig from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "t");
}
}  // namespace

TEST(Config, ParsesSections) {
    const auto c = from_text(
        "[space]\nground = [0, 1)\n[function]\nexpr = x^2\n[integrator]\nname = s_star\ntolerance = 1e-4\n"
        "tags = left, random\nseed = 5\n[output]\ntrace = a.csv\n");
    EXPECT_EQ(c.function, "x^2");
    EXPECT_EQ(c.integrator, "s_star");
    EXPECT_EQ(c.tolerance, 1e-4);
    EXPECT_EQ(c.tags, "left, random");
    EXPECT_EQ(c.seed, 5u);
    EXPECT_EQ(c.trace, "a.csv");
    EXPECT_EQ(c.report, "report.json");
}

TEST(Config, BadValuesAreReported) {
    EXPECT_THROW(from_text("[integrator]\ntolerance = abc\n"), ContractViolation);
    EXPECT_THROW(from_text("[integrator\n"), StructuralError);
    auto c = from_text("[function]\nexpr = x\n[integrator]\nname = simpson\n");
    EXPECT_THROW(run_experiment(c), ContractViolation);
    c = from_text("[integrator]\nname = net_riemann\n");
    EXPECT_THROW(run_experiment(c), ContractViolation);
}

TEST(Experiment, IdentityCertified) {
    auto c = from_text("[function]\nexpr = x\n[integrator]\ntolerance = 1e-6\n");
    const auto r = run_experiment(c);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NEAR(r.report.value.as_scalar(), 0.5, 1e-6);
    EXPECT_EQ(r.json.at("verdict"), "certified");
}

TEST(Experiment, DyadicIndicatorIsNotCertified) {
    auto c = from_text(
        "[function]\nexpr = dyadic_rational()\n[integrator]\ntags = random, random, random\nseed = 3\nmax_steps = 14\n");
    const auto r = run_experiment(c);
    EXPECT_TRUE(r.exit_code == 2 || r.exit_code == 3) << r.exit_code;
}

TEST(Experiment, MalformedExpression) {
    auto c = from_text("[function]\nexpr = x + * 2\n");
    try {
        run_experiment(c);
        FAIL() << "expected a parse error";
    } catch (const dsl::ParseError& e) {
        EXPECT_EQ(e.position(), 4u);
    }
}

TEST(Experiment, DeterministicArtifacts) {
    const std::string text =
        "[function]\nexpr = x^2 + sin(2*x)\n[integrator]\nname = henstock\ntolerance = 1e-4\n";
    const auto a = run_experiment(from_text(text));
    const auto b = run_experiment(from_text(text));
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(a.json.dump(2), b.json.dump(2));
    EXPECT_EQ(a.csv.substr(0, a.csv.find('\n')), "step,n_cells,v_0,oscillation,bound");
}

TEST(Experiment, CountingTarget) {
    auto c = from_text(
        "[space]\nground = finite(8)\ntarget = {1, 3, 4}\n[function]\nexpr = x^2\n[measure]\nspec = counting\n");
    const auto r = run_experiment(c);
    EXPECT_EQ(r.report.value.as_scalar(), 26.0);
    EXPECT_EQ(r.exit_code, 0);
}

TEST(Experiment, ChoquetNeedsCapacity) {
    auto c = from_text("[function]\nexpr = x\n[measure]\nspec = capacity(pow(length, 2))\n[integrator]\nname = choquet\n");
    const auto r = run_experiment(c);
    EXPECT_NEAR(r.report.value.as_scalar(), 1.0 / 3.0, 1e-6);
    c.integrator = "net_riemann";
    EXPECT_THROW(run_experiment(c), ContractViolation);
}

TEST(Experiment, ExitCodes) {
    EXPECT_EQ(exit_code(Verdict::certified), 0);
    EXPECT_EQ(exit_code(Verdict::inconclusive), 2);
    EXPECT_EQ(exit_code(Verdict::diverged), 3);
}

TEST(Output, ResolvesAgainstEnvironment) {
    setenv("ORDINT_OUTPUT_DIR", "/tmp/ordint-out", 1);
    EXPECT_EQ(resolve_output("r.json"), std::filesystem::path("/tmp/ordint-out/r.json"));
    EXPECT_EQ(resolve_output("/abs/r.json"), std::filesystem::path("/abs/r.json"));
    unsetenv("ORDINT_OUTPUT_DIR");
}
