#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heatsharp/cli.hpp"

using Catch::Matchers::ContainsSubstring;

namespace {

struct CliResult {
    int status;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = heatsharp::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

const std::string kGaussianSpec = R"({"kind":"gaussian","a":1,"mu":0,"tau":1})";
const std::string kBoxSpec = R"({"kind":"indicator","lo":-1,"hi":1})";
const std::string kMatchedSpec = R"({"kind":"gaussian_power","t":1,"beta":1})";

} // namespace

TEST_CASE("constants subcommand prints the constant block") {
    const CliResult r = run_cli({"constants", "--p", "4/3", "--q", "4/3"});
    CHECK(r.status == 0);
    CHECK(r.err.empty());
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"sharp_constants\""));
    CHECK_THAT(r.out, ContainsSubstring("\"r\":\"2\""));
    CHECK_THAT(r.out, ContainsSubstring("\"heat_constant\":0.574031593072223"));
    CHECK_THAT(r.out, ContainsSubstring("\"decay_exponent\":0.125"));
    CHECK_THAT(r.out, ContainsSubstring("\"extremal_beta\":{\"kind\":\"finite\",\"value\":1}"));

    const CliResult endpoint = run_cli({"constants", "--p", "2", "--q", "2"});
    CHECK(endpoint.status == 0);
    CHECK_THAT(endpoint.out, ContainsSubstring("\"r\":\"inf\""));
    CHECK_THAT(endpoint.out, ContainsSubstring("\"young_constant\":1"));
}

TEST_CASE("constants subcommand writes to a file on request") {
    const std::string path = "/tmp/heatsharp_cli_constants.json";
    const CliResult r = run_cli({"constants", "--p", "2", "--q", "2", "--output", path});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK_THAT(buf.str(), ContainsSubstring("\"name\":\"sharp_constants\""));
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("verify-equality reports tangency at the extremal power") {
    const CliResult r = run_cli({"verify-equality", "--p", "4/3", "--q", "4/3"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));
    CHECK_THAT(r.out, ContainsSubstring("\"beta_star\":\"1\""));

    const CliResult limit = run_cli({"verify-equality", "--p", "1", "--q", "2"});
    CHECK(limit.status == 0);
    CHECK_THAT(limit.out, ContainsSubstring("\"beta_kind\":\"infinite_limit\""));
    CHECK_THAT(limit.out, ContainsSubstring("\"verdict\":\"informational\""));

    CHECK(run_cli({"verify-equality", "--p", "2", "--q", "2", "--points", "4"}).status == 2);
    CHECK(run_cli({"verify-equality", "--p", "2", "--q", "2", "--span", "0.5"}).status == 2);
}

TEST_CASE("evolve emits a csv grid") {
    const CliResult r = run_cli({"evolve", "--spec", kBoxSpec, "--t", "0.09", "--x-lo", "-8",
                                 "--x-hi", "8", "--n", "1601"});
    CHECK(r.status == 0);
    CHECK(r.err.empty());
    CHECK(r.out.rfind("x,value\n", 0) == 0);
    CHECK(count_lines(r.out) == 1602);

    const CliResult fft = run_cli({"evolve", "--spec", kBoxSpec, "--t", "0.09", "--x-lo", "-8",
                                   "--x-hi", "8", "--n", "1601", "--fft"});
    CHECK(fft.status == 0);
    CHECK(count_lines(fft.out) == 1602);
}

TEST_CASE("evolve emits json when asked") {
    const CliResult r = run_cli({"evolve", "--spec", kBoxSpec, "--t", "0.09", "--x-lo", "-8",
                                 "--x-hi", "8", "--n", "1601", "--format", "json"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"n\":1601"));
    CHECK_THAT(r.out, ContainsSubstring("\"truncation_warning\":false"));
    CHECK_THAT(r.out, ContainsSubstring("\"samples\":["));
}

TEST_CASE("evolve warns when the kernel outruns the grid") {
    const CliResult r = run_cli({"evolve", "--spec", kBoxSpec, "--t", "10", "--x-lo", "-2",
                                 "--x-hi", "2", "--n", "401"});
    CHECK(r.status == 0);
    CHECK_THAT(r.err, ContainsSubstring("warning"));
}

TEST_CASE("evolve rejects bad invocations") {
    CHECK(run_cli({"evolve", "--spec", kBoxSpec, "--t", "1", "--x-lo", "-2"}).status == 2);
    CHECK(run_cli({"evolve", "--spec", kBoxSpec, "--t", "1", "--format", "yaml"}).status == 2);
    CHECK(run_cli({"evolve", "--spec", "not json", "--t", "1"}).status == 2);
    CHECK(run_cli({"evolve", "--spec", "@/tmp/heatsharp_no_such_spec.json", "--t", "1"}).status ==
          2);
}

TEST_CASE("evolve reads a spec from a file") {
    const std::string path = "/tmp/heatsharp_cli_spec.json";
    {
        std::ofstream f(path);
        f << kGaussianSpec;
    }
    const CliResult r = run_cli({"evolve", "--spec", "@" + path, "--t", "0.25", "--x-lo", "-10",
                                 "--x-hi", "10", "--n", "501"});
    CHECK(r.status == 0);
    CHECK(r.out.rfind("x,value\n", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("sharpness passes the matched family and flags a broken gate") {
    const CliResult r =
        run_cli({"sharpness", "--p", "2", "--q", "2", "--spec", kMatchedSpec, "--times", "1"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"path\":\"closed_form\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));

    const CliResult broken = run_cli({"sharpness", "--p", "2", "--q", "2", "--spec", kMatchedSpec,
                                      "--times", "1", "--tolerance", "-0.5"});
    CHECK(broken.status == 1);
    CHECK_THAT(broken.out, ContainsSubstring("\"verdict\":\"fail\""));
}

TEST_CASE("sharpness runs the grid route on a sampled box") {
    const CliResult r =
        run_cli({"sharpness", "--p", "4/3", "--q", "4/3", "--spec", kBoxSpec, "--times", "0.5",
                 "--path", "grid", "--x-lo", "-20", "--x-hi", "20", "--n", "2001"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"path\":\"quadrature\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));
}

TEST_CASE("sharpness distinguishes usage errors from computation errors") {
    // Inadmissible pair: rejected by the computation, not the parser.
    const CliResult triple =
        run_cli({"sharpness", "--p", "3", "--q", "3", "--spec", kBoxSpec, "--times", "1"});
    CHECK(triple.status == 1);
    CHECK_THAT(triple.err, ContainsSubstring("error:"));

    CHECK(run_cli({"sharpness", "--p", "2", "--q", "2", "--spec", kBoxSpec, "--times",
                   "0.1,abc"})
              .status == 2);
    CHECK(run_cli({"sharpness", "--p", "2", "--q", "2", "--spec", kBoxSpec, "--times", "1",
                   "--path", "sideways"})
              .status == 2);
    CHECK(run_cli({"sharpness", "--p", "0.5", "--q", "2", "--spec", kBoxSpec, "--times", "1"})
              .status == 2);
}

TEST_CASE("decay-fit defaults to the extremal family") {
    const CliResult r = run_cli({"decay-fit", "--p", "4/3", "--q", "4/3"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"mode\":\"extremal_family\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));

    const CliResult fixed =
        run_cli({"decay-fit", "--p", "4/3", "--q", "4/3", "--spec", kGaussianSpec});
    CHECK(fixed.status == 0);
    CHECK_THAT(fixed.out, ContainsSubstring("\"mode\":\"fixed_input\""));
    CHECK_THAT(fixed.out, ContainsSubstring("\"verdict\":\"informational\""));
}

TEST_CASE("blowup reports the exact growth exponent") {
    const CliResult r = run_cli({"blowup", "--p", "4/3", "--q", "4/3", "--gamma", "0.5"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"blowup_ratio\""));
    CHECK_THAT(r.out, ContainsSubstring("\"expected_slope\":\"0.375\""));

    const CliResult bad = run_cli({"blowup", "--p", "2", "--q", "2", "--gamma", "-1"});
    CHECK(bad.status == 1);
    CHECK_THAT(bad.err, ContainsSubstring("error:"));
}

TEST_CASE("counterexample norms mode runs with defaults") {
    const CliResult r = run_cli({"counterexample", "--p", "2"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"counterexample_norms\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));

    // s >= p is a computation-level rejection.
    CHECK(run_cli({"counterexample", "--p", "3/2", "--s", "2"}).status == 1);
    CHECK(run_cli({"counterexample", "--p", "2", "--mode", "upside-down"}).status == 2);
}

TEST_CASE("counterexample lower-bound mode audits the evolved witness") {
    const CliResult r = run_cli({"counterexample", "--mode", "lower-bound", "--p", "2", "--t",
                                 "0.25", "--x", "5,10", "--dx", "0.02"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"counterexample_lower_bound\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));
}

TEST_CASE("initial-condition checks convergence order") {
    const CliResult r =
        run_cli({"initial-condition", "--spec", kGaussianSpec, "--p", "2", "--times", "0.1,0.01",
                 "--x-lo", "-15", "--x-hi", "15", "--n", "3001"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"initial_convergence\""));
    CHECK_THAT(r.out, ContainsSubstring("\"verdict\":\"pass\""));

    const CliResult increasing =
        run_cli({"initial-condition", "--spec", kGaussianSpec, "--p", "2", "--times", "0.01,0.1",
                 "--x-lo", "-15", "--x-hi", "15", "--n", "3001"});
    CHECK(increasing.status == 1);
    CHECK_THAT(increasing.err, ContainsSubstring("error:"));
}

TEST_CASE("pde-residual prints the discrete heat defect") {
    const CliResult r = run_cli({"pde-residual", "--spec",
                                 R"({"kind":"gaussian","a":0.28209479177387814,"mu":0,"tau":1})",
                                 "--t", "1", "--x-lo", "-1", "--x-hi", "1", "--dx", "0.02"});
    CHECK(r.status == 0);
    CHECK_THAT(r.out, ContainsSubstring("\"name\":\"pde_residual\""));
    CHECK_THAT(r.out, ContainsSubstring("\"residual\":"));
}

TEST_CASE("top-level usage errors exit with status two") {
    CHECK(run_cli({}).status == 2);
    CHECK(run_cli({"frobnicate"}).status == 2);
    CHECK(run_cli({"constants", "--p", "2"}).status == 2);

    const CliResult help = run_cli({"--help"});
    CHECK(help.status == 0);
    CHECK_THAT(help.out, ContainsSubstring("Usage"));
}
