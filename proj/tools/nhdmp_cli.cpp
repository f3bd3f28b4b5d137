// nhdmp: gap tables, minorization certificates and QSP criteria from the
// command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nhdmp/cli.hpp"

namespace {

using nhdmp::cli::RunConfig;

void add_source(CLI::App* cmd, RunConfig& c, const std::string& builtins) {
    cmd->add_option("--input", c.input, "JSON input file");
    cmd->add_option("--builtin", c.builtin, "builtin family: " + builtins);
    cmd->add_option("--p", c.p, "block example parameter p in (0,1)");
    cmd->add_option("--n-states", c.n_states, "truncation size for drift_chain / identity");
    cmd->add_option("--poisson-rate", c.poisson_rate, "drift_chain reference measure rate (<= 0: uniform)");
}

} // namespace

int main(int argc, char** argv) {
    if (!nhdmp::apply_tolerance_from_env()) {
        std::cerr << "error: " << nhdmp::kToleranceEnv << " must be a number in (0, 1e-2)\n";
        return nhdmp::cli::kUsage;
    }

    CLI::App app{"Ergodicity laboratory for nonhomogeneous Markov and quadratic stochastic processes"};
    app.require_subcommand(1);
    RunConfig c;
    std::string horizons, target, set;

    auto* gaps = app.add_subcommand("gaps", "finite-horizon ergodicity gaps");
    add_source(gaps, c, "block | drift_chain | identity");
    gaps->add_option("--notion", c.notion, "weak | l1_weak | strong | l1_strong");
    gaps->add_option("--k", c.k, "start time");
    gaps->add_option("--horizons", horizons, "end times: a..b or a,b,c")->required();
    gaps->add_option("--target", target, "comma-separated limit measure for strong notions");
    gaps->add_option("--output", c.output, "table file (stdout when omitted)");
    gaps->add_option("--format", c.format, "csv | json");

    auto* certify = app.add_subcommand("certify", "extract certificates and the contraction bound");
    add_source(certify, c, "block | drift_chain | identity");
    certify->add_option("--k", c.k, "first certificate time");
    certify->add_option("--k-max", c.k_max, "last step covered by certificates");
    certify->add_option("--epsilon", c.epsilon, "certify once the bound drops below this");
    certify->add_option("--window", c.window, "max steps per certificate");
    certify->add_option("--tau", c.tau, "accept the first window whose mass reaches tau");
    certify->add_option("--cert-output", c.cert_output, "certificate bundle (JSON)");
    certify->add_option("--bound-output", c.bound_output, "bound report (CSV)");

    auto* qsp = app.add_subcommand("qsp", "quadratic stochastic process gaps and set criterion");
    add_source(qsp, c, "constant | mixing");
    qsp->add_option("--horizons", horizons, "end times: a..b or a,b,c (from 1)")->required();
    qsp->add_option("--epsilon", c.epsilon, "certify once the bound drops below this");
    qsp->add_option("--set", set, "criterion set A_k used for every k, e.g. 0 or 0,2");
    qsp->add_option("--output", c.output, "table file (stdout when omitted)");
    qsp->add_option("--format", c.format, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : nhdmp::cli::kUsage;
    }

    try {
        c.command = app.get_subcommands().front()->get_name();
        if (!horizons.empty()) c.horizons = nhdmp::cli::parse_horizons(horizons);
        if (!target.empty()) c.target = nhdmp::cli::parse_reals(target);
        if (!set.empty()) c.set = nhdmp::cli::parse_indices(set);
    } catch (const nhdmp::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nhdmp::cli::kUsage;
    }
    return nhdmp::cli::run(c, std::cout, std::cout, std::cerr);
}
