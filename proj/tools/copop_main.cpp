// Command line driver: parses a JSON run configuration and dispatches the
// requested diagnostic, writing JSON and CSV artifacts.
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "copop/runner.hpp"

namespace {

struct CliArgs {
    std::string config;
    copop::RunOptions opt;
};

void attach_common(CLI::App* cmd, CliArgs& args, bool with_normalize) {
    cmd->add_option("--config", args.config, "path to the JSON run configuration")->required();
    cmd->add_option("--out", args.opt.out_dir, "output directory (overrides the config)");
    cmd->add_option("--radial-nodes", args.opt.radial_nodes, "radial quadrature nodes");
    cmd->add_option("--angular-nodes", args.opt.angular_nodes, "angular quadrature nodes");
    cmd->add_option("--rseq", args.opt.r_sequence, "increasing truncation radii, e.g. 0.9,0.99,0.999")
        ->delimiter(',');
    cmd->add_option("--p", args.opt.p_list, "Schatten exponents, e.g. 1,2,4")->delimiter(',');
    cmd->add_option("--delta", args.opt.delta, "test-function exponent override");
    if (with_normalize)
        cmd->add_flag("--normalize-origin", args.opt.normalize_origin,
                      "probe sigma_{phi(0)} composed with phi");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composition operator diagnostics on weighted Hilbert spaces"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"admissible", "weight admissibility and dyadic ratio report"},
        {"moments", "moment table export"},
        {"counting", "counting function field over a polar grid"},
        {"verify-cov", "two-sided change-of-variables check"},
        {"hs", "Hilbert-Schmidt norm by basis and integral routes"},
        {"essnorm", "essential norm profile and compactness verdict"},
        {"schatten", "Schatten-membership integrals"},
        {"closed-range", "closed range probing over a test family"},
        {"matrix", "truncated operator matrix and singular values"},
        {"all", "every report in dependency order plus a summary"},
    };

    CliArgs args;
    for (const auto& [name, desc] : subs) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        attach_common(cmd, args, name == "closed-range" || name == "all");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();
    return copop::run_subcommand(sub, args.config, args.opt);
}
