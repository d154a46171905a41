// ab-forces: scattering wavefunctions, boundary slopes, and forces for a
// charged beam hitting a magnetic-flux-carrying cylinder.  Each subcommand
// reads a flat key = value config and writes one CSV artifact.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ab/cli.hpp"
#include "ab/errors.hpp"
#include "ab/version.hpp"

namespace {

struct SubArgs {
    std::string config_path;
    std::string out_path;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ab::Error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Aharonov-Bohm cylinder scattering: slopes and forces"};
    app.set_version_flag("--version", ab::kVersionString);
    app.require_subcommand(1);

    struct Entry {
        ab::cli::Command cmd;
        const char* help;
    };
    const Entry entries[] = {
        {ab::cli::Command::figure2, "wavefunction vs r for a barrier ladder (fixed phi)"},
        {ab::cli::Command::figure3a, "hard-wall |psi| vs r for a list of kappa values"},
        {ab::cli::Command::figure3b, "boundary slope vs kappa at the configured angles"},
        {ab::cli::Command::slope_profile, "boundary slope over a full angle grid"},
        {ab::cli::Command::force, "force for one scenario (ideal or finite barrier)"},
        {ab::cli::Command::force_scan, "ideal force over a (kR, alpha) grid"},
        {ab::cli::Command::converge, "V0-ladder convergence study of slope or force"},
        {ab::cli::Command::infer_kappa, "round-trip kappa determination from two angles"},
        {ab::cli::Command::periodicity, "flux-periodicity defect across integer offsets"},
    };

    std::vector<std::pair<ab::cli::Command, SubArgs>> requested;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(ab::cli::command_name(e.cmd), e.help);
        auto args = std::make_shared<SubArgs>();
        sub->add_option("--config", args->config_path, "path to the key = value config")
            ->required();
        sub->add_option("--out", args->out_path, "override the [output] path");
        sub->callback([&requested, cmd = e.cmd, args] { requested.emplace_back(cmd, *args); });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto& [cmd, args] = requested.at(0);
        ab::cli::RunConfig cfg = ab::cli::parse_config(slurp(args.config_path), cmd);
        if (!args.out_path.empty())
            cfg.output_path = args.out_path;
        ab::cli::execute(cfg);
    } catch (const std::exception& e) {
        std::cerr << "ab-forces: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
