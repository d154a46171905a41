#pragma once

#include <string>
#include <vector>

#include "ab/scenario.hpp"

namespace ab::cli {

enum class Command {
    figure2,
    figure3a,
    figure3b,
    slope_profile,
    force,
    force_scan,
    converge,
    infer_kappa,
    periodicity,
};

const char* command_name(Command c);

// Parsed and validated run description.  Angles are radians, energies are
// absolute in natural units (config values may use the `pi` and `k2`
// suffixes; `k2` means multiples of k^2).
struct RunConfig {
    Command command = Command::force;
    CylinderScenario scenario;
    bool ideal_mode = false; // V0 = inf; kappa drives the model
    double kappa = 0.0;

    double phi = 0.0;                  // fixed evaluation angle
    std::vector<double> angles_list;   // figure3b / infer-kappa angles
    int angle_points = 256;            // profile grid size
    double r_min = 0.9;                // in units of R
    double r_max = 1.5;
    int r_points = 121;
    std::vector<double> ladder;        // barrier heights, increasing
    int quadrature_points = 512;
    std::vector<double> kappas;        // figure3a curves
    int kappa_points = 101;            // figure3b kappa grid
    std::vector<double> kR_list;       // force-scan
    std::vector<double> alpha_list;    // force-scan
    std::vector<int> offsets;          // periodicity
    double alpha = 0.0;                // periodicity
    std::string observable = "slope";  // converge: slope | force
    std::string output_path = "out.csv";

    std::string config_text; // raw text, hashed into the provenance header
};

// Parses the flat key = value document (sections [scenario] [grid]
// [output], '#' comments).  ParseError carries line/column; ValidationError
// names the offending field.
RunConfig parse_config(const std::string& text, Command command);

// Runs the command and writes its CSV artifact.  Partial output is removed
// on failure.
void execute(const RunConfig& config);

// FNV-1a 64-bit, hex; used for the config provenance line.
std::string fnv1a_hex(const std::string& text);

} // namespace ab::cli
