#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ab/analysis.hpp"
#include "ab/cli.hpp"
#include "ab/errors.hpp"
#include "ab/finite.hpp"
#include "ab/force.hpp"
#include "ab/ideal.hpp"
#include "ab/version.hpp"

namespace ab::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed 17-significant-digit formatting: identical configs give byte
// identical CSVs.
std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const RunConfig& cfg) : cfg_(cfg) {}

    void comment(const std::string& line) { head_ << "# " << line << "\n"; }
    void header(const std::string& columns) { body_ << columns << "\n"; }

    template <class... Ts>
    void row(Ts... cells)
    {
        bool first = true;
        ((body_ << (first ? "" : ","), first = false, put(cells)), ...);
        body_ << "\n";
    }

    void note_truncation(int n_max) { n_max_ = std::max(n_max_, n_max); }

    // Atomic-ish publish: write a temp file, rename into place, remove the
    // temp on any failure.
    void write()
    {
        namespace fs = std::filesystem;
        const fs::path target(cfg_.output_path);
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw Error("cannot open output file " + tmp.string());
            out << "# " << kVersionString << "\n";
            out << "# command=" << command_name(cfg_.command) << "\n";
            out << "# config_hash=" << fnv1a_hex(cfg_.config_text) << "\n";
            out << "# n_max=" << n_max_ << "\n";
            out << head_.str() << body_.str();
            if (!out) {
                out.close();
                fs::remove(tmp);
                throw Error("failed while writing " + tmp.string());
            }
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) {
            fs::remove(tmp);
            throw Error("cannot move output into place: " + ec.message());
        }
    }

private:
    void put(double v) { body_ << num(v); }
    void put(int v) { body_ << v; }
    void put(const char* s) { body_ << s; }
    void put(const std::string& s) { body_ << s; }

    const RunConfig& cfg_;
    std::ostringstream head_;
    std::ostringstream body_;
    int n_max_ = 0;
};

std::vector<double> radius_grid(const RunConfig& cfg)
{
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(cfg.r_points));
    for (int i = 0; i < cfg.r_points; ++i)
        radii.push_back(cfg.scenario.radius *
                        (cfg.r_min + (cfg.r_max - cfg.r_min) * i / (cfg.r_points - 1)));
    return radii;
}

// |psi| for the hard-wall model, 0 inside the cylinder.
double ideal_abs_psi(const CylinderScenario& sc, double kappa, double r, double phi)
{
    if (r < sc.radius)
        return 0.0;
    return std::abs(ideal::psi(sc, kappa, r, phi));
}

void run_figure2(const RunConfig& cfg, CsvWriter& csv)
{
    const auto radii = radius_grid(cfg);
    csv.header("V0,r_over_R,abs_psi");
    std::vector<std::pair<double, double>> slope_summary; // (V0, slope)
    for (double V0 : cfg.ladder) {
        CylinderScenario sc = cfg.scenario;
        sc.barrier = V0;
        const finite::FiniteSolution sol(sc, {}, cfg.r_max * sc.radius * 1.001);
        const std::vector<double> phis{cfg.phi};
        const auto grid = sol.psi_polar_grid(radii, phis);
        for (std::size_t i = 0; i < radii.size(); ++i)
            csv.row(V0, radii[i] / sc.radius, std::abs(grid[i][0]));
        slope_summary.emplace_back(V0, sol.slope(cfg.phi));
        csv.note_truncation(sol.truncation().n_max);
    }
    // V -> infinity curve (zero inside the cylinder by construction)
    const double kap = cfg.scenario.alpha();
    for (double r : radii)
        csv.row("inf", r / cfg.scenario.radius,
                ideal_abs_psi(cfg.scenario, kap, r, cfg.phi));
    csv.comment("slope summary at phi=" + num(cfg.phi) + ": V0,slope");
    for (const auto& [V0, s] : slope_summary)
        csv.comment(num(V0) + "," + num(s));
    csv.comment("inf," + num(ideal::slope(cfg.scenario, kap, cfg.phi)));
}

void run_figure3a(const RunConfig& cfg, CsvWriter& csv)
{
    const auto radii = radius_grid(cfg);
    csv.header("kappa,r_over_R,abs_psi");
    for (double kap : cfg.kappas) {
        for (double r : radii)
            csv.row(kap, r / cfg.scenario.radius,
                    ideal_abs_psi(cfg.scenario, kap, r, cfg.phi));
        csv.comment("slope kappa=" + num(kap) + ": " +
                    num(ideal::slope(cfg.scenario, kap, cfg.phi)));
    }
}

void run_figure3b(const RunConfig& cfg, CsvWriter& csv)
{
    csv.header("kappa,phi,slope");
    for (int i = 0; i < cfg.kappa_points; ++i) {
        const double kap = static_cast<double>(i) / cfg.kappa_points;
        const ideal::BoundarySum bs(cfg.scenario, kap);
        for (double phi : cfg.angles_list)
            csv.row(kap, phi, bs.slope(phi));
        csv.note_truncation(bs.truncation().n_max);
    }
}

void run_slope_profile(const RunConfig& cfg, CsvWriter& csv)
{
    csv.header("phi,slope");
    std::vector<double> angles;
    for (int i = 0; i < cfg.angle_points; ++i)
        angles.push_back(2.0 * kPi * i / cfg.angle_points);
    if (cfg.ideal_mode) {
        const auto prof = ideal::slope_profile(cfg.scenario, cfg.kappa, angles);
        for (std::size_t i = 0; i < angles.size(); ++i)
            csv.row(prof.angles[i], prof.slopes[i]);
    } else {
        const finite::FiniteSolution sol(cfg.scenario);
        for (double phi : angles)
            csv.row(phi, sol.slope(phi));
        csv.note_truncation(sol.truncation().n_max);
    }
}

void force_row(CsvWriter& csv, const CylinderScenario& sc, double alpha_or_kappa,
               const force::ForceVector& f)
{
    const auto fa = force::force_asymptotic(alpha_or_kappa, sc.wavenumber, sc.density);
    csv.row(sc.wavenumber * sc.radius, alpha_or_kappa, f.f1, f.f2, fa.f1, fa.f2);
}

void run_force(const RunConfig& cfg, CsvWriter& csv)
{
    csv.header("kR,alpha_or_kappa,f1,f2,f1_asym,f2_asym");
    force::QuadratureSpec quad{cfg.quadrature_points};
    if (cfg.ideal_mode) {
        force_row(csv, cfg.scenario, cfg.kappa,
                  force::force_ideal(cfg.scenario, cfg.kappa, quad));
    } else {
        force_row(csv, cfg.scenario, cfg.scenario.alpha(),
                  force::force_finite(cfg.scenario, quad));
    }
}

void run_force_scan(const RunConfig& cfg, CsvWriter& csv)
{
    csv.header("kR,alpha_or_kappa,f1,f2,f1_asym,f2_asym");
    force::QuadratureSpec quad{cfg.quadrature_points};
    for (double kR : cfg.kR_list) {
        CylinderScenario sc;
        sc.radius = 1.0;
        sc.wavenumber = kR;
        sc.density = cfg.scenario.density;
        for (double a : cfg.alpha_list)
            force_row(csv, sc, a, force::force_ideal(sc, a, quad));
    }
}

void run_converge(const RunConfig& cfg, CsvWriter& csv)
{
    analysis::Observable obs;
    if (cfg.observable == "slope")
        obs = analysis::SlopeObservable{cfg.phi};
    else
        obs = analysis::ForceObservable{};
    const auto rep = analysis::convergence_study(cfg.scenario, cfg.ladder, obs);
    csv.header("V0,observable,extrapolated_limit,fitted_order,reference");
    for (const auto& [V0, v] : rep.ladder)
        csv.row(V0, v, rep.extrapolated_limit, rep.fitted_order, rep.reference);
}

void run_infer_kappa(const RunConfig& cfg, CsvWriter& csv)
{
    // Synthesize noiseless slopes at the configured true kappa, then invert.
    std::vector<std::pair<double, double>> samples;
    const ideal::BoundarySum bs(cfg.scenario, cfg.kappa);
    for (double phi : cfg.angles_list)
        samples.emplace_back(phi, bs.slope(phi));
    csv.note_truncation(bs.truncation().n_max);
    const auto est = analysis::infer_kappa(cfg.scenario, samples);
    csv.header("kappa_true,kappa_hat,residual,angles_used");
    std::string angles;
    for (std::size_t i = 0; i < est.angles_used.size(); ++i)
        angles += (i ? ";" : "") + num(est.angles_used[i]);
    csv.row(cfg.kappa, est.kappa_hat, est.residual, angles);
}

void run_periodicity(const RunConfig& cfg, CsvWriter& csv)
{
    const auto rep =
        analysis::flux_periodicity_check(cfg.scenario, cfg.alpha, cfg.offsets, cfg.phi);
    csv.header("offset,beta,slope,max_defect");
    for (std::size_t i = 0; i < rep.offsets.size(); ++i)
        csv.row(rep.offsets[i], rep.betas[i], rep.slopes[i], rep.max_defect);
}

} // namespace

void execute(const RunConfig& cfg)
{
    CsvWriter csv(cfg);
    switch (cfg.command) {
    case Command::figure2:
        run_figure2(cfg, csv);
        break;
    case Command::figure3a:
        run_figure3a(cfg, csv);
        break;
    case Command::figure3b:
        run_figure3b(cfg, csv);
        break;
    case Command::slope_profile:
        run_slope_profile(cfg, csv);
        break;
    case Command::force:
        run_force(cfg, csv);
        break;
    case Command::force_scan:
        run_force_scan(cfg, csv);
        break;
    case Command::converge:
        run_converge(cfg, csv);
        break;
    case Command::infer_kappa:
        run_infer_kappa(cfg, csv);
        break;
    case Command::periodicity:
        run_periodicity(cfg, csv);
        break;
    }
    csv.write();
}

} // namespace ab::cli
