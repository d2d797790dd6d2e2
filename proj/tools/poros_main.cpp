/// @file poros_main.cpp
/// @brief Command-line front end: per-module runs plus the full
///        convergence study, with JSON/CSV artifacts per subcommand.

#include "poros/errors.hpp"
#include "poros/harness.hpp"
#include "poros/operators.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using poros::ExperimentConfig;
using ojson = nlohmann::ordered_json;

struct Options {
    std::string config_path;
    std::string out_dir;
    int resolution = 0;   ///< overrides the subcommand's natural resolution
    double tol = 0.0;     ///< overrides solver.residual_tol
    double eps = 0.0;     ///< overrides the epsilon used by single-run commands
};

ExperimentConfig resolve_config(const Options& opt) {
    ExperimentConfig cfg =
        opt.config_path.empty() ? poros::sample_config() : poros::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (opt.tol > 0.0) cfg.solver.residual_tol = opt.tol;
    if (opt.eps > 0.0) cfg.epsilons = {opt.eps};
    return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void write_field_csv(const ExperimentConfig& cfg, const std::string& name,
                     const std::vector<std::array<double, 3>>& rows) {
    std::ostringstream os;
    os << std::setprecision(17) << "x1,x2,value\n";
    for (const auto& r : rows) os << r[0] << "," << r[1] << "," << r[2] << "\n";
    poros::write_text_file(out_path(cfg, name), os.str());
}

void dump_pressure(const ExperimentConfig& cfg, const std::string& name,
                   const poros::StaggeredGrid& g, const poros::ScalarField& p) {
    std::vector<std::array<double, 3>> rows;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (!g.cell_solid(i, j)) rows.push_back({g.cell_x(i), g.cell_y(j), p(i, j)});
    write_field_csv(cfg, name, rows);
}

void dump_velocity(const ExperimentConfig& cfg, const std::string& stem,
                   const poros::StaggeredGrid& g, const poros::VectorField& v) {
    std::vector<std::array<double, 3>> rows;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            rows.push_back({g.uface_x(i), g.uface_y(j), v.u(i, j)});
    write_field_csv(cfg, stem + "_u.csv", rows);
    rows.clear();
    for (int j = 0; j < g.n_v_rows(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            rows.push_back({g.vface_x(i), g.vface_y(j), v.v(i, j)});
    write_field_csv(cfg, stem + "_v.csv", rows);
}

int run_constants_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    if (opt.resolution > 0) {
        cfg.bl_resolution = opt.resolution;
        cfg.cell_resolution = std::max(opt.resolution, 32);
    }
    poros::ConstantsReport rep = poros::run_constants(cfg);
    const std::string json = poros::constants_to_json(rep);
    poros::write_text_file(out_path(cfg, "constants.json"), json);
    std::cout << json;
    return 0;
}

int run_permeability_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const int res = opt.resolution > 0 ? opt.resolution : cfg.cell_resolution;
    poros::PermeabilityTensor K = poros::compute_permeability(cfg.cell, res);
    ojson j;
    j["K"] = {{K.K[0][0], K.K[0][1]}, {K.K[1][0], K.K[1][1]}};
    j["K_energy"] = {{K.K_energy[0][0], K.K_energy[0][1]},
                     {K.K_energy[1][0], K.K_energy[1][1]}};
    j["eigenvalues"] = {K.eigenvalues[0], K.eigenvalues[1]};
    j["resolution"] = K.resolution;
    const std::string text = j.dump(2) + "\n";
    poros::write_text_file(out_path(cfg, "permeability.json"), text);
    std::cout << text;
    return 0;
}

int run_boundary_layer_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const int res = opt.resolution > 0 ? opt.resolution : cfg.bl_resolution;
    poros::BoundaryLayerResult bl =
        poros::solve_navier_bl(cfg.strip(), res, cfg.solver, /*probe_truncation=*/true);
    poros::DecayReport dec = poros::verify_decay(bl);
    ojson j;
    j["C1_bl"] = bl.C1_bl;
    j["C_omega_bl"] = bl.C_omega_bl;
    j["grad_energy"] = bl.grad_energy;
    j["decay_rates"] = ojson{{"vel_above", dec.vel_above.rate},
                             {"pres_above", dec.pres_above.rate},
                             {"vel_below", dec.vel_below.rate},
                             {"pres_below", dec.pres_below.rate}};
    j["omega_pointwise_ok"] = dec.omega_pointwise_ok;
    j["omega_first_band_mean"] = poros::omega_first_band_mean(bl);
    j["warnings"] = bl.warnings;
    const std::string text = j.dump(2) + "\n";
    poros::write_text_file(out_path(cfg, "boundary_layer.json"), text);
    std::cout << text;
    return 0;
}

int run_effective_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const double eps = cfg.epsilons.front();
    poros::BoundaryLayerResult bl =
        poros::solve_navier_bl(cfg.strip(), cfg.bl_resolution, cfg.solver);
    const int nx = opt.resolution > 0
                       ? opt.resolution
                       : static_cast<int>(std::lround(cfg.L / eps)) * cfg.micro_pts_per_eps;
    poros::EffectiveSolution eff =
        poros::solve_effective_stokes(cfg.channel(eps), cfg.forcing, bl.C1_bl, nx, cfg.solver);
    dump_velocity(cfg, "effective", eff.grid, eff.u_eff);
    dump_pressure(cfg, "effective_p.csv", eff.grid, eff.p_eff);
    std::cout << "eps " << eps << "  C1_bl " << bl.C1_bl << "  M_eff " << eff.M_eff
              << "  mean shear " << eff.sigma12_mean << "\n";
    return 0;
}

int run_microscale_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const double eps = cfg.epsilons.front();
    const int pts = opt.resolution > 0 ? opt.resolution : cfg.micro_pts_per_eps;
    poros::MicroscaleSolution micro =
        poros::solve_microscale(cfg.channel(eps), cfg.forcing, pts, cfg.solver);
    dump_velocity(cfg, "microscale", micro.grid, micro.v);
    dump_pressure(cfg, "microscale_p.csv", micro.grid, micro.p);
    const double M = poros::flux_integral_u(micro.grid, micro.v, micro.j_interface,
                                            micro.grid.ny() - 1);
    std::cout << "eps " << eps << "  unknowns "
              << 3 * micro.grid.nx() * micro.grid.ny() << "  mass flow " << M << "\n";
    return 0;
}

int run_convergence_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    if (opt.resolution > 0) cfg.micro_pts_per_eps = opt.resolution;
    poros::ErrorReport rep = poros::run_convergence(cfg);
    poros::write_text_file(out_path(cfg, "report.json"), poros::report_to_json(rep));
    poros::write_text_file(out_path(cfg, "sweep.csv"), poros::sweep_to_csv(rep));
    std::cout << "wrote " << out_path(cfg, "report.json") << "\n";
    for (const auto& [name, rate] : rep.rates)
        std::cout << std::left << std::setw(18) << name << " rate " << rate << "\n";
    for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

int run_jump_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const double eps = cfg.epsilons.back();
    poros::BoundaryLayerResult bl =
        poros::solve_navier_bl(cfg.strip(), cfg.bl_resolution, cfg.solver);
    const poros::ChannelGeometry ch = cfg.channel(eps);
    poros::MicroscaleSolution micro =
        poros::solve_microscale(ch, cfg.forcing, cfg.micro_pts_per_eps, cfg.solver);
    poros::EffectiveSolution eff = poros::solve_effective_stokes(
        ch, cfg.forcing, bl.C1_bl, micro.grid.nx(), cfg.solver);
    poros::JumpMeasurement jm = poros::measure_interface_jump(micro, eff, bl.C_omega_bl);
    ojson j;
    j["eps"] = eps;
    j["measured_mean"] = jm.measured_mean;
    j["predicted_mean"] = jm.predicted_mean;
    j["ratio"] = jm.ratio;
    j["profile"] = jm.profile;
    const std::string text = j.dump(2) + "\n";
    poros::write_text_file(out_path(cfg, "jump.json"), text);
    std::cout << text;
    return 0;
}

int run_shift_study_cmd(const Options& opt) {
    ExperimentConfig cfg = resolve_config(opt);
    const int res = opt.resolution > 0 ? opt.resolution : cfg.bl_resolution;
    std::vector<poros::ShiftRow> rows =
        poros::interface_shift_study(cfg.strip(), cfg.shift_offsets, res, cfg.solver);
    std::ostringstream os;
    os << std::setprecision(17) << "a,C1_a,predicted,defect\n";
    for (const poros::ShiftRow& r : rows)
        os << r.a << "," << r.C1 << "," << r.predicted << "," << r.defect << "\n";
    poros::write_text_file(out_path(cfg, "shift_study.csv"), os.str());
    std::cout << os.str();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interface laws between free flow and a porous bed: "
                 "effective constants, model solves, and convergence studies"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "JSON experiment description");
    app.add_option("--out", opt.out_dir, "output directory (overrides config)");
    app.add_option("--resolution", opt.resolution, "resolution override");
    app.add_option("--tol", opt.tol, "solver residual tolerance override");
    app.add_option("--eps", opt.eps, "single epsilon override");

    int (*handler)(const Options&) = nullptr;
    auto sub = [&](const char* name, const char* desc, int (*fn)(const Options&)) {
        app.add_subcommand(name, desc)->callback([&handler, fn] { handler = fn; });
    };
    sub("constants", "cell permeability + boundary-layer constants", run_constants_cmd);
    sub("permeability", "cell-problem permeability tensor only", run_permeability_cmd);
    sub("boundary-layer", "interface-layer constants and decay diagnostics",
        run_boundary_layer_cmd);
    sub("effective", "slip-condition channel flow at the first epsilon", run_effective_cmd);
    sub("microscale", "resolved perforated-domain flow at the first epsilon",
        run_microscale_cmd);
    sub("convergence", "full sweep: norms, rates, report.json + sweep.csv",
        run_convergence_cmd);
    sub("jump", "pressure jump across the interface at the smallest epsilon", run_jump_cmd);
    sub("shift-study", "slip constants for shifted interface positions", run_shift_study_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        return handler(opt);
    } catch (const poros::InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
