/// @file harness.cpp
/// @brief Experiment orchestration, composite error fields, rate fits, and
///        deterministic report emission.

#include "poros/harness.hpp"

#include "poros/errors.hpp"
#include "poros/operators.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace poros {

namespace {

// ----------------------------------------------------------------------------
// Strip sampling (periodic bilinear interpolation of the layer fields)
// ----------------------------------------------------------------------------

/// The layer is evaluated at strip coordinates y = x / eps. Beyond the
/// fitted region near the truncations the fields are replaced by their
/// far-field limits, which also cancels the matching terms exactly.
struct StripSampler {
    const BoundaryLayerResult& bl;
    double y_hi, y_lo;

    explicit StripSampler(const BoundaryLayerResult& b)
        : bl(b),
          y_hi(b.grid.y0() + b.grid.length_y() - 0.75),
          y_lo(b.grid.y0() + 0.75) {}

    double beta1(double y1, double y2) const {
        if (y2 >= y_hi) return bl.C1_bl;
        if (y2 <= y_lo) return 0.0;
        const StaggeredGrid& g = bl.grid;
        const double fx = y1 / g.dx();
        const double fy = std::clamp((y2 - g.y0()) / g.dy() - 0.5, 0.0,
                                     static_cast<double>(g.ny()) - 1.000001);
        const int i0 = static_cast<int>(std::floor(fx));
        const int j0 = std::min(static_cast<int>(std::floor(fy)), g.ny() - 2);
        const double t = fx - std::floor(fx), s = fy - j0;
        return (1 - t) * (1 - s) * bl.beta.u(i0, j0) + t * (1 - s) * bl.beta.u(i0 + 1, j0) +
               (1 - t) * s * bl.beta.u(i0, j0 + 1) + t * s * bl.beta.u(i0 + 1, j0 + 1);
    }

    double beta2(double y1, double y2) const {
        if (y2 >= y_hi || y2 <= y_lo) return 0.0;
        const StaggeredGrid& g = bl.grid;
        const double fx = y1 / g.dx() - 0.5;
        const double fy = std::clamp((y2 - g.y0()) / g.dy(), 0.0,
                                     static_cast<double>(g.n_v_rows()) - 1.000001);
        const int i0 = static_cast<int>(std::floor(fx));
        const int j0 = std::min(static_cast<int>(std::floor(fy)), g.n_v_rows() - 2);
        const double t = fx - std::floor(fx), s = fy - j0;
        return (1 - t) * (1 - s) * bl.beta.v(i0, j0) + t * (1 - s) * bl.beta.v(i0 + 1, j0) +
               (1 - t) * s * bl.beta.v(i0, j0 + 1) + t * s * bl.beta.v(i0 + 1, j0 + 1);
    }

    double omega(double y1, double y2) const {
        if (y2 >= y_hi) return bl.C_omega_bl;
        if (y2 <= y_lo) return 0.0;
        const StaggeredGrid& g = bl.grid;
        const double fx = y1 / g.dx() - 0.5;
        const double fy = std::clamp((y2 - g.y0()) / g.dy() - 0.5, 0.0,
                                     static_cast<double>(g.ny()) - 1.000001);
        const int i0 = static_cast<int>(std::floor(fx));
        const int j0 = std::min(static_cast<int>(std::floor(fy)), g.ny() - 2);
        const double t = fx - std::floor(fx), s = fy - j0;
        return (1 - t) * (1 - s) * bl.omega(i0, j0) + t * (1 - s) * bl.omega(i0 + 1, j0) +
               (1 - t) * s * bl.omega(i0, j0 + 1) + t * s * bl.omega(i0 + 1, j0 + 1);
    }
};

double vec_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

// ----------------------------------------------------------------------------
// Composite error fields
// ----------------------------------------------------------------------------

ErrorFields assemble_error_fields(const MicroscaleSolution& micro,
                                  const V0Solution& v0,
                                  const CounterflowSolution& z_sigma,
                                  const BoundaryLayerResult& bl,
                                  const DarcyPressure& p_tilde) {
    const StaggeredGrid& g = micro.grid;
    const int nx = g.nx();
    const int jS = micro.j_interface;
    const double eps = micro.eps;
    const double C1 = bl.C1_bl;
    const double Cw = bl.C_omega_bl;

    auto compatible = [&](const StaggeredGrid& o, double y0_expect) {
        return o.nx() == nx && std::abs(o.dx() - g.dx()) < 1e-12 &&
               std::abs(o.y0() - y0_expect) < 1e-12;
    };
    if (!compatible(v0.grid, 0.0) || !compatible(z_sigma.grid, 0.0) ||
        !compatible(p_tilde.grid, g.y0()) ||
        v0.grid.ny() != g.ny() - jS || p_tilde.grid.ny() != jS) {
        throw InvariantError("error-field ingredients live on incompatible grids");
    }

    StripSampler strip(bl);
    ErrorFields out{VectorField(g), ScalarField(g)};
    auto wrap = [nx](int i) { return (i % nx + nx) % nx; };

    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.uface_y(j);
        for (int i = 0; i < nx; ++i) {
            if (g.u_state(i, j) != FaceState::Interior) continue;
            const double sig = v0.sigma12[i];
            const double b1 = eps * strip.beta1(g.uface_x(i) / eps, y / eps);
            double val = micro.v.u(i, j);
            if (y > 0.0) {
                val += -v0.v0.u(i, j - jS) + (b1 - eps * C1) * sig +
                       eps * C1 * z_sigma.z.u(i, j - jS);
            } else {
                val += b1 * sig;
            }
            out.U.u(i, j) = val;
        }
    }
    for (int j = 0; j < g.n_v_rows(); ++j) {
        const double y = g.vface_y(j);
        for (int i = 0; i < nx; ++i) {
            if (g.v_state(i, j) != FaceState::Interior) continue;
            const double sig = 0.5 * (v0.sigma12[i] + v0.sigma12[wrap(i + 1)]);
            const double b2 = eps * strip.beta2(g.vface_x(i) / eps, y / eps);
            double val = micro.v.v(i, j);
            if (y >= 0.0) {
                val += -v0.v0.v(i, j - jS) + b2 * sig + eps * C1 * z_sigma.z.v(i, j - jS);
            } else {
                val += b2 * sig;
            }
            out.U.v(i, j) = val;
        }
    }
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.cell_y(j);
        for (int i = 0; i < nx; ++i) {
            if (g.cell_solid(i, j)) continue;
            const double sig = 0.5 * (v0.sigma12[i] + v0.sigma12[wrap(i + 1)]);
            const double om = strip.omega(g.cell_x(i) / eps, y / eps);
            double val = micro.p(i, j);
            if (y > 0.0) {
                val += -v0.p0(i, j - jS) + (om - Cw) * sig +
                       eps * C1 * z_sigma.p_sigma(i, j - jS);
            } else {
                val += -p_tilde.p_tilde(i, j) + om * sig;
            }
            out.P(i, j) = val;
        }
    }
    return out;
}

// ----------------------------------------------------------------------------
// Jump measurement
// ----------------------------------------------------------------------------

JumpMeasurement measure_interface_jump(const MicroscaleSolution& micro,
                                       const EffectiveSolution& eff,
                                       double C_omega_bl) {
    if (eff.grid.nx() != micro.grid.nx()) {
        throw InvariantError("microscale and effective grids are not compatible");
    }
    DarcyAverages avg = darcy_average(micro);
    std::vector<double> p_trace = scalar_trace_above(eff.grid, eff.p_eff, 0);

    JumpMeasurement jm;
    const int m = micro.pts_per_eps;
    const int J_top = avg.nJ - 1;
    jm.profile.resize(avg.nI);
    for (int I = 0; I < avg.nI; ++I) {
        double tr = 0.0;
        for (int k = 0; k < m; ++k) tr += p_trace[I * m + k];
        tr /= m;
        jm.profile[I] = avg.at_p(I, J_top) - tr;
    }
    jm.measured_mean = vec_mean(jm.profile);
    jm.predicted_mean = C_omega_bl * eff.sigma12_mean;
    jm.ratio = (jm.predicted_mean != 0.0) ? jm.measured_mean / jm.predicted_mean : 0.0;
    return jm;
}

// ----------------------------------------------------------------------------
// Constants
// ----------------------------------------------------------------------------

namespace {

ConstantsReport make_constants_report(const PermeabilityTensor& K,
                                      const BoundaryLayerResult& bl) {
    ConstantsReport c;
    c.K = K.K;
    c.K_energy = K.K_energy;
    c.K_eigenvalues = K.eigenvalues;
    c.cell_resolution = K.resolution;
    c.C1_bl = bl.C1_bl;
    c.C_omega_bl = bl.C_omega_bl;
    c.grad_energy = bl.grad_energy;
    c.max_beta2_average = bl.max_beta2_average;
    c.vel_decay_above = bl.vel_decay_above;
    c.pres_decay_above = bl.pres_decay_above;
    c.vel_decay_below = bl.vel_decay_below;
    c.pres_decay_below = bl.pres_decay_below;
    c.truncation = bl.truncation;
    c.bl_resolution = bl.resolution;
    c.warnings = bl.warnings;
    return c;
}

} // namespace

ConstantsReport run_constants(const ExperimentConfig& cfg) {
    PermeabilityTensor K = compute_permeability(cfg.cell, cfg.cell_resolution);
    BoundaryLayerResult bl = solve_navier_bl(cfg.strip(), cfg.bl_resolution, cfg.solver,
                                             /*probe_truncation=*/true);
    return make_constants_report(K, bl);
}

// ----------------------------------------------------------------------------
// Convergence sweep
// ----------------------------------------------------------------------------

namespace {

SweepEntry compute_entry(const ExperimentConfig& cfg, double eps,
                         const PermeabilityTensor& K, const BoundaryLayerResult& bl) {
    SweepEntry e;
    e.eps = eps;

    const ChannelGeometry ch = cfg.channel(eps);
    MicroscaleSolution micro =
        solve_microscale(ch, cfg.forcing, cfg.micro_pts_per_eps, cfg.solver);
    const int nx = micro.grid.nx();
    const int jS = micro.j_interface;

    V0Solution v0 = solve_impermeable(ch, cfg.forcing, nx, cfg.solver);
    EffectiveSolution eff =
        solve_effective_stokes(ch, cfg.forcing, bl.C1_bl, nx, cfg.solver);
    CounterflowSolution z = solve_counterflow(ch, v0.sigma12, nx, cfg.solver);
    std::vector<double> p_trace = scalar_trace_above(eff.grid, eff.p_eff, 0);
    DarcyPressure darcy = solve_darcy_pressure(ch, K.K, cfg.forcing, eff.sigma12,
                                               p_trace, bl.C_omega_bl, nx);

    const StaggeredGrid& gm = micro.grid;
    const StaggeredGrid& ge = eff.grid;
    const Band free_band{0.0, ch.h};
    const Band pore_band{-ch.H, 0.0};

    // Velocity and pressure differences on the free region (shared columns,
    // row offset jS between the two grids).
    VectorField dvel(ge);
    for (int j = 0; j < ge.ny(); ++j)
        for (int i = 0; i < nx; ++i)
            dvel.u(i, j) = micro.v.u(i, j + jS) - eff.u_eff.u(i, j);
    for (int j = 0; j < ge.n_v_rows(); ++j)
        for (int i = 0; i < nx; ++i)
            dvel.v(i, j) = micro.v.v(i, j + jS) - eff.u_eff.v(i, j);
    ScalarField dp(ge);
    for (int j = 0; j < ge.ny(); ++j)
        for (int i = 0; i < nx; ++i)
            dp(i, j) = micro.p(i, j + jS) - eff.p_eff(i, j);

    e.vel_L2_Omega1 = norm_vector(ge, dvel, NormKind::L2, free_band);
    e.M_eps = flux_integral_u(gm, micro.v, jS, gm.ny() - 1);
    e.M_eff = eff.M_eff;
    e.M_defect = std::abs(e.M_eps - e.M_eff);
    e.grad_wL2_Omega1 =
        std::sqrt(gradient_inner(ge, dvel, dvel, free_band, EdgeRule::OneSided,
                                 EdgeRule::Dirichlet0,
                                 [](double y) { return std::abs(y); }));
    e.pres_wL2_Omega1 =
        norm_scalar(ge, dp, NormKind::L2WeightedSqrtAbsY, free_band);

    std::vector<double> p_sigma_micro = scalar_trace_above(gm, micro.p, jS);
    std::vector<double> trace_diff(nx);
    for (int i = 0; i < nx; ++i) trace_diff[i] = p_sigma_micro[i] - p_trace[i];
    e.pres_Hm12_Sigma = hminus_half_norm(trace_diff, ch.L);

    e.vel_L2_Omega2 = norm_vector(gm, micro.v, NormKind::L2, pore_band);
    e.vel_trace_Sigma = interface_trace_norm(micro);
    e.grad_L2_Omega2 = std::sqrt(gradient_inner(gm, micro.v, micro.v, pore_band,
                                                EdgeRule::Dirichlet0,
                                                EdgeRule::OneSided));

    // Porous pressure mismatch with the per-cell fluid-mean extension.
    DarcyAverages avg = darcy_average(micro);
    {
        const int m = micro.pts_per_eps;
        double s = 0.0;
        const double area = gm.dx() * gm.dy();
        for (int j = 0; j < jS; ++j) {
            const int J = j / m;
            for (int i = 0; i < nx; ++i) {
                const int I = i / m;
                const double pe =
                    gm.cell_solid(i, j) ? avg.at_p(I, J) : micro.p(i, j);
                const double d = pe - darcy.p_tilde(i, j);
                s += d * d * area;
            }
        }
        e.pres_L2_Omega2 = std::sqrt(s);
    }

    ErrorFields fields = assemble_error_fields(micro, v0, z, bl, darcy);
    e.U_L2_Omega2 = norm_vector(gm, fields.U, NormKind::L2, pore_band);
    e.P_L2_Omega2 = norm_scalar(gm, fields.P, NormKind::L2, pore_band);

    JumpMeasurement jm = measure_interface_jump(micro, eff, bl.C_omega_bl);
    e.jump_measured = jm.measured_mean;
    e.jump_predicted = jm.predicted_mean;
    e.jump_ratio = jm.ratio;

    e.ok = true;
    return e;
}

using Column = std::pair<std::string, std::function<double(const SweepEntry&)>>;

const std::vector<Column>& rate_columns() {
    static const std::vector<Column> cols = {
        {"vel_L2_Omega1", [](const SweepEntry& e) { return e.vel_L2_Omega1; }},
        {"M_defect", [](const SweepEntry& e) { return e.M_defect; }},
        {"grad_wL2_Omega1", [](const SweepEntry& e) { return e.grad_wL2_Omega1; }},
        {"pres_wL2_Omega1", [](const SweepEntry& e) { return e.pres_wL2_Omega1; }},
        {"pres_Hm12_Sigma", [](const SweepEntry& e) { return e.pres_Hm12_Sigma; }},
        {"vel_L2_Omega2", [](const SweepEntry& e) { return e.vel_L2_Omega2; }},
        {"pres_L2_Omega2", [](const SweepEntry& e) { return e.pres_L2_Omega2; }},
        {"U_L2_Omega2", [](const SweepEntry& e) { return e.U_L2_Omega2; }},
        {"vel_trace_Sigma", [](const SweepEntry& e) { return e.vel_trace_Sigma; }},
    };
    return cols;
}

} // namespace

double fit_rate(const std::vector<std::pair<double, double>>& eps_value) {
    if (eps_value.size() < 2) {
        throw InvariantError("rate fit needs at least two samples");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [eps, val] : eps_value) {
        if (!(val > 0.0)) throw InvariantError("rate fit needs positive norms");
        const double x = std::log2(eps), y = std::log2(val);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(eps_value.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ErrorReport run_convergence(const ExperimentConfig& cfg) {
    ErrorReport rep;
    PermeabilityTensor K = compute_permeability(cfg.cell, cfg.cell_resolution);
    BoundaryLayerResult bl = solve_navier_bl(cfg.strip(), cfg.bl_resolution, cfg.solver,
                                             /*probe_truncation=*/true);
    rep.constants = make_constants_report(K, bl);
    rep.warnings = rep.constants.warnings;

    for (double eps : cfg.epsilons) {
        SweepEntry e;
        try {
            e = compute_entry(cfg, eps, K, bl);
        } catch (const std::exception& err) {
            e = SweepEntry{};
            e.eps = eps;
            e.ok = false;
            e.error = err.what();
        }
        rep.entries.push_back(std::move(e));
    }

    std::vector<const SweepEntry*> good;
    for (const SweepEntry& e : rep.entries)
        if (e.ok) good.push_back(&e);

    if (good.size() >= 3) {
        for (const Column& col : rate_columns()) {
            std::vector<std::pair<double, double>> pts, pts_fine;
            for (size_t k = 0; k < good.size(); ++k) {
                pts.emplace_back(good[k]->eps, col.second(*good[k]));
                if (k > 0) pts_fine.emplace_back(pts.back());
            }
            const double r = fit_rate(pts);
            rep.rates.emplace_back(col.first, r);
            const double r_fine = fit_rate(pts_fine);
            if (std::abs(r_fine - r) >= 0.3) {
                std::ostringstream os;
                os << "rate of " << col.first << " moves from " << r << " to " << r_fine
                   << " when the coarsest eps is dropped (pre-asymptotic data)";
                rep.warnings.push_back(os.str());
            }
        }
    }
    return rep;
}

std::vector<RobustnessRow> interface_robustness_study(const ExperimentConfig& cfg,
                                                      double C1_bl) {
    std::vector<RobustnessRow> rows;
    for (double eps : cfg.epsilons) {
        const ChannelGeometry ch = cfg.channel(eps);
        const int nx = static_cast<int>(std::lround(cfg.L / eps)) * cfg.micro_pts_per_eps;
        RobustnessRow row;
        row.eps = eps;
        row.diff = effective_interface_perturbation(ch, cfg.forcing, C1_bl,
                                                    cfg.robustness_a, nx, cfg.solver);
        rows.push_back(row);
    }
    return rows;
}

// ----------------------------------------------------------------------------
// Serialization
// ----------------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

double checked(double v) {
    if (!std::isfinite(v)) throw InvariantError("report value is not finite");
    return v;
}

ojson tensor_json(const Tensor2& t) {
    return ojson::array({ojson::array({checked(t[0][0]), checked(t[0][1])}),
                         ojson::array({checked(t[1][0]), checked(t[1][1])})});
}

ojson decay_json(const DecayFit& f) {
    return ojson{{"rate", checked(f.rate)},
                 {"prefactor", checked(f.prefactor)},
                 {"n_samples", f.n_samples}};
}

ojson constants_json_body(const ConstantsReport& c) {
    ojson j;
    j["K"] = tensor_json(c.K);
    j["K_energy"] = tensor_json(c.K_energy);
    j["eigenvalues"] = ojson::array(
        {checked(c.K_eigenvalues[0]), checked(c.K_eigenvalues[1])});
    j["C1_bl"] = checked(c.C1_bl);
    j["C_omega_bl"] = checked(c.C_omega_bl);
    j["grad_energy"] = checked(c.grad_energy);
    j["max_beta2_average"] = checked(c.max_beta2_average);
    j["decay_rates"] = ojson{{"vel_above", decay_json(c.vel_decay_above)},
                             {"pres_above", decay_json(c.pres_decay_above)},
                             {"vel_below", decay_json(c.vel_decay_below)},
                             {"pres_below", decay_json(c.pres_decay_below)}};
    j["truncation"] = ojson{{"performed", c.truncation.performed},
                            {"dC1_top_plus1", checked(c.truncation.dC1_top_plus1)},
                            {"dCw_top_plus1", checked(c.truncation.dCw_top_plus1)},
                            {"dC1_bot_plus1", checked(c.truncation.dC1_bot_plus1)},
                            {"dCw_bot_plus1", checked(c.truncation.dCw_bot_plus1)},
                            {"dC1_top_doubled", checked(c.truncation.dC1_top_doubled)},
                            {"dCw_top_doubled", checked(c.truncation.dCw_top_doubled)}};
    j["resolution"] = ojson{{"cell", c.cell_resolution}, {"strip", c.bl_resolution}};
    j["warnings"] = c.warnings;
    return j;
}

} // namespace

std::string constants_to_json(const ConstantsReport& constants) {
    return constants_json_body(constants).dump(2) + "\n";
}

std::string report_to_json(const ErrorReport& report) {
    ojson j;
    j["constants"] = constants_json_body(report.constants);
    ojson sweep = ojson::array();
    for (const SweepEntry& e : report.entries) {
        ojson je;
        je["eps"] = checked(e.eps);
        je["ok"] = e.ok;
        je["error"] = e.error;
        if (e.ok) {
            ojson norms;
            for (const auto& col : rate_columns()) {
                norms[col.first] = checked(col.second(e));
            }
            norms["P_L2_Omega2"] = checked(e.P_L2_Omega2);
            norms["grad_L2_Omega2"] = checked(e.grad_L2_Omega2);
            je["norms"] = norms;
            je["M_eps"] = checked(e.M_eps);
            je["M_eff"] = checked(e.M_eff);
            je["jump"] = ojson{{"measured", checked(e.jump_measured)},
                               {"predicted", checked(e.jump_predicted)},
                               {"ratio", checked(e.jump_ratio)}};
        }
        sweep.push_back(je);
    }
    j["sweep"] = sweep;
    ojson rates;
    for (const auto& [name, r] : report.rates) rates[name] = checked(r);
    j["rates"] = rates;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const ErrorReport& report) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "eps";
    for (const auto& col : rate_columns()) os << "," << col.first;
    os << ",P_L2_Omega2,jump_measured,jump_predicted\n";
    for (const SweepEntry& e : report.entries) {
        if (!e.ok) continue;
        os << checked(e.eps);
        for (const auto& col : rate_columns()) os << "," << checked(col.second(e));
        os << "," << checked(e.P_L2_Omega2) << "," << checked(e.jump_measured) << ","
           << checked(e.jump_predicted) << "\n";
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

} // namespace poros
