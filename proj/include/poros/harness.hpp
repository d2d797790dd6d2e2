/// @file harness.hpp
/// @brief End-to-end experiment orchestration: constants, convergence
///        sweeps, composite error fields, jump measurement, rate fits,
///        and deterministic JSON/CSV reports.

#pragma once

#include "poros/boundary_layer.hpp"
#include "poros/cell_problems.hpp"
#include "poros/effective.hpp"
#include "poros/forcing.hpp"
#include "poros/geometry.hpp"
#include "poros/microscale.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace poros {

// ----------------------------------------------------------------------------
// Configuration
// ----------------------------------------------------------------------------

struct ExperimentConfig {
    CellGeometry cell;
    double L = 1.0, h = 0.5, H = 0.5; ///< channel dimensions
    int L_top = 4, L_bot = 4;         ///< strip truncations
    double interface_offset = 0.0;
    Forcing forcing = Forcing::constant(1.0, 0.0);
    std::vector<double> epsilons{0.25, 0.125, 0.0625};
    int bl_resolution = 64;      ///< strip points per unit
    int cell_resolution = 128;   ///< cell-problem grid
    int micro_pts_per_eps = 16;  ///< microscale points per eps
    SolverConfig solver;
    std::string output_dir = "out";
    std::vector<double> shift_offsets{-0.25, -0.75};
    double robustness_a = -0.0625; ///< interface-shift parameter for the
                                   ///< effective-model perturbation study

    ChannelGeometry channel(double eps) const;
    StripGeometry strip() const;
};

/// Reads a JSON config (top-level keys: geometry, forcing, epsilons,
/// solver, output); missing keys keep the defaults above. Throws
/// ConfigError on malformed input or a non-decreasing epsilon list.
ExperimentConfig load_config(const std::string& path);

/// Built-in experiment: a two-inclusion cell without mirror symmetry, so
/// every interface constant (including the pressure-jump one) is nonzero.
ExperimentConfig sample_config();

/// Built-in experiment with a centered square inclusion: mirror-symmetric
/// in both axes, so K is isotropic and the pressure-jump constant vanishes.
ExperimentConfig symmetric_sample_config();

/// Built-in experiment whose obstacles sit entirely below strip depth
/// -0.8125, leaving a wide clear gap under the interface. Shift lines at
/// -0.25 and -0.75 stay inside that gap, where the slip constant obeys the
/// shift law exactly.
ExperimentConfig clear_gap_sample_config();

// ----------------------------------------------------------------------------
// Reports
// ----------------------------------------------------------------------------

struct ConstantsReport {
    Tensor2 K{}, K_energy{};
    std::array<double, 2> K_eigenvalues{};
    double C1_bl = 0.0, C_omega_bl = 0.0, grad_energy = 0.0;
    double max_beta2_average = 0.0; ///< max over heights of |row integral of beta2|
    DecayFit vel_decay_above, pres_decay_above, vel_decay_below, pres_decay_below;
    TruncationProbe truncation;
    int cell_resolution = 0, bl_resolution = 0;
    std::vector<std::string> warnings;
};

/// Cell problems + boundary layer with truncation probes.
ConstantsReport run_constants(const ExperimentConfig& cfg);

/// Norm table of one sweep entry. Names mirror the report columns:
/// vel_L2_Omega1        = || v_eps - u_eff ||_{L2(Omega_1)}
/// M_defect             = | M_eps - M_eff |
/// grad_wL2_Omega1      = || |x2|^1/2 grad(v_eps - u_eff) ||_{L2(Omega_1)}
/// pres_wL2_Omega1      = || |x2|^1/2 (p_eps - p_eff) ||_{L2(Omega_1)}
/// pres_Hm12_Sigma      = || p_eps - p_eff ||_{H^-1/2(Sigma)}
/// vel_L2_Omega2        = || v_eps ||_{L2(Omega_2^eps)}
/// pres_L2_Omega2       = || p_eps - p_tilde ||_{L2(Omega_2)}
/// U_L2_Omega2          = || U_eps ||_{L2(Omega_2)}
/// P_L2_Omega2          = || P_eps ||_{L2(Omega_2)} (informational)
struct SweepEntry {
    double eps = 0.0;
    bool ok = false;
    std::string error;
    double vel_L2_Omega1 = 0.0;
    double M_defect = 0.0;
    double M_eps = 0.0, M_eff = 0.0;
    double grad_wL2_Omega1 = 0.0;
    double pres_wL2_Omega1 = 0.0;
    double pres_Hm12_Sigma = 0.0;
    double vel_L2_Omega2 = 0.0;
    double pres_L2_Omega2 = 0.0;
    double U_L2_Omega2 = 0.0;
    double P_L2_Omega2 = 0.0;
    double vel_trace_Sigma = 0.0;   ///< || v_eps ||_{L2(Sigma)}
    double grad_L2_Omega2 = 0.0;    ///< || grad v_eps ||_{L2(Omega_2^eps)}
    double jump_measured = 0.0;
    double jump_predicted = 0.0;
    double jump_ratio = 0.0;
};

/// Ordered (name, fitted rate) pairs; names as in SweepEntry.
using RateTable = std::vector<std::pair<std::string, double>>;

struct ErrorReport {
    ConstantsReport constants;
    std::vector<SweepEntry> entries;
    RateTable rates;
    std::vector<std::string> warnings;
};

/// Full sweep: for each eps solve the microscale, effective, counterflow,
/// and Darcy problems, compute every report norm, and fit rates (only when
/// at least 3 entries succeeded). Solver failures abort the entry with a
/// record; the report is still produced.
ErrorReport run_convergence(const ExperimentConfig& cfg);

// ----------------------------------------------------------------------------
// Composite error fields and jump measurement
// ----------------------------------------------------------------------------

struct ErrorFields {
    VectorField U; ///< on the microscale grid
    ScalarField P;
};

/// Builds the composite errors
///   U = v_eps - v0 + (beta_eps - eps C1 e1 H(x2)) sigma12_0(x1) + eps C1 z
///   P = p_eps - p0 H - p_tilde H(-x2) + (omega_eps - H Cw) sigma12_0(x1)
///       + eps C1 p_sigma H
/// with the layer fields sampled from the strip by periodic bilinear
/// interpolation of x/eps (far-field constants beyond the truncations).
ErrorFields assemble_error_fields(const MicroscaleSolution& micro,
                                  const V0Solution& v0,
                                  const CounterflowSolution& z_sigma,
                                  const BoundaryLayerResult& bl,
                                  const DarcyPressure& p_tilde);

struct JumpMeasurement {
    std::vector<double> profile; ///< per pore-cell column
    double measured_mean = 0.0;
    double predicted_mean = 0.0;
    double ratio = 0.0; ///< measured / predicted (0 when predicted == 0)
};

/// Cell-averaged pore pressure over the first porous cell row minus the
/// effective pressure trace on the interface, against the predicted jump
/// C_omega * mean(sigma12_eff).
JumpMeasurement measure_interface_jump(const MicroscaleSolution& micro,
                                       const EffectiveSolution& eff,
                                       double C_omega_bl);

// ----------------------------------------------------------------------------
// Fits and report emission
// ----------------------------------------------------------------------------

/// OLS slope of log2(value) against log2(eps); requires >= 2 points.
double fit_rate(const std::vector<std::pair<double, double>>& eps_value);

struct RobustnessRow {
    double eps = 0.0;
    double diff = 0.0; ///< L2 velocity difference baseline vs shifted model
};

/// Effective-model interface-position study over the config epsilon list.
std::vector<RobustnessRow> interface_robustness_study(const ExperimentConfig& cfg,
                                                      double C1_bl);

/// Deterministic serialization (fixed key order, shortest round-trip
/// floats). Throws InvariantError if any value is not finite.
std::string report_to_json(const ErrorReport& report);
std::string constants_to_json(const ConstantsReport& constants);
std::string sweep_to_csv(const ErrorReport& report);

void write_text_file(const std::string& path, const std::string& content);

} // namespace poros
