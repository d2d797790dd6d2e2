/// @file boundary_layer.hpp
/// @brief Navier boundary-layer problem on a truncated periodic strip.
///
/// The layer {beta, omega} solves a Stokes system on the strip
/// (0,1) x (-L_bot, L_top), 1-periodic in y1, with no-slip on the pore
/// obstacles, and a unit tangential traction jump across the interface
/// line S = {y2 = a}:
///
///     [ (grad(beta) - omega I) e^2 ]_S = e^1.
///
/// Truncation conditions: beta = 0 at the bottom, free slip
/// (d beta1/d y2 = 0, beta2 = 0) at the top. Away from S the solution
/// stabilizes exponentially: beta -> (C1, 0) above, 0 below; omega -> Cw
/// above and 0 below (deep mean pinned to zero). The slip constant C1 and
/// pressure-jump constant Cw are read off at the interface; discrete
/// conservation makes the horizontal averages exactly constant in height.

#pragma once

#include "poros/geometry.hpp"
#include "poros/grid.hpp"
#include "poros/stokes.hpp"

#include <string>
#include <vector>

namespace poros {

/// Log-linear fit d(y) ~ prefactor * exp(-rate * y) of slice deviations.
struct DecayFit {
    double rate = 0.0;
    double prefactor = 0.0;
    int n_samples = 0;
};

/// One sampled slice deviation at height y2 (measured from the interface).
struct SliceDeviation {
    double y2 = 0.0;
    double value = 0.0;
};

/// Relative changes of the extracted constants under larger truncations.
struct TruncationProbe {
    bool performed = false;
    double dC1_top_plus1 = 0.0, dCw_top_plus1 = 0.0;
    double dC1_bot_plus1 = 0.0, dCw_bot_plus1 = 0.0;
    double dC1_top_doubled = 0.0, dCw_top_doubled = 0.0;
};

struct BoundaryLayerResult {
    StaggeredGrid grid;
    VectorField beta;
    ScalarField omega;
    double C1_bl = 0.0;      ///< slip constant, horizontal average of beta1 at S
    double C_omega_bl = 0.0; ///< pressure-jump constant, average of omega at S
    double grad_energy = 0.0; ///< integral of |grad beta|^2 over the strip
    double max_beta2_average = 0.0; ///< max over heights of |row integral of beta2|

    DecayFit vel_decay_above;  ///< || beta(.,y2) - (C1,0) ||_L2 slices
    DecayFit pres_decay_above; ///< sup | omega(.,y2) - Cw | slices
    DecayFit vel_decay_below;  ///< per-cell-band RMS of beta
    DecayFit pres_decay_below; ///< per-cell-band RMS of omega

    std::vector<SliceDeviation> vel_slices_above, pres_slices_above;
    std::vector<SliceDeviation> vel_bands_below, pres_bands_below;

    TruncationProbe truncation;
    std::vector<std::string> warnings;

    int resolution = 0;
    int L_top = 0, L_bot = 0;
    double interface_offset = 0.0;

    explicit BoundaryLayerResult(StaggeredGrid g)
        : grid(std::move(g)), beta(grid), omega(grid) {}
};

/// Solves the boundary-layer problem at `resolution` points per unit.
///
/// When `probe_truncation` is set, re-solves with L_top+1, L_bot+1 and
/// doubled L_top and records the relative constant changes; a change above
/// 0.1% of the constant scale appends a warning.
///
/// Throws InvariantError if C1 >= 0, if |C1 + grad_energy| > 1% |C1|,
/// or if any horizontal average of beta2 exceeds 1e-6.
BoundaryLayerResult solve_navier_bl(const StripGeometry& strip, int resolution,
                                    const SolverConfig& cfg = {},
                                    bool probe_truncation = false);

/// One row of the interface-shift study.
struct ShiftRow {
    double a = 0.0;        ///< interface offset
    double C1 = 0.0;       ///< slip constant extracted at y2 = a
    double predicted = 0.0; ///< C1(baseline) - a
    double defect = 0.0;   ///< |C1 - predicted|
};

/// Re-solves with the interface moved to each offset a < 0 and compares the
/// extracted slip constant against the shift law C1^a = C1 - a.
std::vector<ShiftRow> interface_shift_study(const StripGeometry& strip,
                                            const std::vector<double>& offsets,
                                            int resolution,
                                            const SolverConfig& cfg = {});

/// Pointwise and fitted decay diagnostics of a converged layer.
struct DecayReport {
    DecayFit vel_above, pres_above, vel_below, pres_below;
    /// sup_i |omega(.,y2) - Cw| at y2 = 0.5 and 1.0 vs the bound 2 e^{-2 pi y2}
    double omega_sup_05 = 0.0, omega_bound_05 = 0.0;
    double omega_sup_10 = 0.0, omega_bound_10 = 0.0;
    bool omega_pointwise_ok = false;
};

DecayReport verify_decay(const BoundaryLayerResult& result);

/// Fluid-mean of omega over the first whole pore-cell band below the
/// interface; measures how much of the pressure transition the first row
/// retains (the bias of cell-averaged jump measurements).
double omega_first_band_mean(const BoundaryLayerResult& result);

} // namespace poros
