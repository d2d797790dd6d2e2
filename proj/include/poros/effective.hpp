/// @file effective.hpp
/// @brief Macroscale models on the free channel and the porous block:
///        impermeable-wall Stokes, slip-law Stokes, the counterflow driven
///        by the interface shear, and the Darcy pressure with the
///        interface pressure-jump condition.

#pragma once

#include "poros/forcing.hpp"
#include "poros/geometry.hpp"
#include "poros/grid.hpp"
#include "poros/stokes.hpp"

#include <array>
#include <vector>

namespace poros {

using Tensor2 = std::array<std::array<double, 2>, 2>;

/// Stokes flow on the channel with no-slip at both walls: the leading-order
/// approximation that ignores the porous bed entirely.
struct V0Solution {
    StaggeredGrid grid;
    VectorField v0;
    ScalarField p0;
    std::vector<double> sigma12; ///< interface shear dv1/dx2 at u-face abscissas
    double sigma12_mean = 0.0;

    explicit V0Solution(StaggeredGrid g) : grid(std::move(g)), v0(grid), p0(grid) {}
};

/// Stokes flow with the slip law u1 + eps*C1*du1/dx2 = 0 on the interface.
struct EffectiveSolution {
    StaggeredGrid grid;
    VectorField u_eff;
    ScalarField p_eff;
    std::vector<double> sigma12; ///< du1/dx2 trace at the bottom of the domain
    double sigma12_mean = 0.0;
    double M_eff = 0.0;          ///< mass flow rate, integral of u1 over the domain
    double eps = 0.0;
    double C1_bl = 0.0;
    double slip_residual = 0.0;  ///< max |u1 + eps*C1*du1/dx2| on the interface

    explicit EffectiveSolution(StaggeredGrid g)
        : grid(std::move(g)), u_eff(grid), p_eff(grid) {}
};

/// Counterflow generated by the boundary-layer tail: Stokes flow vanishing
/// at the top wall and matching the interface shear profile tangentially
/// on the interface.
struct CounterflowSolution {
    StaggeredGrid grid;
    VectorField z;
    ScalarField p_sigma;

    explicit CounterflowSolution(StaggeredGrid g)
        : grid(std::move(g)), z(grid), p_sigma(grid) {}
};

/// Darcy pressure on the porous block (0,L) x (-H, 0).
struct DarcyPressure {
    StaggeredGrid grid; ///< obstacle-free cell grid of the block
    ScalarField p_tilde;
    double residual = 0.0;

    explicit DarcyPressure(StaggeredGrid g) : grid(std::move(g)), p_tilde(grid) {}
};

/// No-slip Stokes solve on (0,L) x (0,h) at nx columns (square cells).
V0Solution solve_impermeable(const ChannelGeometry& ch, const Forcing& f, int nx,
                             const SolverConfig& cfg = {});

/// Slip-law Stokes solve. `shift_a <= 0` moves the bottom of the domain to
/// x2 = shift_a * eps and uses the transplanted constant C1_bl - shift_a;
/// the shifted bottom must land on a grid line. Throws ConfigError when the
/// resulting slip coefficient is nonnegative.
EffectiveSolution solve_effective_stokes(const ChannelGeometry& ch, const Forcing& f,
                                         double C1_bl, int nx,
                                         const SolverConfig& cfg = {},
                                         double shift_a = 0.0);

/// Counterflow with tangential interface data sigma12 (u-face abscissas).
CounterflowSolution solve_counterflow(const ChannelGeometry& ch,
                                      const std::vector<double>& sigma12, int nx,
                                      const SolverConfig& cfg = {});

/// Darcy pressure: div(K (f - grad p)) = 0 on the block, Dirichlet
/// p = p_eff_trace + C_omega_bl * sigma12_eff on the interface (traces at
/// cell-column and u-face abscissas respectively), zero normal flux of
/// K (f - grad p) at x2 = -H, periodic in x1. Finite-volume fluxes carry
/// the full-tensor cross terms. Throws ConfigError for a non-SPD tensor.
DarcyPressure solve_darcy_pressure(const ChannelGeometry& ch, const Tensor2& K,
                                   const Forcing& f,
                                   const std::vector<double>& sigma12_eff,
                                   const std::vector<double>& p_eff_trace,
                                   double C_omega_bl, int nx);

/// Darcy velocity K (f - grad p_tilde) at cell centers (centered
/// differences; one-sided at the walls).
void darcy_velocity(const DarcyPressure& sol, const Tensor2& K, const Forcing& f,
                    ScalarField& qx, ScalarField& qy);

/// Predicted interface pressure jump (free side minus porous side) as a
/// function of x1, sampled at u-face abscissas: -C_omega_bl * sigma12(x1).
std::vector<double> pressure_jump(const std::vector<double>& sigma12_eff,
                                  double C_omega_bl);

/// L2 difference over the unshifted channel between the baseline slip
/// solution and the one re-meshed on (0,L) x (a*eps, h) with constant
/// C1_bl - a: the interface-position robustness measure.
double effective_interface_perturbation(const ChannelGeometry& ch, const Forcing& f,
                                        double C1_bl, double a, int nx,
                                        const SolverConfig& cfg = {});

/// Closed-form channel flow under constant forcing (f1, 0): velocity
/// profile and mass flow rate of the slip-law solution.
double poiseuille_profile(double f1, double h, double eps, double C1, double y);
double poiseuille_mass_flow(double f1, double L, double h, double eps, double C1);

} // namespace poros
