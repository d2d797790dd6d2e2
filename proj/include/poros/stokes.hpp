/// @file stokes.hpp
/// @brief Direct solver for the steady Stokes saddle-point system on a
///        staggered grid with obstacle masks, periodic sides, and a choice
///        of bottom/top wall conditions (no-slip, prescribed velocity,
///        Navier slip, free slip).

#pragma once

#include "poros/grid.hpp"

#include <functional>
#include <vector>

namespace poros {

enum class WallBC {
    NoSlip,   ///< u1 = 0, u2 = 0
    Velocity, ///< u1, u2 prescribed per face
    SlipRobin,///< u1 + gamma du1/dn... specifically u1 = -gamma du1/dy, u2 = 0
    FreeSlip  ///< du1/dy = 0, u2 = 0
};

/// Condition on one horizontal domain wall. For Velocity the vectors give
/// per-column values (u at u-face abscissas, v at v-face abscissas); empty
/// vectors mean zero. SlipRobin imposes u1 + gamma * du1/dy = 0 with
/// gamma <= 0 (the Navier condition with gamma = epsilon * slip constant)
/// and is accepted on the bottom wall only.
struct WallCondition {
    WallBC type = WallBC::NoSlip;
    std::vector<double> u_value;
    std::vector<double> v_value;
    double robin_gamma = 0.0;
};

/// Horizontal line source strength * delta(y - y_line) added to the first
/// momentum component; j_line indexes the grid line carrying it.
struct LineForce {
    int j_line = 0;
    double strength = 0.0;
};

struct StokesProblem {
    const StaggeredGrid* grid = nullptr;
    VectorField force;                  ///< body force sampled at faces
    std::vector<LineForce> line_forces; ///< tangential line sources
    WallCondition bottom, top;          ///< ignored for periodic_y grids
    /// Cells over which the pressure mean is pinned to zero; null = all
    /// fluid cells.
    std::function<bool(int, int)> pressure_region;
};

struct SolverConfig {
    double residual_tol = 1e-8; ///< relative linear-system residual bound
    double div_tol = 1e-9;      ///< max cell divergence (absolute, scaled)
    double lambda_tol = 1e-7;   ///< compatibility multiplier bound
    long max_unknowns = 2000000; ///< memory guard for the largest solve
};

struct StokesSolution {
    VectorField vel;
    ScalarField p;
    double residual = 0.0; ///< achieved relative residual
    double div_inf = 0.0;  ///< max |div| over fluid cells
    double lambda = 0.0;   ///< pressure-constraint multiplier (0 if data
                           ///< are compatible)
};

/// Assembles and LU-factors the full saddle system (momentum rows scaled by
/// the cell area, continuity rows by its negative so the coupling blocks
/// are exact transposes; a one-cell bordered row/column removes the
/// constant-pressure nullspace and the zero-mean normalization over
/// pressure_region is applied after the solve). Throws ConfigError for
/// inconsistent boundary data and SolverError when the post-solve residual,
/// divergence, or compatibility checks fail.
StokesSolution solve_stokes(const StokesProblem& prob,
                            const SolverConfig& cfg = {});

} // namespace poros
