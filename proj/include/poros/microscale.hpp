/// @file microscale.hpp
/// @brief Resolved pore-scale Stokes flow on the perforated channel and
///        the cell-averaged (Darcy-scale) quantities derived from it.

#pragma once

#include "poros/forcing.hpp"
#include "poros/geometry.hpp"
#include "poros/grid.hpp"
#include "poros/stokes.hpp"

#include <vector>

namespace poros {

struct MicroscaleSolution {
    StaggeredGrid grid; ///< monolithic grid over (0,L) x (-H,h)
    VectorField v;
    ScalarField p;      ///< zero mean over the free region x2 > 0
    double eps = 0.0;
    int pts_per_eps = 0;
    int j_interface = 0; ///< grid-line index of x2 = 0
    double residual = 0.0;
    double div_inf = 0.0;

    explicit MicroscaleSolution(StaggeredGrid g)
        : grid(std::move(g)), v(grid), p(grid) {}
};

/// Single Stokes solve over the union of the free channel and the pore
/// space, periodic in x1, no-slip on outer walls and obstacles. Requires
/// pts_per_eps >= 8; refuses grids beyond cfg.max_unknowns.
MicroscaleSolution solve_microscale(const ChannelGeometry& ch, const Forcing& f,
                                    int pts_per_eps, const SolverConfig& cfg = {});

/// Per-pore-cell averages over the porous block: velocity means scaled by
/// 1/eps^2 (the Darcy velocity scale) and fluid-mean pressures.
struct DarcyAverages {
    int nI = 0, nJ = 0; ///< pore-cell counts across and down (J=0 deepest)
    double eps = 0.0;
    std::vector<double> u, v, p; ///< row-major J * nI + I

    double at_u(int I, int J) const { return u[static_cast<size_t>(J) * nI + I]; }
    double at_v(int I, int J) const { return v[static_cast<size_t>(J) * nI + I]; }
    double at_p(int I, int J) const { return p[static_cast<size_t>(J) * nI + I]; }
    double cell_x(int I) const { return (I + 0.5) * eps; }
    double cell_y(int J) const { return -H_ + (J + 0.5) * eps; }

    double H_ = 0.0;
};

DarcyAverages darcy_average(const MicroscaleSolution& sol);

/// L2 norms of the pore-scale solution restricted to bands, and the
/// interface trace norm (v1 interpolated onto the line, v2 native).
double interface_trace_norm(const MicroscaleSolution& sol);

} // namespace poros
