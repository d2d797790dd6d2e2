/// @file microscale.cpp
/// @brief Pore-scale solve and cell averaging.

#include "poros/microscale.hpp"

#include "poros/errors.hpp"
#include "poros/operators.hpp"

#include <cmath>
#include <sstream>

namespace poros {

MicroscaleSolution solve_microscale(const ChannelGeometry& ch, const Forcing& f,
                                    int pts_per_eps, const SolverConfig& cfg) {
    ch.validate();
    if (pts_per_eps < 8) {
        throw ConfigError("microscale resolution must be at least 8 points per eps");
    }

    const int cells_x = static_cast<int>(std::lround(ch.L / ch.eps));
    const int cells_y = static_cast<int>(std::lround((ch.h + ch.H) / ch.eps));
    const int nx = cells_x * pts_per_eps;
    const int ny = cells_y * pts_per_eps;
    const long unknowns = 3L * nx * ny;
    if (unknowns > cfg.max_unknowns) {
        std::ostringstream os;
        os << "microscale grid " << nx << "x" << ny << " needs about " << unknowns
           << " unknowns, beyond the configured budget " << cfg.max_unknowns;
        throw ConfigError(os.str());
    }

    const double dx = ch.L / nx;
    PerforatedDomainSpec spec = build_perforated_domain(ch);
    StaggeredGrid grid(nx, ny, dx, dx, 0.0, -ch.H, spec.solid, /*periodic_y=*/false);
    const int j_sigma = grid.line_index(0.0);

    StokesProblem prob;
    prob.grid = &grid;
    prob.force = sample_forcing(grid, f);
    prob.bottom = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    prob.top = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    const StaggeredGrid* gp = &grid;
    prob.pressure_region = [gp](int /*i*/, int j) { return gp->cell_y(j) > 0.0; };

    StokesSolution sol = solve_stokes(prob, cfg);

    MicroscaleSolution out(std::move(grid));
    out.v = std::move(sol.vel);
    out.p = std::move(sol.p);
    out.eps = ch.eps;
    out.pts_per_eps = pts_per_eps;
    out.j_interface = j_sigma;
    out.residual = sol.residual;
    out.div_inf = sol.div_inf;
    return out;
}

DarcyAverages darcy_average(const MicroscaleSolution& sol) {
    const StaggeredGrid& g = sol.grid;
    const int m = sol.pts_per_eps;
    const double eps = sol.eps;
    const double H = -g.y0();

    DarcyAverages avg;
    avg.nI = g.nx() / m;
    avg.nJ = static_cast<int>(std::lround(H / eps));
    avg.eps = eps;
    avg.H_ = H;
    const size_t n = static_cast<size_t>(avg.nI) * avg.nJ;
    avg.u.assign(n, 0.0);
    avg.v.assign(n, 0.0);
    avg.p.assign(n, 0.0);

    const double dx = g.dx(), dy = g.dy();
    const double cell_area = eps * eps;
    for (int J = 0; J < avg.nJ; ++J) {
        for (int I = 0; I < avg.nI; ++I) {
            const size_t idx = static_cast<size_t>(J) * avg.nI + I;
            // integral of v1 over the cell: trapezoid across the column
            // faces (boundary faces shared with the neighbor cells count
            // half), full-weight rows.
            double su = 0.0;
            for (int j = J * m; j < (J + 1) * m; ++j) {
                su += 0.5 * sol.v.u(I * m, j);
                for (int k = 1; k < m; ++k) su += sol.v.u(I * m + k, j);
                su += 0.5 * sol.v.u((I + 1) * m % g.nx(), j);
            }
            double sv = 0.0;
            for (int i = I * m; i < (I + 1) * m; ++i) {
                sv += 0.5 * sol.v.v(i, J * m);
                for (int k = 1; k < m; ++k) sv += sol.v.v(i, J * m + k);
                sv += 0.5 * sol.v.v(i, (J + 1) * m);
            }
            avg.u[idx] = su * dx * dy / cell_area / cell_area;
            avg.v[idx] = sv * dx * dy / cell_area / cell_area;

            double sp = 0.0;
            long np = 0;
            for (int j = J * m; j < (J + 1) * m; ++j) {
                for (int i = I * m; i < (I + 1) * m; ++i) {
                    if (g.cell_solid(i, j)) continue;
                    sp += sol.p(i, j);
                    ++np;
                }
            }
            avg.p[idx] = (np > 0) ? sp / np : 0.0;
        }
    }
    return avg;
}

double interface_trace_norm(const MicroscaleSolution& sol) {
    const StaggeredGrid& g = sol.grid;
    const int j = sol.j_interface;
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double u_mid = 0.5 * (sol.v.u(i, j - 1) + sol.v.u(i, j));
        const double v_on = sol.v.v(i, j);
        s += u_mid * u_mid + v_on * v_on;
    }
    return std::sqrt(s * g.dx());
}

} // namespace poros
