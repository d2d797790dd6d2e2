/// @file cell_problems.cpp
/// @brief Permeability tensor from periodic unit-cell Stokes solves.

#include "poros/cell_problems.hpp"

#include "poros/errors.hpp"
#include "poros/operators.hpp"
#include "poros/stokes.hpp"

#include <cmath>
#include <sstream>

namespace poros {

namespace {

// Integral of a velocity field over the whole periodic cell: every face value
// represents one dx*dy slab, and the zero extension into solids is automatic
// because excluded and wall faces carry zero velocity.
double cell_integral(const StaggeredGrid& g, const VectorField& w, int component) {
    const double area = g.dx() * g.dy();
    double s = 0.0;
    if (component == 0) {
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) s += w.u(i, j);
    } else {
        for (int j = 0; j < g.n_v_rows(); ++j)
            for (int i = 0; i < g.nx(); ++i) s += w.v(i, j);
    }
    return s * area;
}

double fluid_mean(const StaggeredGrid& g, const ScalarField& p) {
    double s = 0.0;
    long n = 0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.cell_solid(i, j)) {
                s += p(i, j);
                ++n;
            }
        }
    }
    return s / static_cast<double>(n);
}

} // namespace

PermeabilityTensor compute_permeability(const CellGeometry& cell, int resolution) {
    if (resolution < 32) {
        throw ConfigError("cell-problem resolution must be at least 32");
    }
    cell.validate();

    const double h = 1.0 / resolution;
    StaggeredGrid grid(resolution, resolution, h, h, 0.0, 0.0, cell.inclusions,
                       /*periodic_y=*/true);

    PermeabilityTensor result(std::move(grid));
    result.resolution = resolution;

    for (int dir = 0; dir < 2; ++dir) {
        StokesProblem prob;
        prob.grid = &result.grid;
        prob.force = VectorField(result.grid);
        if (dir == 0) {
            for (int j = 0; j < result.grid.ny(); ++j)
                for (int i = 0; i < result.grid.nx(); ++i) prob.force.u(i, j) = 1.0;
        } else {
            for (int j = 0; j < result.grid.n_v_rows(); ++j)
                for (int i = 0; i < result.grid.nx(); ++i) prob.force.v(i, j) = 1.0;
        }
        StokesSolution sol = solve_stokes(prob);
        if (dir == 0) {
            result.w1 = sol.vel;
            result.pi1 = sol.p;
        } else {
            result.w2 = sol.vel;
            result.pi2 = sol.p;
        }
    }

    result.K[0][0] = cell_integral(result.grid, result.w1, 0);
    result.K[0][1] = cell_integral(result.grid, result.w1, 1);
    result.K[1][0] = cell_integral(result.grid, result.w2, 0);
    result.K[1][1] = cell_integral(result.grid, result.w2, 1);

    const Band whole{result.grid.y0(), result.grid.y0() + result.grid.length_y()};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const VectorField& wa = (a == 0) ? result.w1 : result.w2;
            const VectorField& wb = (b == 0) ? result.w1 : result.w2;
            result.K_energy[a][b] = gradient_inner(result.grid, wa, wb, whole,
                                                   EdgeRule::Periodic, EdgeRule::Periodic);
        }
    }

    const double scale = std::max(result.K[0][0], result.K[1][1]);
    if (!(scale > 0.0)) {
        throw InvariantError("permeability diagonal is not positive");
    }
    if (std::abs(result.K[0][1] - result.K[1][0]) > 1e-8 * scale) {
        std::ostringstream os;
        os << "permeability tensor is not symmetric: K12=" << result.K[0][1]
           << " K21=" << result.K[1][0];
        throw InvariantError(os.str());
    }

    const double k12 = 0.5 * (result.K[0][1] + result.K[1][0]);
    const double tr = result.K[0][0] + result.K[1][1];
    const double gap = std::sqrt(std::pow(result.K[0][0] - result.K[1][1], 2) + 4.0 * k12 * k12);
    result.eigenvalues = {0.5 * (tr - gap), 0.5 * (tr + gap)};
    if (!(result.eigenvalues[0] > 0.0)) {
        throw InvariantError("permeability tensor is not positive definite");
    }

    for (const ScalarField* pi : {&result.pi1, &result.pi2}) {
        if (std::abs(fluid_mean(result.grid, *pi)) > 1e-10 * (1.0 + scale)) {
            throw InvariantError("cell pressure does not have zero fluid mean");
        }
    }

    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (std::abs(result.K[a][b] - result.K_energy[a][b]) > 0.01 * scale) {
                std::ostringstream os;
                os << "permeability volume integral and gradient energy disagree: K["
                   << a << "][" << b << "]=" << result.K[a][b]
                   << " energy=" << result.K_energy[a][b];
                throw InvariantError(os.str());
            }
        }
    }

    return result;
}

} // namespace poros
