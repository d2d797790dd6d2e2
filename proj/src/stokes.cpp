/// @file stokes.cpp
/// @brief Assembly and direct solution of the staggered Stokes system.
///
/// All momentum rows are scaled by dx*dy and continuity rows by -dx*dy, so
/// the pressure-gradient and divergence blocks are exact transposes of one
/// another. The tangential velocity at the bottom/top walls is eliminated
/// through a ghost row fitted with a quadratic (exact for quadratic
/// profiles, so plane Poiseuille flow is reproduced to rounding):
///
///   ghost = alpha * u0 + beta * u1 + c,   u0 = first face row, u1 = second
///
///   Dirichlet g : alpha = -2,                beta = 1/3,        c = 8g/3
///   Robin gamma : alpha = -(3/4 + gamma/dy)/D, beta = (1/8)/D,  c = 0,
///                 D = 3/8 - gamma/dy         (u1 + gamma du1/dy = 0)
///   free slip   : alpha = 1,                 beta = 0,          c = 0
///
/// Obstacle walls lie on grid lines: the normal component is pinned at the
/// wall face, the tangential one uses linear reflection (ghost = -u0).

#include "poros/stokes.hpp"

#include "poros/errors.hpp"
#include "poros/operators.hpp"
#include "sparse_direct.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <string>

namespace poros {

namespace {

// ============================================================================
// Index maps
// ============================================================================

struct IndexMaps {
    std::vector<int> u_id, v_id, p_id;
    int n_u = 0, n_v = 0, n_p = 0;
    int lambda = 0;
    int total() const { return n_u + n_v + n_p + 1; }
};

IndexMaps build_maps(const StaggeredGrid& g) {
    IndexMaps m;
    m.u_id.assign(static_cast<size_t>(g.nx()) * g.ny(), -1);
    m.v_id.assign(static_cast<size_t>(g.nx()) * g.n_v_rows(), -1);
    m.p_id.assign(static_cast<size_t>(g.nx()) * g.ny(), -1);
    int next = 0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.u_state(i, j) == FaceState::Interior)
                m.u_id[static_cast<size_t>(j) * g.nx() + i] = next++;
    m.n_u = next;
    for (int j = 0; j < g.n_v_rows(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.v_state(i, j) == FaceState::Interior)
                m.v_id[static_cast<size_t>(j) * g.nx() + i] = next++;
    m.n_v = next - m.n_u;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (!g.cell_solid(i, j))
                m.p_id[static_cast<size_t>(j) * g.nx() + i] = next++;
    m.n_p = next - m.n_u - m.n_v;
    m.lambda = next;
    return m;
}

// ============================================================================
// Wall ghosts
// ============================================================================

struct Ghost {
    double alpha, beta, c;
};

Ghost wall_ghost(const WallCondition& wc, double dy, double g_val) {
    switch (wc.type) {
    case WallBC::NoSlip:
        return {-2.0, 1.0 / 3.0, 0.0};
    case WallBC::Velocity:
        return {-2.0, 1.0 / 3.0, 8.0 / 3.0 * g_val};
    case WallBC::SlipRobin: {
        const double d = 0.375 - wc.robin_gamma / dy;
        if (d <= 1e-12)
            throw ConfigError("SlipRobin: slip length incompatible with grid");
        return {-(0.75 + wc.robin_gamma / dy) / d, 0.125 / d, 0.0};
    }
    case WallBC::FreeSlip:
        return {1.0, 0.0, 0.0};
    }
    throw ConfigError("unknown wall condition type");
}

double wall_u_value(const WallCondition& wc, int i) {
    if (wc.type == WallBC::Velocity && !wc.u_value.empty())
        return wc.u_value[static_cast<size_t>(i)];
    return 0.0;
}

double wall_v_value(const WallCondition& wc, int i) {
    if (wc.type == WallBC::Velocity && !wc.v_value.empty())
        return wc.v_value[static_cast<size_t>(i)];
    return 0.0;
}

void validate_wall(const WallCondition& wc, int nx, bool is_bottom) {
    if (wc.type == WallBC::SlipRobin) {
        if (!is_bottom)
            throw ConfigError("SlipRobin is supported on the bottom wall only");
        if (wc.robin_gamma > 0.0)
            throw ConfigError("SlipRobin: slip coefficient must be <= 0");
    }
    if (wc.type == WallBC::Velocity) {
        if (!wc.u_value.empty() && static_cast<int>(wc.u_value.size()) != nx)
            throw ConfigError("wall u profile size does not match grid");
        if (!wc.v_value.empty() && static_cast<int>(wc.v_value.size()) != nx)
            throw ConfigError("wall v profile size does not match grid");
    }
}

} // namespace

// ============================================================================
// Solve
// ============================================================================

StokesSolution solve_stokes(const StokesProblem& prob, const SolverConfig& cfg) {
    if (!prob.grid) throw ConfigError("solve_stokes: missing grid");
    const StaggeredGrid& g = *prob.grid;
    if (g.ny() < 3) throw ConfigError("solve_stokes: grid too small");
    const int nx = g.nx(), ny = g.ny();
    const double dx = g.dx(), dy = g.dy();
    const double sx = dy / dx, sy = dx / dy, area = dx * dy;

    if (!g.periodic_y()) {
        validate_wall(prob.bottom, nx, true);
        validate_wall(prob.top, nx, false);
        double net_bot = 0.0, net_top = 0.0, scale = 0.0;
        for (int i = 0; i < nx; ++i) {
            net_bot += wall_v_value(prob.bottom, i);
            net_top += wall_v_value(prob.top, i);
            scale = std::max({scale, std::abs(wall_v_value(prob.bottom, i)),
                              std::abs(wall_v_value(prob.top, i))});
        }
        if (std::abs(net_bot - net_top) > 1e-10 * (1.0 + scale) * nx)
            throw ConfigError(
                "incompatible wall data: net normal flux in != flux out");
    }

    const IndexMaps maps = build_maps(g);
    auto uid = [&](int i, int j) {
        return maps.u_id[static_cast<size_t>(j) * nx + g.wrap_x(i)];
    };
    auto vid = [&](int i, int j) {
        return maps.v_id[static_cast<size_t>(j) * nx + g.wrap_x(i)];
    };
    auto pid = [&](int i, int j) {
        return maps.p_id[static_cast<size_t>(j) * nx + g.wrap_x(i)];
    };
    auto in_region = [&](int i, int j) {
        return prob.pressure_region ? prob.pressure_region(i, j) : true;
    };

    const int n = maps.total();

    // Anchor cell for the pressure constraint. A one-cell border keeps the
    // matrix sparse (a region-wide constraint row is dense and ruins the
    // factorization); the requested zero-mean normalization over the region
    // is applied after the solve, which is exact since the pressure is only
    // determined up to a constant.
    int anchor_i = -1, anchor_j = -1;
    for (int j = 0; j < ny && anchor_i < 0; ++j)
        for (int i = 0; i < nx; ++i)
            if (!g.cell_solid(i, j) && in_region(i, j)) {
                anchor_i = i;
                anchor_j = j;
                break;
            }
    if (anchor_i < 0)
        throw ConfigError("pressure region contains no fluid cells");
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(n) * 8);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    // ---- u-momentum rows --------------------------------------------------
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = uid(i, j);
            if (row < 0) continue;
            double diag = 2.0 * sx + 2.0 * sy;
            double rhs = area * prob.force.u(i, j);

            for (int di : {-1, 1}) {
                const int ii = g.wrap_x(i + di);
                const FaceState st = g.u_state(ii, j);
                if (st == FaceState::Interior)
                    trips.emplace_back(row, uid(ii, j), -sx);
                else if (st == FaceState::Excluded)
                    throw InvariantError("interior u face next to buried face");
                // Wall: tangential value is 0, nothing to add.
            }

            for (int dj : {-1, 1}) {
                const int jj = j + dj;
                if (g.periodic_y() || (jj >= 0 && jj < ny)) {
                    const int jw = g.periodic_y() ? g.wrap_y(jj) : jj;
                    const FaceState st = g.u_state(i, jw);
                    if (st == FaceState::Interior)
                        trips.emplace_back(row, uid(i, jw), -sy);
                    else if (st == FaceState::Excluded)
                        diag += sy; // reflection ghost = -u0 across the wall
                    // Wall: value 0.
                } else {
                    // Domain wall: quadratic ghost elimination.
                    const bool is_bottom = (dj == -1);
                    const WallCondition& wc = is_bottom ? prob.bottom : prob.top;
                    const Ghost gh = wall_ghost(wc, dy, wall_u_value(wc, i));
                    const int j_in = is_bottom ? j + 1 : j - 1;
                    if (g.u_state(i, j_in) != FaceState::Interior)
                        throw InvariantError(
                            "obstacle too close to a domain wall for the "
                            "ghost stencil");
                    diag += -sy * gh.alpha;
                    trips.emplace_back(row, uid(i, j_in), -sy * gh.beta);
                    rhs += sy * gh.c;
                }
            }

            trips.emplace_back(row, pid(i, j), dy);
            trips.emplace_back(row, pid(i - 1, j), -dy);

            for (const LineForce& lf : prob.line_forces)
                if (j == lf.j_line || j == lf.j_line - 1)
                    rhs += 0.5 * lf.strength * dx;

            trips.emplace_back(row, row, diag);
            b[row] = rhs;
        }
    }

    // ---- v-momentum rows --------------------------------------------------
    for (int j = 0; j < g.n_v_rows(); ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = vid(i, j);
            if (row < 0) continue;
            double diag = 2.0 * sx + 2.0 * sy;
            double rhs = area * prob.force.v(i, j);

            for (int di : {-1, 1}) {
                const int ii = g.wrap_x(i + di);
                const FaceState st = g.v_state(ii, j);
                if (st == FaceState::Interior)
                    trips.emplace_back(row, vid(ii, j), -sx);
                else if (st == FaceState::Excluded)
                    diag += sx; // reflection at a vertical obstacle wall
                // Wall: value 0.
            }

            for (int dj : {-1, 1}) {
                const int jj = g.periodic_y() ? g.wrap_y(j + dj) : j + dj;
                const FaceState st = g.v_state(i, jj);
                if (st == FaceState::Interior)
                    trips.emplace_back(row, vid(i, jj), -sy);
                else if (st == FaceState::Boundary)
                    rhs += sy * wall_v_value(jj == 0 ? prob.bottom : prob.top, i);
                else if (st == FaceState::Excluded)
                    throw InvariantError("interior v face next to buried face");
                // Wall: value 0.
            }

            trips.emplace_back(row, pid(i, j), dx);
            trips.emplace_back(row, pid(i, g.periodic_y() ? g.wrap_y(j - 1) : j - 1),
                               -dx);

            trips.emplace_back(row, row, diag);
            b[row] = rhs;
        }
    }

    // ---- continuity rows (scaled by -area) ---------------------------------
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = pid(i, j);
            if (row < 0) continue;
            double rhs = 0.0;

            if (g.u_state(i, j) == FaceState::Interior)
                trips.emplace_back(row, uid(i, j), dy);
            if (g.u_state(g.wrap_x(i + 1), j) == FaceState::Interior)
                trips.emplace_back(row, uid(i + 1, j), -dy);

            const FaceState sb = g.v_state(i, j);
            if (sb == FaceState::Interior)
                trips.emplace_back(row, vid(i, j), dx);
            else if (sb == FaceState::Boundary)
                rhs -= dx * wall_v_value(prob.bottom, i);

            const int jt = g.periodic_y() ? g.wrap_y(j + 1) : j + 1;
            const FaceState st = g.v_state(i, jt);
            if (st == FaceState::Interior)
                trips.emplace_back(row, vid(i, jt), -dx);
            else if (st == FaceState::Boundary)
                rhs += dx * wall_v_value(prob.top, i);

            if (i == anchor_i && j == anchor_j) {
                trips.emplace_back(row, maps.lambda, area);
                trips.emplace_back(maps.lambda, row, area);
            }
            b[row] = rhs;
        }
    }

    // ---- factor and solve ---------------------------------------------------
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();

    Eigen::VectorXd x = detail::sparse_lu_solve(A, b);

    const double bnorm = b.lpNorm<Eigen::Infinity>();
    const double resid =
        (A * x - b).lpNorm<Eigen::Infinity>() / std::max(1e-30, bnorm);

    // ---- extract fields ------------------------------------------------------
    StokesSolution sol;
    sol.vel = VectorField(g);
    sol.p = ScalarField(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (uid(i, j) >= 0) sol.vel.u(i, j) = x[uid(i, j)];
    for (int j = 0; j < g.n_v_rows(); ++j)
        for (int i = 0; i < nx; ++i) {
            if (vid(i, j) >= 0) sol.vel.v(i, j) = x[vid(i, j)];
            else if (g.v_state(i, j) == FaceState::Boundary)
                sol.vel.v(i, j) =
                    wall_v_value(j == 0 ? prob.bottom : prob.top, i);
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (pid(i, j) >= 0) sol.p(i, j) = x[pid(i, j)];

    sol.lambda = x[maps.lambda];
    sol.residual = resid;

    // Remove rounding drift of the pinned pressure mean.
    double psum = 0.0;
    int pcount = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (pid(i, j) >= 0 && in_region(i, j)) {
                psum += sol.p(i, j);
                ++pcount;
            }
    if (pcount == 0) throw ConfigError("pressure region contains no fluid cells");
    const double pmean = psum / pcount;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (pid(i, j) >= 0) sol.p(i, j) -= pmean;

    // ---- post-solve checks ----------------------------------------------------
    const ScalarField div = discrete_divergence(g, sol.vel);
    double div_inf = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (!g.cell_solid(i, j))
                div_inf = std::max(div_inf, std::abs(div(i, j)));
    sol.div_inf = div_inf;

    if (resid > cfg.residual_tol)
        throw SolverError("stokes residual " + std::to_string(resid) +
                          " exceeds tolerance");
    const double vel_scale = std::max(
        1.0, std::max(std::abs(bnorm), x.lpNorm<Eigen::Infinity>()));
    if (div_inf > cfg.div_tol * vel_scale)
        throw SolverError("discrete divergence " + std::to_string(div_inf) +
                          " exceeds tolerance");
    if (std::abs(sol.lambda) > cfg.lambda_tol * std::max(1.0, bnorm))
        throw SolverError("pressure-compatibility multiplier too large; "
                          "boundary data are inconsistent");
    return sol;
}

} // namespace poros
