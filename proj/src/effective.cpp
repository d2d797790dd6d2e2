/// @file effective.cpp
/// @brief Macroscale channel solves and the Darcy pressure problem.

#include "poros/effective.hpp"

#include "poros/errors.hpp"
#include "poros/operators.hpp"
#include "sparse_direct.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <sstream>
#include <utility>

namespace poros {

namespace {

/// Obstacle-free channel grid with square cells, nx columns over (0, L)
/// and rows filling (y_bottom, y_top).
StaggeredGrid build_channel_grid(double L, double y_bottom, double y_top, int nx) {
    if (nx < 4) throw ConfigError("channel grid needs at least 4 columns");
    const double dx = L / nx;
    const double span = y_top - y_bottom;
    const double fny = span / dx;
    const int ny = static_cast<int>(std::lround(fny));
    if (ny < 3 || std::abs(fny - ny) > 1e-9 * std::max(1.0, fny)) {
        std::ostringstream os;
        os << "channel height " << span << " is not an integer number of cells at dx="
           << dx;
        throw ConfigError(os.str());
    }
    return StaggeredGrid(nx, ny, dx, dx, 0.0, y_bottom, {}, /*periodic_y=*/false);
}

} // namespace

V0Solution solve_impermeable(const ChannelGeometry& ch, const Forcing& f, int nx,
                             const SolverConfig& cfg) {
    ch.validate();
    StaggeredGrid grid = build_channel_grid(ch.L, 0.0, ch.h, nx);

    StokesProblem prob;
    prob.grid = &grid;
    prob.force = sample_forcing(grid, f);
    prob.bottom = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    prob.top = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    StokesSolution sol = solve_stokes(prob, cfg);

    V0Solution out(std::move(grid));
    out.v0 = std::move(sol.vel);
    out.p0 = std::move(sol.p);
    out.sigma12 = shear_trace_above(out.grid, out.v0, 0);
    double s = 0.0;
    for (double v : out.sigma12) s += v;
    out.sigma12_mean = s / out.sigma12.size();
    return out;
}

EffectiveSolution solve_effective_stokes(const ChannelGeometry& ch, const Forcing& f,
                                         double C1_bl, int nx, const SolverConfig& cfg,
                                         double shift_a) {
    ch.validate();
    if (shift_a > 0.0) throw ConfigError("interface shift must be nonpositive");
    const double y_bottom = shift_a * ch.eps;
    const double gamma = ch.eps * (C1_bl - shift_a);
    if (!(gamma < 0.0)) {
        std::ostringstream os;
        os << "slip coefficient must be negative, got eps*(C1 - a) = " << gamma;
        throw ConfigError(os.str());
    }
    StaggeredGrid grid = build_channel_grid(ch.L, y_bottom, ch.h, nx);
    if (std::abs(y_bottom - grid.y0()) > 1e-12) {
        throw ConfigError("shifted interface does not land on a grid line");
    }

    StokesProblem prob;
    prob.grid = &grid;
    prob.force = sample_forcing(grid, f);
    prob.bottom = WallCondition{WallBC::SlipRobin, {}, {}, gamma};
    prob.top = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    StokesSolution sol = solve_stokes(prob, cfg);

    EffectiveSolution out(std::move(grid));
    out.u_eff = std::move(sol.vel);
    out.p_eff = std::move(sol.p);
    out.eps = ch.eps;
    out.C1_bl = C1_bl;
    out.sigma12 = shear_trace_above(out.grid, out.u_eff, 0);
    double s = 0.0;
    for (double v : out.sigma12) s += v;
    out.sigma12_mean = s / out.sigma12.size();
    out.M_eff = flux_integral_u(out.grid, out.u_eff, 0, out.grid.ny() - 1);

    // Discrete slip-law residual on the bottom line, u1 + gamma du1/dy = 0.
    std::vector<double> u_line = value_trace_above(out.grid, out.u_eff, 0);
    double vel_scale = 0.0;
    for (int j = 0; j < out.grid.ny(); ++j)
        for (int i = 0; i < nx; ++i)
            vel_scale = std::max(vel_scale, std::abs(out.u_eff.u(i, j)));
    for (int i = 0; i < nx; ++i) {
        out.slip_residual = std::max(out.slip_residual,
                                     std::abs(u_line[i] + gamma * out.sigma12[i]));
    }
    if (out.slip_residual > 10.0 * cfg.residual_tol * std::max(1.0, vel_scale)) {
        std::ostringstream os;
        os << "slip-law residual " << out.slip_residual << " exceeds tolerance";
        throw SolverError(os.str());
    }
    return out;
}

CounterflowSolution solve_counterflow(const ChannelGeometry& ch,
                                      const std::vector<double>& sigma12, int nx,
                                      const SolverConfig& cfg) {
    ch.validate();
    if (static_cast<int>(sigma12.size()) != nx) {
        throw ConfigError("interface shear profile size does not match the grid");
    }
    StaggeredGrid grid = build_channel_grid(ch.L, 0.0, ch.h, nx);

    StokesProblem prob;
    prob.grid = &grid;
    prob.force = VectorField(grid);
    prob.bottom = WallCondition{WallBC::Velocity, sigma12, {}, 0.0};
    prob.top = WallCondition{WallBC::NoSlip, {}, {}, 0.0};
    StokesSolution sol = solve_stokes(prob, cfg);

    CounterflowSolution out(std::move(grid));
    out.z = std::move(sol.vel);
    out.p_sigma = std::move(sol.p);
    return out;
}

// ============================================================================
// Darcy pressure
// ============================================================================

namespace {

/// Sparse linear form a^T p + c used to compose finite-volume fluxes.
struct Lin {
    std::vector<std::pair<int, double>> terms;
    double c = 0.0;

    void add(int id, double w) { terms.emplace_back(id, w); }
    void add_scaled(const Lin& o, double w) {
        for (auto& [id, cw] : o.terms) terms.emplace_back(id, cw * w);
        c += o.c * w;
    }
};

} // namespace

DarcyPressure solve_darcy_pressure(const ChannelGeometry& ch, const Tensor2& K,
                                   const Forcing& f,
                                   const std::vector<double>& sigma12_eff,
                                   const std::vector<double>& p_eff_trace,
                                   double C_omega_bl, int nx) {
    ch.validate();
    const double k11 = K[0][0], k12 = K[0][1], k21 = K[1][0], k22 = K[1][1];
    const double diag = std::max(k11, k22);
    if (!(k11 > 0.0) || !(k22 > 0.0) || !(k11 * k22 - k12 * k21 > 0.0) ||
        std::abs(k12 - k21) > 1e-8 * diag) {
        throw ConfigError("permeability tensor must be symmetric positive definite");
    }
    if (static_cast<int>(sigma12_eff.size()) != nx ||
        static_cast<int>(p_eff_trace.size()) != nx) {
        throw ConfigError("interface trace size does not match the grid");
    }

    StaggeredGrid grid = build_channel_grid(ch.L, -ch.H, 0.0, nx);
    const int ny = grid.ny();
    const double dx = grid.dx(), dy = grid.dy();
    auto id = [nx](int i, int j) { return j * nx + i; };
    auto wrap = [nx](int i) { return (i % nx + nx) % nx; };

    // Dirichlet data on the interface at cell-column abscissas: effective
    // pressure trace plus the jump C_omega * sigma (sigma given at u faces).
    std::vector<double> pD(nx);
    for (int i = 0; i < nx; ++i) {
        const double sig_c = 0.5 * (sigma12_eff[i] + sigma12_eff[wrap(i + 1)]);
        pD[i] = p_eff_trace[i] + C_omega_bl * sig_c;
    }

    // Cell-centered tangential derivative forms.
    std::vector<Lin> Dx(static_cast<size_t>(nx) * ny), Dy(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Lin& dxf = Dx[id(i, j)];
            dxf.add(id(wrap(i + 1), j), 0.5 / dx);
            dxf.add(id(wrap(i - 1), j), -0.5 / dx);

            Lin& dyf = Dy[id(i, j)];
            if (j == ny - 1) {
                // ghost above the interface: 2 pD - p(i, ny-1)
                dyf.c += 2.0 * pD[i] / (2.0 * dy);
                dyf.add(id(i, ny - 1), -1.0 / (2.0 * dy));
                dyf.add(id(i, ny - 2), -1.0 / (2.0 * dy));
            } else if (j == 0) {
                // average of the one-sided difference at the top of the cell
                // and the zero-flux identity at the bottom wall:
                // dp/dy|wall = f2 + (k21/k22)(f1 - dp/dx|wall).
                dyf.add(id(i, 1), 0.5 / dy);
                dyf.add(id(i, 0), -0.5 / dy);
                const double xw = grid.cell_x(i);
                dyf.c += 0.5 * (f.f2(xw, -ch.H) + (k21 / k22) * f.f1(xw, -ch.H));
                dyf.add(id(wrap(i + 1), 0), -0.5 * (k21 / k22) * 0.5 / dx);
                dyf.add(id(wrap(i - 1), 0), 0.5 * (k21 / k22) * 0.5 / dx);
            } else {
                dyf.add(id(i, j + 1), 0.5 / dy);
                dyf.add(id(i, j - 1), -0.5 / dy);
            }
        }
    }

    // Face fluxes of K (f - grad p). Vertical faces i = 0..nx-1 (periodic),
    // horizontal faces j = 0..ny (bottom flux identically zero).
    auto x_face_flux = [&](int i, int j) {
        Lin F;
        const double xf = grid.uface_x(i), yf = grid.uface_y(j);
        F.c += k11 * f.f1(xf, yf) + k12 * f.f2(xf, yf);
        F.add(id(i, j), -k11 / dx);
        F.add(id(wrap(i - 1), j), k11 / dx);
        F.add_scaled(Dy[id(wrap(i - 1), j)], -0.5 * k12);
        F.add_scaled(Dy[id(i, j)], -0.5 * k12);
        return F;
    };
    auto y_face_flux = [&](int i, int j) {
        Lin F;
        if (j == 0) return F; // no-flux wall
        const double xf = grid.vface_x(i), yf = grid.vface_y(j);
        F.c += k21 * f.f1(xf, yf) + k22 * f.f2(xf, yf);
        if (j == ny) {
            // Dirichlet line: tangential derivative from the data, normal
            // derivative one-sided (exact on quadratics).
            const double dpDdx =
                (pD[wrap(i + 1)] - pD[wrap(i - 1)]) / (2.0 * dx);
            F.c += -k21 * dpDdx - k22 * 8.0 * pD[i] / (3.0 * dy);
            F.add(id(i, ny - 1), k22 * 9.0 / (3.0 * dy));
            F.add(id(i, ny - 2), -k22 * 1.0 / (3.0 * dy));
        } else {
            F.add(id(i, j), -k22 / dy);
            F.add(id(i, j - 1), k22 / dy);
            F.add_scaled(Dx[id(i, j - 1)], -0.5 * k21);
            F.add_scaled(Dx[id(i, j)], -0.5 * k21);
        }
        return F;
    };

    const int n = nx * ny;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(n) * 12);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    auto scatter = [&](int row, const Lin& F, double w) {
        for (auto& [col, cw] : F.terms) trips.emplace_back(row, col, cw * w);
        b[row] -= F.c * w;
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = id(i, j);
            scatter(row, x_face_flux(wrap(i + 1), j), dy);
            scatter(row, x_face_flux(i, j), -dy);
            scatter(row, y_face_flux(i, j + 1), dx);
            scatter(row, y_face_flux(i, j), -dx);
        }
    }

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    Eigen::VectorXd x = detail::sparse_lu_solve(A, b);

    DarcyPressure out(std::move(grid));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) out.p_tilde(i, j) = x[id(i, j)];
    const double bnorm = b.lpNorm<Eigen::Infinity>();
    out.residual = (A * x - b).lpNorm<Eigen::Infinity>() / std::max(1e-30, bnorm);
    if (!(out.residual < 1e-8)) {
        throw SolverError("Darcy pressure solve did not reach tolerance");
    }
    return out;
}

void darcy_velocity(const DarcyPressure& sol, const Tensor2& K, const Forcing& f,
                    ScalarField& qx, ScalarField& qy) {
    const StaggeredGrid& g = sol.grid;
    const int nx = g.nx(), ny = g.ny();
    const double dx = g.dx(), dy = g.dy();
    qx = ScalarField(g);
    qy = ScalarField(g);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double dpx =
                (sol.p_tilde(i + 1, j) - sol.p_tilde(i - 1, j)) / (2.0 * dx);
            double dpy;
            if (j == 0) {
                dpy = (sol.p_tilde(i, 1) - sol.p_tilde(i, 0)) / dy;
            } else if (j == ny - 1) {
                dpy = (sol.p_tilde(i, ny - 1) - sol.p_tilde(i, ny - 2)) / dy;
            } else {
                dpy = (sol.p_tilde(i, j + 1) - sol.p_tilde(i, j - 1)) / (2.0 * dy);
            }
            const double x = g.cell_x(i), y = g.cell_y(j);
            qx(i, j) = K[0][0] * (f.f1(x, y) - dpx) + K[0][1] * (f.f2(x, y) - dpy);
            qy(i, j) = K[1][0] * (f.f1(x, y) - dpx) + K[1][1] * (f.f2(x, y) - dpy);
        }
    }
}

std::vector<double> pressure_jump(const std::vector<double>& sigma12_eff,
                                  double C_omega_bl) {
    std::vector<double> jump(sigma12_eff.size());
    for (size_t i = 0; i < sigma12_eff.size(); ++i) {
        jump[i] = -C_omega_bl * sigma12_eff[i];
    }
    return jump;
}

double effective_interface_perturbation(const ChannelGeometry& ch, const Forcing& f,
                                        double C1_bl, double a, int nx,
                                        const SolverConfig& cfg) {
    EffectiveSolution base = solve_effective_stokes(ch, f, C1_bl, nx, cfg, 0.0);
    EffectiveSolution shifted = solve_effective_stokes(ch, f, C1_bl, nx, cfg, a);

    const StaggeredGrid& gb = base.grid;
    const double dy = gb.dy();
    const double off = -a * ch.eps / dy;
    const int joff = static_cast<int>(std::lround(off));
    if (std::abs(off - joff) > 1e-9) {
        throw ConfigError("shifted grid rows do not align with the baseline");
    }

    const double area = gb.dx() * dy;
    double s = 0.0;
    for (int j = 0; j < gb.ny(); ++j) {
        for (int i = 0; i < gb.nx(); ++i) {
            const double d = shifted.u_eff.u(i, j + joff) - base.u_eff.u(i, j);
            s += d * d * area;
        }
    }
    for (int j = 0; j <= gb.ny(); ++j) {
        const double w = (j == 0 || j == gb.ny()) ? 0.5 : 1.0;
        for (int i = 0; i < gb.nx(); ++i) {
            const double d = shifted.u_eff.v(i, j + joff) - base.u_eff.v(i, j);
            s += d * d * area * w;
        }
    }
    return std::sqrt(s);
}

double poiseuille_profile(double f1, double h, double eps, double C1, double y) {
    const double s = eps * C1 * h / (h - eps * C1);
    return -0.5 * f1 * (y - s) * (y - h);
}

double poiseuille_mass_flow(double f1, double L, double h, double eps, double C1) {
    return f1 * L / 12.0 * h * h * h * (h - 4.0 * eps * C1) / (h - eps * C1);
}

} // namespace poros
