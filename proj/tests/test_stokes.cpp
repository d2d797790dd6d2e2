/// @file test_stokes.cpp
/// @brief Staggered Stokes solver: exactness, boundary conditions, masks.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poros/errors.hpp"
#include "poros/geometry.hpp"
#include "poros/grid.hpp"
#include "poros/operators.hpp"
#include "poros/stokes.hpp"

#include <cmath>
#include <random>

using namespace poros;

namespace {

VectorField constant_force(const StaggeredGrid& g, double f1, double f2) {
    VectorField f(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) f.u(i, j) = f1;
    for (int j = 0; j < g.n_v_rows(); ++j)
        for (int i = 0; i < g.nx(); ++i) f.v(i, j) = f2;
    return f;
}

double max_abs_u(const StaggeredGrid& g, const VectorField& f) {
    double m = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(f.u(i, j)));
    return m;
}

double max_abs_v(const StaggeredGrid& g, const VectorField& f) {
    double m = 0.0;
    for (int j = 0; j < g.n_v_rows(); ++j)
        for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(f.v(i, j)));
    return m;
}

} // namespace

// ============================================================================
// Closed-form channel flows (discretely exact: quadratic profiles)
// ============================================================================

TEST_CASE("plane channel flow with no-slip walls is reproduced to rounding") {
    const double h = 0.5;
    StaggeredGrid g(32, 16, 1.0 / 32, h / 16, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = constant_force(g, 1.0, 0.0);
    StokesSolution sol = solve_stokes(prob);

    double err = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.uface_y(j);
        const double exact = 0.5 * y * (h - y);
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err, std::abs(sol.vel.u(i, j) - exact));
    }
    CHECK(err <= 1e-12);
    CHECK(max_abs_v(g, sol.vel) <= 1e-12);
    double pmax = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            pmax = std::max(pmax, std::abs(sol.p(i, j)));
    CHECK(pmax <= 1e-11);
    CHECK(sol.div_inf <= 1e-11);
}

TEST_CASE("channel flow with a Navier slip bottom matches the closed form") {
    const double h = 0.5;
    const double gamma = -0.05; // slip length scaled by the slip constant
    StaggeredGrid g(16, 24, 1.0 / 16, h / 24, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = constant_force(g, 1.0, 0.0);
    prob.bottom.type = WallBC::SlipRobin;
    prob.bottom.robin_gamma = gamma;
    StokesSolution sol = solve_stokes(prob);

    // -u'' = 1, u(h) = 0, u(0) + gamma u'(0) = 0:
    const double a = 0.5 * h * h / (h - gamma);
    auto exact = [&](double y) { return -0.5 * y * y + a * y + (0.5 * h * h - a * h); };
    double err = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err, std::abs(sol.vel.u(i, j) - exact(g.uface_y(j))));
    CHECK(err <= 1e-12);

    // slip: the wall velocity is positive, unlike the no-slip channel
    CHECK(exact(0.0) > 0.0);
    CHECK(sol.vel.u(3, 0) > 0.0);
}

TEST_CASE("free-slip top gives the half-Poiseuille profile") {
    const double h = 0.5;
    StaggeredGrid g(16, 16, 1.0 / 16, h / 16, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = constant_force(g, 1.0, 0.0);
    prob.top.type = WallBC::FreeSlip;
    StokesSolution sol = solve_stokes(prob);
    // -u'' = 1, u(0) = 0, u'(h) = 0  =>  u = y(2h - y)/2
    double err = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err, std::abs(sol.vel.u(i, j) -
                                         0.5 * g.uface_y(j) * (2 * h - g.uface_y(j))));
    CHECK(err <= 1e-12);
}

TEST_CASE("zero data produce the zero solution") {
    StaggeredGrid g(8, 8, 0.125, 0.0625, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    StokesSolution sol = solve_stokes(prob);
    CHECK(max_abs_u(g, sol.vel) <= 1e-14);
    CHECK(max_abs_v(g, sol.vel) <= 1e-14);
}

// ============================================================================
// Boundary data handling
// ============================================================================

TEST_CASE("prescribed tangential wall velocity drives a Couette flow") {
    const double h = 0.5;
    StaggeredGrid g(8, 16, 0.125, h / 16, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    prob.bottom.type = WallBC::Velocity;
    prob.bottom.u_value.assign(8, 1.0);
    StokesSolution sol = solve_stokes(prob);
    // u = 1 - y/h (linear, discretely exact)
    double err = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err,
                           std::abs(sol.vel.u(i, j) - (1.0 - g.uface_y(j) / h)));
    CHECK(err <= 1e-12);
}

TEST_CASE("unbalanced normal flux is rejected") {
    StaggeredGrid g(8, 8, 0.125, 0.0625, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    prob.bottom.type = WallBC::Velocity;
    prob.bottom.v_value.assign(8, 0.1); // inflow with no matching outflow
    CHECK_THROWS_AS(solve_stokes(prob), ConfigError);
}

TEST_CASE("through-flow with matched fluxes is accepted") {
    StaggeredGrid g(8, 8, 0.125, 0.0625, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    prob.bottom.type = WallBC::Velocity;
    prob.bottom.v_value.assign(8, 0.25);
    prob.top.type = WallBC::Velocity;
    prob.top.v_value.assign(8, 0.25);
    StokesSolution sol = solve_stokes(prob);
    // uniform vertical transport
    CHECK(sol.vel.v(4, 4) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(sol.lambda) <= 1e-10);
}

TEST_CASE("Robin condition on the top wall is rejected") {
    StaggeredGrid g(8, 8, 0.125, 0.0625, 0.0, 0.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    prob.top.type = WallBC::SlipRobin;
    prob.top.robin_gamma = -0.1;
    CHECK_THROWS_AS(solve_stokes(prob), ConfigError);
}

// ============================================================================
// Pressure coupling and masks
// ============================================================================

TEST_CASE("a discrete-gradient forcing moves pressure only") {
    std::vector<Rect> solid = {{0.25, 0.125, 0.75, 0.375}};
    StaggeredGrid g(16, 8, 1.0 / 16, 1.0 / 16, 0.0, 0.0, solid);

    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ScalarField q(g);
    double qsum = 0.0;
    int nq = 0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (!g.cell_solid(i, j)) {
                q(i, j) = dist(rng);
                qsum += q(i, j);
                ++nq;
            }
    const double qmean = qsum / nq;

    StokesProblem prob;
    prob.grid = &g;
    prob.force = discrete_gradient(g, q);
    StokesSolution sol = solve_stokes(prob);

    CHECK(max_abs_u(g, sol.vel) <= 1e-12);
    CHECK(max_abs_v(g, sol.vel) <= 1e-12);
    double perr = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (!g.cell_solid(i, j))
                perr = std::max(perr, std::abs(sol.p(i, j) - (q(i, j) - qmean)));
    CHECK(perr <= 1e-11);
}

TEST_CASE("flow past an obstacle honors the mask") {
    std::vector<Rect> solid = {{0.25, 0.25, 0.75, 0.5}};
    StaggeredGrid g(16, 16, 1.0 / 16, 1.0 / 16, 0.0, 0.0, solid);
    StokesProblem prob;
    prob.grid = &g;
    prob.force = constant_force(g, 1.0, 0.0);
    StokesSolution sol = solve_stokes(prob);

    // wall and buried faces stay exactly zero
    CHECK(sol.vel.u(4, 5) == 0.0);  // wall face on the obstacle's left side
    CHECK(sol.vel.u(8, 5) == 0.0);  // buried
    CHECK(sol.vel.v(8, 4) == 0.0);  // bottom obstacle wall
    CHECK(sol.div_inf <= 1e-10);

    // mirror symmetry of the geometry and forcing about x = 0.5
    // (u is even: u(x,y) = u(1-x,y) maps face i -> 16-i)
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const int im = (16 - i) % 16;
            if (g.u_state(i, j) == FaceState::Interior)
                CHECK(sol.vel.u(i, j) ==
                      doctest::Approx(sol.vel.u(im, j)).epsilon(1e-9));
        }
}

TEST_CASE("fully periodic cell solve conserves flux and symmetry") {
    std::vector<Rect> solid = {{0.25, 0.25, 0.75, 0.75}};
    StaggeredGrid g(32, 32, 1.0 / 32, 1.0 / 32, 0.0, 0.0, solid,
                    /*periodic_y=*/true);
    StokesProblem prob;
    prob.grid = &g;
    prob.force = constant_force(g, 1.0, 0.0);
    StokesSolution sol = solve_stokes(prob);

    CHECK(sol.div_inf <= 1e-10);
    // net vertical flux vanishes row by row
    for (int j = 0; j < g.n_v_rows(); ++j)
        CHECK(std::abs(row_integral_v(g, sol.vel, j)) <= 1e-11);
    // mirror symmetry in y (geometry and forcing are even in y about 0.5)
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.u_state(i, j) == FaceState::Interior)
                CHECK(sol.vel.u(i, j) ==
                      doctest::Approx(sol.vel.u(i, 31 - j)).epsilon(1e-9));
}

// ============================================================================
// Tangential line force
// ============================================================================

TEST_CASE("a tangential line force produces the exact kinked profile") {
    // No obstacles: -u'' = -delta(y), u(-1) = 0, u'(1) = 0 has the piecewise
    // linear solution u = -(y+1) below the line and u = -1 above it. The
    // half/half lumping of the line force reproduces it to rounding.
    StaggeredGrid g(8, 64, 0.125, 2.0 / 64, 0.0, -1.0, {});
    StokesProblem prob;
    prob.grid = &g;
    prob.force = VectorField(g);
    prob.top.type = WallBC::FreeSlip;
    prob.line_forces.push_back({g.line_index(0.0), -1.0});
    StokesSolution sol = solve_stokes(prob);

    double err = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.uface_y(j);
        const double exact = y < 0.0 ? -(y + 1.0) : -1.0;
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err, std::abs(sol.vel.u(i, j) - exact));
    }
    CHECK(err <= 1e-11);
    CHECK(max_abs_v(g, sol.vel) <= 1e-12);
}
