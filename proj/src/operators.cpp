/// @file operators.cpp
/// @brief Staggered-grid operators, quadratures and norms.

#include "poros/operators.hpp"

#include "poros/errors.hpp"

#include <cmath>
#include <cstddef>

namespace poros {

namespace {

constexpr double kEdgeTol = 1e-9;

bool near(double a, double b) { return std::abs(a - b) < kEdgeTol; }

} // namespace

// ============================================================================
// Divergence and gradient
// ============================================================================

ScalarField discrete_divergence(const StaggeredGrid& g, const VectorField& v) {
    ScalarField div(g);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (g.cell_solid(i, j)) continue;
            const double du = v.u(i + 1, j) - v.u(i, j);
            const double dv = v.v(i, j + 1) - v.v(i, j);
            div(i, j) = du / g.dx() + dv / g.dy();
        }
    }
    return div;
}

VectorField discrete_gradient(const StaggeredGrid& g, const ScalarField& q) {
    VectorField grad(g);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (g.u_state(i, j) == FaceState::Interior)
                grad.u(i, j) = (q(i, j) - q(i - 1, j)) / g.dx();
        }
    }
    for (int j = 0; j < g.n_v_rows(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (g.v_state(i, j) == FaceState::Interior)
                grad.v(i, j) = (q(i, j) - q(i, j - 1)) / g.dy();
        }
    }
    return grad;
}

// ============================================================================
// Norms
// ============================================================================

namespace {

struct NormAccum {
    NormKind kind;
    double acc = 0.0;
    void add(double value, double y, double measure) {
        switch (kind) {
        case NormKind::L1: acc += std::abs(value) * measure; break;
        case NormKind::L2: acc += value * value * measure; break;
        case NormKind::L2WeightedSqrtAbsY:
            acc += std::abs(y) * value * value * measure;
            break;
        case NormKind::HMinusHalfSigma:
            throw InvariantError("HMinusHalfSigma requires hminus_half_norm");
        }
    }
    double finish() const { return kind == NormKind::L1 ? acc : std::sqrt(acc); }
};

} // namespace

double norm_scalar(const StaggeredGrid& g, const ScalarField& f, NormKind kind,
                   Band band) {
    NormAccum a{kind};
    const double m = g.dx() * g.dy();
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.cell_y(j);
        if (!band.contains(y)) continue;
        for (int i = 0; i < g.nx(); ++i) {
            if (g.cell_solid(i, j)) continue;
            a.add(f(i, j), y, m);
        }
    }
    return a.finish();
}

double norm_vector(const StaggeredGrid& g, const VectorField& f, NormKind kind,
                   Band band) {
    NormAccum a{kind};
    const double m = g.dx() * g.dy();
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.uface_y(j);
        if (!band.contains(y)) continue;
        for (int i = 0; i < g.nx(); ++i) {
            if (g.u_state(i, j) == FaceState::Excluded) continue;
            a.add(f.u(i, j), y, m);
        }
    }
    for (int j = 0; j < g.n_v_rows(); ++j) {
        const double y = g.vface_y(j);
        if (!band.contains(y)) continue;
        for (int i = 0; i < g.nx(); ++i) {
            if (g.v_state(i, j) == FaceState::Excluded) continue;
            a.add(f.v(i, j), y, m);
        }
    }
    return a.finish();
}

double hminus_half_norm(const std::vector<double>& samples, double L) {
    const std::size_t n = samples.size();
    if (n == 0) throw InvariantError("hminus_half_norm: empty trace");
    const double two_pi = 2.0 * M_PI;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double phase = -two_pi * static_cast<double>(k * m % n) /
                                 static_cast<double>(n);
            re += samples[m] * std::cos(phase);
            im += samples[m] * std::sin(phase);
        }
        const double mag2 = (re * re + im * im) /
                            (static_cast<double>(n) * static_cast<double>(n));
        const double freq = two_pi * static_cast<double>(std::min(k, n - k)) / L;
        total += mag2 / std::sqrt(1.0 + freq * freq);
    }
    return std::sqrt(L * total);
}

// ============================================================================
// Gradient quadrature (independent of the solver's stencil)
// ============================================================================

namespace {

/// du1/dy at node (i, j_node) with linear-reflection ghosts at obstacle
/// walls; returns 0 when the node lies inside solid material.
double duy_at_node(const StaggeredGrid& g, const VectorField& f, int i,
                   int j_above, int j_below) {
    const FaceState above = g.u_state(i, j_above);
    const FaceState below = g.u_state(i, j_below);
    if (above == FaceState::Excluded && below == FaceState::Excluded) return 0.0;
    if (above == FaceState::Excluded) return -2.0 * f.u(i, j_below) / g.dy();
    if (below == FaceState::Excluded) return 2.0 * f.u(i, j_above) / g.dy();
    return (f.u(i, j_above) - f.u(i, j_below)) / g.dy();
}

/// dv/dx at node (i, j) (v-row index), reflecting at vertical obstacle walls.
double dvx_at_node(const StaggeredGrid& g, const VectorField& f, int i, int j) {
    const int il = g.wrap_x(i - 1);
    const FaceState right = g.v_state(i, j);
    const FaceState left = g.v_state(il, j);
    if (right == FaceState::Excluded && left == FaceState::Excluded) return 0.0;
    if (right == FaceState::Excluded) return -2.0 * f.v(il, j) / g.dx();
    if (left == FaceState::Excluded) return 2.0 * f.v(i, j) / g.dx();
    return (f.v(i, j) - f.v(il, j)) / g.dx();
}

/// Fluid fraction of the four cells meeting at node (i, j_line); cells
/// outside a wall-bounded grid count as solid.
double node_fluid_fraction(const StaggeredGrid& g, int i, int j_line) {
    int fluid = 0;
    const int il = g.wrap_x(i - 1);
    for (int dj = -1; dj <= 0; ++dj) {
        int j = j_line + dj;
        if (g.periodic_y()) j = g.wrap_y(j);
        if (j < 0 || j >= g.ny()) continue;
        if (!g.cell_solid(il, j)) ++fluid;
        if (!g.cell_solid(i, j)) ++fluid;
    }
    return 0.25 * static_cast<double>(fluid);
}

} // namespace

double gradient_inner(const StaggeredGrid& g, const VectorField& a,
                      const VectorField& b, Band band,
                      EdgeRule bottom, EdgeRule top,
                      const std::function<double(double)>& weight) {
    const double m = g.dx() * g.dy();
    auto w = [&](double y) { return weight ? weight(y) : 1.0; };
    double total = 0.0;

    // Cell-center terms: du1/dx and dv/dy on fluid cells.
    for (int j = 0; j < g.ny(); ++j) {
        const double y = g.cell_y(j);
        if (!band.contains(y)) continue;
        for (int i = 0; i < g.nx(); ++i) {
            if (g.cell_solid(i, j)) continue;
            const int ie = g.wrap_x(i + 1);
            const double dux_a = (a.u(ie, j) - a.u(i, j)) / g.dx();
            const double dux_b = (b.u(ie, j) - b.u(i, j)) / g.dx();
            const double dvy_a = (a.v(i, j + 1) - a.v(i, j)) / g.dy();
            const double dvy_b = (b.v(i, j + 1) - b.v(i, j)) / g.dy();
            total += w(y) * (dux_a * dux_b + dvy_a * dvy_b) * m;
        }
    }

    // Node terms: du1/dy and dv/dx, weighted by the node's fluid fraction.
    // YMode says how du1/dy is formed at this node row: centered difference,
    // ghost substitution against a domain wall, or (free slip) exactly zero.
    enum class YMode { Centered, WallBelow, WallAbove, Free };

    const int j_last = g.periodic_y() ? g.ny() - 1 : g.ny();
    for (int j = 0; j <= j_last; ++j) {
        const double y = g.grid_line_y(j);
        if (!band.contains(y)) continue;

        YMode mode = YMode::Centered;
        double edge_factor = 1.0;

        if (!g.periodic_y()) {
            const bool grid_bottom = (j == 0);
            const bool grid_top = (j == g.ny());
            if (grid_bottom || grid_top) {
                const EdgeRule rule = grid_bottom ? bottom : top;
                if (rule == EdgeRule::Periodic)
                    throw InvariantError("EdgeRule::Periodic on wall-bounded grid");
                if (rule == EdgeRule::OneSided) continue; // nothing to form
                if (rule == EdgeRule::FreeSlip) mode = YMode::Free;
                else mode = grid_bottom ? YMode::WallBelow : YMode::WallAbove;
            } else if (near(y, band.y_lo) || near(y, band.y_hi)) {
                // Band edge interior to the grid: centered difference across
                // the edge; half the node's quadrature cell is in-band.
                edge_factor = 0.5;
            }
        }

        for (int i = 0; i < g.nx(); ++i) {
            const double theta = node_fluid_fraction(g, i, j);
            if (theta == 0.0) continue;

            double duy_a = 0.0, duy_b = 0.0;
            switch (mode) {
            case YMode::Centered: {
                const int ja = g.periodic_y() ? g.wrap_y(j) : j;
                const int jb = g.periodic_y() ? g.wrap_y(j - 1) : j - 1;
                duy_a = duy_at_node(g, a, i, ja, jb);
                duy_b = duy_at_node(g, b, i, ja, jb);
                break;
            }
            case YMode::WallBelow: // ghost below = -u(i, j)
                duy_a = 2.0 * a.u(i, j) / g.dy();
                duy_b = 2.0 * b.u(i, j) / g.dy();
                break;
            case YMode::WallAbove: // ghost above = -u(i, j-1)
                duy_a = -2.0 * a.u(i, j - 1) / g.dy();
                duy_b = -2.0 * b.u(i, j - 1) / g.dy();
                break;
            case YMode::Free:
                break;
            }

            const int jv = g.periodic_y() ? g.wrap_y(j) : j;
            const double dvx_a = dvx_at_node(g, a, i, jv);
            const double dvx_b = dvx_at_node(g, b, i, jv);

            total += w(y) * theta * edge_factor *
                     (duy_a * duy_b + dvx_a * dvx_b) * m;
        }
    }
    return total;
}

// ============================================================================
// Row functionals and traces
// ============================================================================

double row_integral_u(const StaggeredGrid& g, const VectorField& f, int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) s += f.u(i, j);
    return s * g.dx();
}

double row_integral_v(const StaggeredGrid& g, const VectorField& f, int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) s += f.v(i, j);
    return s * g.dx();
}

double row_mean_scalar(const StaggeredGrid& g, const ScalarField& f, int j) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) s += f(i, j);
    return s / static_cast<double>(g.nx());
}

std::vector<double> shear_trace_above(const StaggeredGrid& g,
                                      const VectorField& f, int j_line) {
    if (j_line + 2 >= g.ny())
        throw InvariantError("shear_trace_above: not enough rows above line");
    std::vector<double> t(static_cast<std::size_t>(g.nx()));
    for (int i = 0; i < g.nx(); ++i)
        t[static_cast<std::size_t>(i)] =
            (-2.0 * f.u(i, j_line) + 3.0 * f.u(i, j_line + 1) -
             f.u(i, j_line + 2)) / g.dy();
    return t;
}

std::vector<double> shear_trace_below(const StaggeredGrid& g,
                                      const VectorField& f, int j_line) {
    if (j_line - 3 < 0)
        throw InvariantError("shear_trace_below: not enough rows below line");
    std::vector<double> t(static_cast<std::size_t>(g.nx()));
    for (int i = 0; i < g.nx(); ++i)
        t[static_cast<std::size_t>(i)] =
            (2.0 * f.u(i, j_line - 1) - 3.0 * f.u(i, j_line - 2) +
             f.u(i, j_line - 3)) / g.dy();
    return t;
}

std::vector<double> scalar_trace_above(const StaggeredGrid& g,
                                       const ScalarField& f, int j_line) {
    if (j_line + 1 >= g.ny())
        throw InvariantError("scalar_trace_above: not enough rows above line");
    std::vector<double> t(static_cast<std::size_t>(g.nx()));
    for (int i = 0; i < g.nx(); ++i)
        t[static_cast<std::size_t>(i)] =
            0.5 * (3.0 * f(i, j_line) - f(i, j_line + 1));
    return t;
}

std::vector<double> value_trace_above(const StaggeredGrid& g,
                                      const VectorField& f, int j_line) {
    if (j_line + 2 >= g.ny())
        throw InvariantError("value_trace_above: not enough rows above line");
    std::vector<double> t(static_cast<std::size_t>(g.nx()));
    for (int i = 0; i < g.nx(); ++i)
        t[static_cast<std::size_t>(i)] =
            (15.0 * f.u(i, j_line) - 10.0 * f.u(i, j_line + 1) +
             3.0 * f.u(i, j_line + 2)) / 8.0;
    return t;
}

double flux_integral_u(const StaggeredGrid& g, const VectorField& f,
                       int j_lo, int j_hi) {
    if (j_hi - j_lo < 2)
        throw InvariantError("flux_integral_u: band needs at least 3 rows");
    const double dy = g.dy();
    double total = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        double col = 0.0;
        for (int j = j_lo; j <= j_hi; ++j) col += f.u(i, j);
        col *= dy;
        const double d_bot = (-2.0 * f.u(i, j_lo) + 3.0 * f.u(i, j_lo + 1) -
                              f.u(i, j_lo + 2)) / dy;
        const double d_top = (2.0 * f.u(i, j_hi) - 3.0 * f.u(i, j_hi - 1) +
                              f.u(i, j_hi - 2)) / dy;
        col += dy * dy / 24.0 * (d_top - d_bot);
        total += col;
    }
    return total * g.dx();
}

} // namespace poros
