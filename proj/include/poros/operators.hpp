/// @file operators.hpp
/// @brief Discrete differential operators, quadratures and norms on the
///        staggered grid, including the weighted and interface norms used
///        by the convergence diagnostics.

#pragma once

#include "poros/grid.hpp"

#include <functional>
#include <vector>

namespace poros {

/// Conservative face-difference divergence at fluid cells (0 on solid).
ScalarField discrete_divergence(const StaggeredGrid& g, const VectorField& v);

/// Adjoint pairing helper: cell-centered gradient applied to a scalar,
/// returned on faces (0 at non-interior faces). Used by the
/// summation-by-parts test and for building discrete-gradient forcings.
VectorField discrete_gradient(const StaggeredGrid& g, const ScalarField& q);

enum class NormKind {
    L1,
    L2,
    L2WeightedSqrtAbsY, ///< multiplies squared samples by |y|
    HMinusHalfSigma     ///< only via hminus_half_norm on a trace
};

/// Closed y-band used to restrict quadratures (e.g. Omega_1 = [0,h],
/// Omega_2 = [-H,0]). Samples are selected by their y coordinate.
struct Band {
    double y_lo, y_hi;
    bool contains(double y) const { return y >= y_lo - 1e-12 && y <= y_hi + 1e-12; }
};

/// Midpoint-quadrature norm of cell-centered samples over a band.
double norm_scalar(const StaggeredGrid& g, const ScalarField& f, NormKind kind,
                   Band band);

/// Same for a staggered vector field (both components).
double norm_vector(const StaggeredGrid& g, const VectorField& f, NormKind kind,
                   Band band);

/// H^{-1/2} norm of a 1-periodic trace sampled at n equispaced points over
/// a period of length L: squared mode magnitudes |g_k|^2 are weighted by
/// (1 + (2 pi k / L)^2)^{-1/2}; the k = 0 mode has weight 1. Direct DFT.
double hminus_half_norm(const std::vector<double>& samples, double L);

/// Ghost rule for the tangential velocity at the bottom/top of the band
/// when evaluating gradient quadratures.
enum class EdgeRule {
    OneSided, ///< drop the wall-node row (used with weights vanishing there)
    Dirichlet0,
    FreeSlip,
    Periodic
};

/// Independent quadrature of int_band w(y) grad(a):grad(b) dx.
/// Center terms (du/dx, dv/dy) use cell differences on fluid cells; node
/// terms (du/dy, dv/dx) use centered differences with linear-reflection
/// ghosts at obstacle walls and the given rules at the band's outer edges,
/// weighted by the fluid fraction of the four cells around the node.
/// Pass weight = nullptr for w = 1.
double gradient_inner(const StaggeredGrid& g, const VectorField& a,
                      const VectorField& b, Band band,
                      EdgeRule bottom, EdgeRule top,
                      const std::function<double(double)>& weight = nullptr);

inline double gradient_energy(const StaggeredGrid& g, const VectorField& a,
                              Band band, EdgeRule bottom, EdgeRule top,
                              const std::function<double(double)>& weight = nullptr) {
    return gradient_inner(g, a, a, band, bottom, top, weight);
}

// ----------------------------------------------------------------------------
// Row functionals and traces
// ----------------------------------------------------------------------------

/// sum_i u(i,j) dx  (integral of u1 over the horizontal slice at row j).
double row_integral_u(const StaggeredGrid& g, const VectorField& f, int j);

/// sum_i v(i,j) dx  (net vertical flux through grid line j).
double row_integral_v(const StaggeredGrid& g, const VectorField& f, int j);

/// sum_i p(i,j) dx / Lx  (horizontal mean of a cell-centered row).
double row_mean_scalar(const StaggeredGrid& g, const ScalarField& f, int j);

/// One-sided 3-point du1/dy on the grid line j_line evaluated from above,
/// one value per u-face abscissa. Exact on quadratics.
std::vector<double> shear_trace_above(const StaggeredGrid& g,
                                      const VectorField& f, int j_line);

/// Same from below (rows j_line-1, j_line-2, j_line-3).
std::vector<double> shear_trace_below(const StaggeredGrid& g,
                                      const VectorField& f, int j_line);

/// Second-order extrapolation of cell-centered values onto grid line
/// j_line from above: (3 p_j - p_{j+1}) / 2 per column.
std::vector<double> scalar_trace_above(const StaggeredGrid& g,
                                       const ScalarField& f, int j_line);

/// Quadratic extrapolation of u1 onto grid line j_line from above.
std::vector<double> value_trace_above(const StaggeredGrid& g,
                                      const VectorField& f, int j_line);

/// int int u1 dx dy over rows [j_lo, j_hi], midpoint plus the
/// (dy^2/24)[u'] endpoint correction so quadratics integrate exactly.
double flux_integral_u(const StaggeredGrid& g, const VectorField& f,
                       int j_lo, int j_hi);

} // namespace poros
