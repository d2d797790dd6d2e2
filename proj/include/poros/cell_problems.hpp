/// @file cell_problems.hpp
/// @brief Periodic unit-cell Stokes problems and the permeability tensor.
///
/// For each coordinate direction e^i the cell problem seeks a periodic
/// velocity w^i and pressure pi^i on the fluid part of the unit cell with
///
///     -Laplace(w^i) + grad(pi^i) = e^i,   div(w^i) = 0,   w^i = 0 on solids.
///
/// The permeability tensor is K_ij = integral of the j-th component of w^i
/// over the cell (velocity extended by zero into the solid).

#pragma once

#include "poros/geometry.hpp"
#include "poros/grid.hpp"

#include <array>

namespace poros {

struct PermeabilityTensor {
    StaggeredGrid grid;          ///< fully periodic unit-cell grid
    VectorField w1, w2;          ///< cell-problem velocities for e^1, e^2
    ScalarField pi1, pi2;        ///< cell-problem pressures (zero fluid mean)
    std::array<std::array<double, 2>, 2> K{};        ///< volume-integral tensor
    std::array<std::array<double, 2>, 2> K_energy{}; ///< gradient inner products
    std::array<double, 2> eigenvalues{};             ///< of the symmetrized K
    int resolution = 0;

    explicit PermeabilityTensor(StaggeredGrid g)
        : grid(std::move(g)), w1(grid), w2(grid), pi1(grid), pi2(grid) {}
};

/// Solves both cell problems on a resolution x resolution periodic grid.
///
/// Requires resolution >= 32 (ConfigError otherwise). On return the tensor
/// satisfies, or an InvariantError is thrown:
///  - |K_12 - K_21| <= 1e-8 relative to max(K_11, K_22),
///  - both eigenvalues of the symmetrized tensor are positive,
///  - each cell pressure has zero mean over the fluid,
///  - K and K_energy agree entrywise within 1% of max(K_11, K_22).
PermeabilityTensor compute_permeability(const CellGeometry& cell, int resolution);

} // namespace poros
