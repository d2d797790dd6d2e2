/// @file test_cell_problems.cpp
/// @brief Unit-cell permeability: symmetry, positivity, consistency of the
///        volume and energy forms, and covariance under reflections.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poros/cell_problems.hpp"
#include "poros/errors.hpp"
#include "poros/geometry.hpp"

#include <cmath>

using namespace poros;

namespace {

CellGeometry centered_square() {
    CellGeometry cell;
    cell.inclusions = {{0.3125, 0.3125, 0.6875, 0.6875}};
    cell.margin = 0.05;
    return cell;
}

CellGeometry two_inclusion_cell() {
    CellGeometry cell;
    cell.inclusions = {{0.0625, 0.6875, 0.5625, 0.9375},
                       {0.625, 0.3125, 0.8125, 0.6875}};
    cell.margin = 0.05;
    return cell;
}

} // namespace

// ============================================================================
// Structure of the tensor
// ============================================================================

TEST_CASE("doubly mirror-symmetric cell gives a diagonal isotropic tensor") {
    PermeabilityTensor t = compute_permeability(centered_square(), 64);
    const double scale = std::max(t.K[0][0], t.K[1][1]);
    CHECK(std::abs(t.K[0][1]) <= 1e-8 * scale);
    CHECK(std::abs(t.K[1][0]) <= 1e-8 * scale);
    CHECK(std::abs(t.K[0][0] - t.K[1][1]) <= 1e-6 * scale);
    CHECK(t.eigenvalues[0] > 0.0);
    CHECK(t.eigenvalues[1] > 0.0);
}

TEST_CASE("asymmetric cell keeps symmetry, positivity, and energy match") {
    PermeabilityTensor t = compute_permeability(two_inclusion_cell(), 64);
    const double scale = std::max(t.K[0][0], t.K[1][1]);
    CHECK(std::abs(t.K[0][1] - t.K[1][0]) <= 1e-8 * scale);
    CHECK(t.eigenvalues[0] > 0.0);
    CHECK(t.eigenvalues[1] > 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(t.K[i][j] - t.K_energy[i][j]) <= 0.01 * scale);
    // This cell blocks the two directions unequally.
    CHECK(std::abs(t.K[0][0] - t.K[1][1]) > 0.05 * scale);
}

TEST_CASE("refining the grid moves the entries only slightly") {
    PermeabilityTensor coarse = compute_permeability(centered_square(), 32);
    PermeabilityTensor fine = compute_permeability(centered_square(), 64);
    const double scale = fine.K[0][0];
    CHECK(std::abs(coarse.K[0][0] - fine.K[0][0]) <= 0.05 * scale);
    CHECK(std::abs(coarse.K[1][1] - fine.K[1][1]) <= 0.05 * scale);
}

TEST_CASE("shrinking the obstacle increases the permeability") {
    CellGeometry big;
    big.inclusions = {{0.25, 0.25, 0.75, 0.75}};
    CellGeometry small;
    small.inclusions = {{0.3125, 0.3125, 0.6875, 0.6875}};
    PermeabilityTensor tb = compute_permeability(big, 32);
    PermeabilityTensor ts = compute_permeability(small, 32);
    CHECK(ts.K[0][0] > tb.K[0][0]);
    CHECK(ts.K[1][1] > tb.K[1][1]);
}

// ============================================================================
// Reflection covariance
// ============================================================================

TEST_CASE("mirroring the cell in x flips the sign of the off-diagonal entry") {
    CellGeometry diag;
    diag.inclusions = {{0.1875, 0.1875, 0.4375, 0.4375},
                       {0.5625, 0.5625, 0.8125, 0.8125}};
    CellGeometry mirror;
    for (const Rect& r : diag.inclusions)
        mirror.inclusions.push_back({1.0 - r.x1, r.y0, 1.0 - r.x0, r.y1});

    PermeabilityTensor td = compute_permeability(diag, 96);
    PermeabilityTensor tm = compute_permeability(mirror, 96);
    const double scale = std::max(td.K[0][0], td.K[1][1]);

    // The diagonal arrangement couples the two directions measurably.
    CHECK(std::abs(td.K[0][1]) > 1e-5 * scale);
    // Diagonal entries are invariant, the off-diagonal one changes sign.
    CHECK(std::abs(tm.K[0][0] - td.K[0][0]) <= 1e-10 * scale);
    CHECK(std::abs(tm.K[1][1] - td.K[1][1]) <= 1e-10 * scale);
    CHECK(std::abs(tm.K[0][1] + td.K[0][1]) <= 1e-10 * scale);
}

// ============================================================================
// Input validation
// ============================================================================

TEST_CASE("resolutions below the floor are rejected") {
    CHECK_THROWS_AS(compute_permeability(centered_square(), 16), ConfigError);
}
