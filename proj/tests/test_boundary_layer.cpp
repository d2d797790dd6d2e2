/// @file test_boundary_layer.cpp
/// @brief Boundary-layer strip: interface constants, energy identity,
///        exponential stabilization, truncation stability, and the
///        interface-shift law.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poros/boundary_layer.hpp"
#include "poros/errors.hpp"
#include "poros/geometry.hpp"

#include <cmath>

using namespace poros;

namespace {

StripGeometry strip_of(std::vector<Rect> inclusions) {
    StripGeometry s;
    s.cell.inclusions = std::move(inclusions);
    s.cell.margin = 0.05;
    s.L_top = 4;
    s.L_bot = 4;
    return s;
}

StripGeometry asymmetric_strip() {
    return strip_of({{0.0625, 0.6875, 0.5625, 0.9375}, {0.625, 0.3125, 0.8125, 0.6875}});
}

StripGeometry symmetric_strip() {
    return strip_of({{0.3125, 0.3125, 0.6875, 0.6875}});
}

/// Obstacles confined to the bottom of the cell: the first fluid band under
/// the interface is a clear gap down to depth -0.8125.
StripGeometry clear_gap_strip() {
    return strip_of({{0.125, 0.0625, 0.4375, 0.1875}, {0.5625, 0.0625, 0.875, 0.1875}});
}

} // namespace

// ============================================================================
// Interface constants and the energy identity
// ============================================================================

TEST_CASE("slip constant is negative and equals minus the layer energy") {
    BoundaryLayerResult bl = solve_navier_bl(asymmetric_strip(), 32);
    CHECK(bl.C1_bl < 0.0);
    CHECK(std::abs(bl.C1_bl + bl.grad_energy) <= 0.01 * std::abs(bl.C1_bl));
    CHECK(bl.max_beta2_average <= 1e-6);
}

TEST_CASE("mirror-symmetric cell kills the pressure-jump constant") {
    BoundaryLayerResult sym = solve_navier_bl(symmetric_strip(), 32);
    BoundaryLayerResult asym = solve_navier_bl(asymmetric_strip(), 32);
    CHECK(std::abs(sym.C_omega_bl) <= 1e-3);
    CHECK(std::abs(asym.C_omega_bl) > 10.0 * std::abs(sym.C_omega_bl));
    CHECK(std::abs(asym.C_omega_bl) > 0.05);
}

TEST_CASE("first pore band retains part of the pressure transition") {
    BoundaryLayerResult bl = solve_navier_bl(asymmetric_strip(), 32);
    const double band = omega_first_band_mean(bl);
    // Same sign as the jump constant and strictly between 0 and it.
    CHECK(band * bl.C_omega_bl > 0.0);
    CHECK(std::abs(band) < std::abs(bl.C_omega_bl));
}

// ============================================================================
// Exponential stabilization
// ============================================================================

TEST_CASE("deviations decay exponentially away from the interface") {
    BoundaryLayerResult bl = solve_navier_bl(asymmetric_strip(), 32);
    CHECK(bl.vel_decay_above.rate > 4.0);
    CHECK(bl.pres_decay_above.rate > 5.0);
    CHECK(bl.vel_decay_below.rate > 0.0);
    CHECK(bl.pres_decay_below.rate > 0.0);

    DecayReport rep = verify_decay(bl);
    CHECK(rep.omega_pointwise_ok);
    CHECK(rep.vel_above.rate == doctest::Approx(bl.vel_decay_above.rate));
    CHECK(rep.omega_sup_05 <= rep.omega_bound_05);
    CHECK(rep.omega_sup_10 <= rep.omega_bound_10);
}

TEST_CASE("extending the truncated strip barely moves the constants") {
    BoundaryLayerResult bl =
        solve_navier_bl(asymmetric_strip(), 32, {}, /*probe_truncation=*/true);
    REQUIRE(bl.truncation.performed);
    CHECK(std::abs(bl.truncation.dC1_top_plus1) < 1e-3);
    CHECK(std::abs(bl.truncation.dCw_top_plus1) < 1e-3);
    CHECK(std::abs(bl.truncation.dC1_bot_plus1) < 1e-3);
    CHECK(std::abs(bl.truncation.dCw_bot_plus1) < 1e-3);
    CHECK(std::abs(bl.truncation.dC1_top_doubled) < 1e-3);
    CHECK(std::abs(bl.truncation.dCw_top_doubled) < 1e-3);
    CHECK(bl.warnings.empty());
}

// ============================================================================
// Interface-shift law
// ============================================================================

TEST_CASE("moving the interface into a clear fluid gap shifts the slip "
          "constant by exactly the offset") {
    std::vector<ShiftRow> rows =
        interface_shift_study(clear_gap_strip(), {-0.25, -0.75}, 32);
    REQUIRE(rows.size() == 2);
    for (const ShiftRow& r : rows) {
        CAPTURE(r.a);
        CHECK(r.defect <= 1e-10);
        CHECK(r.C1 == doctest::Approx(r.predicted).epsilon(1e-10));
    }
    // C1^a = C1 - a, so the two shifted constants differ by a1 - a0.
    CHECK(rows[0].C1 - rows[1].C1 == doctest::Approx(-0.75 + 0.25).epsilon(1e-10));
}

TEST_CASE("the shift law fails once obstacles sit above the line") {
    // In this cell the first pore row has solids between depths -0.6875 and
    // -0.0625, so the line at -0.75 passes below them and the transplanted
    // constant no longer matches.
    std::vector<ShiftRow> rows = interface_shift_study(asymmetric_strip(), {-0.75}, 32);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].defect > 0.05);
}

// ============================================================================
// Input validation
// ============================================================================

TEST_CASE("resolutions below the floor are rejected") {
    CHECK_THROWS_AS(solve_navier_bl(symmetric_strip(), 8), ConfigError);
}
