/// @file geometry.hpp
/// @brief Domain descriptions: periodic pore cell, boundary-layer strip,
///        two-region channel, and the perforated-domain expansion.

#pragma once

#include <vector>

namespace poros {

/// Closed axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
    bool overlaps(const Rect& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
};

/// Unit pore cell (0,1)^2 with solid inclusions strictly inside.
struct CellGeometry {
    std::vector<Rect> inclusions; ///< solid part, cell-local coordinates
    double margin = 0.1;          ///< required clearance to the cell boundary

    /// Throws GeometryError unless: every inclusion keeps >= margin
    /// clearance from the cell boundary, inclusions are pairwise disjoint,
    /// and the fluid part is connected (flood fill on a 64x64 probe grid).
    void validate() const;

    bool is_solid(double x, double y) const;
};

/// Truncated boundary-layer strip (0,1) x (-L_bot, L_top).
/// The porous part repeats `cell` once per unit row below y2 = 0.
struct StripGeometry {
    CellGeometry cell;
    double interface_offset = 0.0; ///< a <= 0, interface line y2 = a
    int L_top = 4;                 ///< free-slab truncation height
    int L_bot = 4;                 ///< whole pore cells below the interface

    void validate() const;

    /// Solid rectangles in strip coordinates (rows k = 1..L_bot).
    std::vector<Rect> solid_rects() const;
};

/// Returns a copy of `strip` with the interface moved to y2 = a.
/// The fluid/solid sets are unchanged; only the traction-jump line moves.
/// Throws GeometryError if the line y2 = a cuts a solid inclusion or
/// a <= -L_bot + 1.
StripGeometry shift_interface(const StripGeometry& strip, double a);

/// Two-region channel: free part Omega_1 = (0,L)x(0,h), porous part
/// Omega_2 = (0,L)x(-H,0) perforated with eps-scaled copies of `cell`.
struct ChannelGeometry {
    double L = 1.0;
    double h = 0.5;
    double H = 0.5;
    double eps = 0.25;
    CellGeometry cell;

    void validate() const; ///< requires L/eps, h/eps, H/eps integral
};

/// Physical-coordinate expansion of the porous microstructure.
struct PerforatedDomainSpec {
    std::vector<Rect> solid; ///< all obstacle rectangles inside Omega_2
    double L = 0, h = 0, H = 0, eps = 0;
};

/// Lays eps-scaled copies of the cell inclusions over the
/// (L/eps) x (H/eps) mesh covering Omega_2. Deterministic: cells are
/// traversed column-major from x1 = 0, row-major from y2 = -H upward,
/// inclusions in declaration order.
PerforatedDomainSpec build_perforated_domain(const ChannelGeometry& channel);

} // namespace poros
