#include "poros/geometry.hpp"
#include "poros/errors.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <string>

namespace poros {

namespace {

std::string rect_str(const Rect& r) {
    std::ostringstream os;
    os << "[" << r.x0 << "," << r.x1 << "]x[" << r.y0 << "," << r.y1 << "]";
    return os.str();
}

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol;
}

} // namespace

bool CellGeometry::is_solid(double x, double y) const {
    for (const Rect& r : inclusions)
        if (r.contains(x, y)) return true;
    return false;
}

void CellGeometry::validate() const {
    if (margin <= 0.0)
        throw GeometryError("cell margin must be positive");
    for (const Rect& r : inclusions) {
        if (r.x0 >= r.x1 || r.y0 >= r.y1)
            throw GeometryError("degenerate inclusion " + rect_str(r));
        double clearance = std::min(std::min(r.x0, r.y0),
                                    std::min(1.0 - r.x1, 1.0 - r.y1));
        if (clearance < margin - 1e-12)
            throw GeometryError("inclusion " + rect_str(r) +
                                " closer than margin to the cell boundary");
    }
    for (size_t a = 0; a < inclusions.size(); ++a)
        for (size_t b = a + 1; b < inclusions.size(); ++b)
            if (inclusions[a].overlaps(inclusions[b]))
                throw GeometryError("inclusions " + rect_str(inclusions[a]) +
                                    " and " + rect_str(inclusions[b]) +
                                    " overlap");

    // Flood fill on a probe grid, periodic in x, to confirm the fluid part
    // stays connected once the cell is tiled.
    const int n = 64;
    const double hgrid = 1.0 / n;
    std::vector<char> solid(n * n, 0);
    int fluid_count = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x = (i + 0.5) * hgrid, y = (j + 0.5) * hgrid;
            solid[j * n + i] = is_solid(x, y) ? 1 : 0;
            if (!solid[j * n + i]) ++fluid_count;
        }
    if (fluid_count == 0)
        throw GeometryError("cell has no fluid part");

    std::vector<char> seen(n * n, 0);
    std::queue<int> q;
    for (int idx = 0; idx < n * n; ++idx)
        if (!solid[idx]) { q.push(idx); seen[idx] = 1; break; }
    int reached = 0;
    while (!q.empty()) {
        int idx = q.front(); q.pop();
        ++reached;
        int i = idx % n, j = idx / n;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ii = (i + di[k] + n) % n; // periodic in both directions:
            int jj = (j + dj[k] + n) % n; // the cell tiles the porous slab
            int nidx = jj * n + ii;
            if (!solid[nidx] && !seen[nidx]) { seen[nidx] = 1; q.push(nidx); }
        }
    }
    if (reached != fluid_count)
        throw GeometryError("fluid part of the cell is not connected");
}

std::vector<Rect> StripGeometry::solid_rects() const {
    std::vector<Rect> out;
    for (int k = 1; k <= L_bot; ++k)
        for (const Rect& r : cell.inclusions)
            out.push_back({r.x0, r.y0 - k, r.x1, r.y1 - k});
    return out;
}

void StripGeometry::validate() const {
    cell.validate();
    if (L_top < 2 || L_bot < 3)
        throw GeometryError("strip truncations must satisfy L_top >= 2, L_bot >= 3");
    if (interface_offset > 0.0)
        throw GeometryError("interface offset must be <= 0");
    if (interface_offset <= -L_bot + 1)
        throw GeometryError("interface offset reaches the strip truncation");
    for (const Rect& r : solid_rects())
        if (interface_offset > r.y0 && interface_offset < r.y1)
            throw GeometryError("interface line y2 = " +
                                std::to_string(interface_offset) +
                                " passes through a solid inclusion");
}

StripGeometry shift_interface(const StripGeometry& strip, double a) {
    StripGeometry out = strip;
    out.interface_offset = a;
    out.validate();
    return out;
}

void ChannelGeometry::validate() const {
    cell.validate();
    if (L <= 0 || h <= 0 || H <= 0 || eps <= 0)
        throw GeometryError("channel dimensions must be positive");
    if (!near_integer(L / eps) || !near_integer(h / eps) || !near_integer(H / eps))
        throw GeometryError("L/eps, h/eps and H/eps must all be integers");
}

PerforatedDomainSpec build_perforated_domain(const ChannelGeometry& channel) {
    channel.validate();
    PerforatedDomainSpec spec;
    spec.L = channel.L;
    spec.h = channel.h;
    spec.H = channel.H;
    spec.eps = channel.eps;

    const int ncols = static_cast<int>(std::round(channel.L / channel.eps));
    const int nrows = static_cast<int>(std::round(channel.H / channel.eps));
    for (int row = 0; row < nrows; ++row) {
        const double y_base = -channel.H + row * channel.eps;
        for (int col = 0; col < ncols; ++col) {
            const double x_base = col * channel.eps;
            for (const Rect& r : channel.cell.inclusions)
                spec.solid.push_back({x_base + channel.eps * r.x0,
                                      y_base + channel.eps * r.y0,
                                      x_base + channel.eps * r.x1,
                                      y_base + channel.eps * r.y1});
        }
    }
    return spec;
}

} // namespace poros
