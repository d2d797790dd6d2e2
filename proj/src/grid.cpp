#include "poros/grid.hpp"
#include "poros/errors.hpp"

#include <cmath>
#include <string>

namespace poros {

namespace {

// Snap a physical coordinate to its grid index, insisting it lands on a line.
int snap_index(double coord, double origin, double spacing, const char* what) {
    double t = (coord - origin) / spacing;
    double r = std::round(t);
    if (std::abs(t - r) > 1e-8)
        throw GeometryError(std::string(what) +
                            " does not lie on a grid line (offset " +
                            std::to_string((t - r) * spacing) + ")");
    return static_cast<int>(r);
}

} // namespace

StaggeredGrid::StaggeredGrid(int nx, int ny, double dx, double dy,
                             double x0, double y0,
                             const std::vector<Rect>& solid, bool periodic_y)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0),
      periodic_y_(periodic_y) {
    if (nx < 2 || ny < 2 || dx <= 0 || dy <= 0)
        throw GeometryError("grid must have nx,ny >= 2 and positive spacings");

    cell_solid_.assign(static_cast<size_t>(nx_) * ny_, 0);
    for (const Rect& r : solid) {
        int i0 = snap_index(r.x0, x0_, dx_, "obstacle x0");
        int i1 = snap_index(r.x1, x0_, dx_, "obstacle x1");
        int j0 = snap_index(r.y0, y0_, dy_, "obstacle y0");
        int j1 = snap_index(r.y1, y0_, dy_, "obstacle y1");
        if (i0 < 0 || i1 > nx_ || j0 < 0 || j1 > ny_)
            throw GeometryError("obstacle rectangle leaves the grid");
        if (i0 >= i1 || j0 >= j1)
            throw GeometryError("obstacle rectangle thinner than one cell");
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i)
                cell_solid_[static_cast<size_t>(j) * nx_ + i] = 1;
    }
    for (char c : cell_solid_)
        if (!c) ++n_fluid_cells_;

    auto solid_at = [&](int i, int j) -> bool {
        i = wrap_x(i);
        if (periodic_y_) j = wrap_y(j);
        return cell_solid_[static_cast<size_t>(j) * nx_ + i] != 0;
    };

    // u faces: between cells (i-1,j) and (i,j)
    u_state_.assign(static_cast<size_t>(nx_) * ny_, FaceState::Interior);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            bool left = solid_at(i - 1, j), right = solid_at(i, j);
            FaceState s = FaceState::Interior;
            if (left && right) s = FaceState::Excluded;
            else if (left || right) s = FaceState::Wall;
            u_state_[static_cast<size_t>(j) * nx_ + i] = s;
        }

    // v faces: between cells (i,j-1) and (i,j); outermost rows are domain
    // boundary faces when the grid is wall-bounded
    v_state_.assign(static_cast<size_t>(nx_) * n_v_rows(), FaceState::Interior);
    for (int j = 0; j < n_v_rows(); ++j)
        for (int i = 0; i < nx_; ++i) {
            FaceState s;
            if (!periodic_y_ && (j == 0 || j == ny_)) {
                s = FaceState::Boundary;
            } else {
                bool below = solid_at(i, j - 1), above = solid_at(i, j);
                s = FaceState::Interior;
                if (below && above) s = FaceState::Excluded;
                else if (below || above) s = FaceState::Wall;
            }
            v_state_[static_cast<size_t>(j) * nx_ + i] = s;
        }
}

int StaggeredGrid::line_index(double y) const {
    double t = (y - y0_) / dy_;
    double r = std::round(t);
    if (std::abs(t - r) > 1e-8)
        throw GeometryError("height " + std::to_string(y) +
                            " is not on a horizontal grid line");
    int j = static_cast<int>(r);
    if (j < 0 || j > ny_)
        throw GeometryError("height " + std::to_string(y) +
                            " is outside the grid");
    return j;
}

} // namespace poros
