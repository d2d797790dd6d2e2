/// @file grid.hpp
/// @brief MAC staggered grid with obstacle masks plus the discrete fields
///        living on it.
///
/// Layout conventions (all problems are periodic in x1):
///   pressure p(i,j)  at cell centers   (x0+(i+1/2)dx, y0+(j+1/2)dy)
///   u(i,j) = u1      at vertical faces (x0+i dx,      y0+(j+1/2)dy)
///   v(i,j) = u2      at horizontal faces (x0+(i+1/2)dx, y0+j dy)
/// i always wraps modulo nx. In y the grid is either wall-bounded
/// (v rows 0..ny inclusive, the outer two lying on the walls) or fully
/// periodic (v rows 0..ny-1, j wraps).

#pragma once

#include "poros/geometry.hpp"

#include <cassert>
#include <vector>

namespace poros {

enum class FaceState : unsigned char {
    Interior, ///< a degree of freedom
    Wall,     ///< on a solid obstacle wall, value pinned to zero
    Excluded, ///< buried inside solid, not part of the system
    Boundary  ///< on the domain's bottom/top wall, value set by the BC
};

class StaggeredGrid {
public:
    /// Builds the grid over (x0,x0+nx*dx) x (y0,y0+ny*dy) and marks cells
    /// covered by `solid` rectangles. Every rectangle edge must lie on a
    /// grid line (throws GeometryError otherwise).
    StaggeredGrid(int nx, int ny, double dx, double dy, double x0, double y0,
                  const std::vector<Rect>& solid, bool periodic_y = false);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    double length_x() const { return nx_ * dx_; }
    double length_y() const { return ny_ * dy_; }
    bool periodic_y() const { return periodic_y_; }
    int n_v_rows() const { return periodic_y_ ? ny_ : ny_ + 1; }

    int wrap_x(int i) const { return (i % nx_ + nx_) % nx_; }
    int wrap_y(int j) const { return (j % ny_ + ny_) % ny_; }

    double cell_x(int i) const { return x0_ + (i + 0.5) * dx_; }
    double cell_y(int j) const { return y0_ + (j + 0.5) * dy_; }
    double uface_x(int i) const { return x0_ + i * dx_; }
    double uface_y(int j) const { return y0_ + (j + 0.5) * dy_; }
    double vface_x(int i) const { return x0_ + (i + 0.5) * dx_; }
    double vface_y(int j) const { return y0_ + j * dy_; }

    bool cell_solid(int i, int j) const {
        return cell_solid_[wrap_y_checked(j) * nx_ + wrap_x(i)] != 0;
    }
    FaceState u_state(int i, int j) const {
        return u_state_[wrap_y_checked(j) * nx_ + wrap_x(i)];
    }
    FaceState v_state(int i, int j) const {
        if (periodic_y_) j = wrap_y(j);
        assert(j >= 0 && j <= (periodic_y_ ? ny_ - 1 : ny_));
        return v_state_[j * nx_ + wrap_x(i)];
    }

    int n_fluid_cells() const { return n_fluid_cells_; }

    /// y-coordinate of the horizontal grid line with index j (0..ny).
    double grid_line_y(int j) const { return y0_ + j * dy_; }

    /// Index of the grid line closest to physical height y; throws
    /// GeometryError if y is not on a grid line.
    int line_index(double y) const;

private:
    int wrap_y_checked(int j) const {
        if (periodic_y_) return wrap_y(j);
        assert(j >= 0 && j < ny_);
        return j;
    }

    int nx_, ny_;
    double dx_, dy_, x0_, y0_;
    bool periodic_y_;
    int n_fluid_cells_ = 0;
    std::vector<char> cell_solid_;
    std::vector<FaceState> u_state_;
    std::vector<FaceState> v_state_;
};

// ============================================================================
// Fields
// ============================================================================

/// Cell-centered scalar samples (pressure and friends).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const StaggeredGrid& g)
        : nx_(g.nx()), ny_(g.ny()), periodic_y_(g.periodic_y()),
          data_(static_cast<size_t>(nx_) * ny_, 0.0) {}

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    size_t index(int i, int j) const {
        i = (i % nx_ + nx_) % nx_;
        if (periodic_y_) j = (j % ny_ + ny_) % ny_;
        assert(j >= 0 && j < ny_);
        return static_cast<size_t>(j) * nx_ + i;
    }
    int nx_ = 0, ny_ = 0;
    bool periodic_y_ = false;
    std::vector<double> data_;
};

/// Face-staggered velocity samples. Solid-masked entries stay exactly 0.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const StaggeredGrid& g)
        : nx_(g.nx()), ny_(g.ny()), nvr_(g.n_v_rows()), periodic_y_(g.periodic_y()),
          u_(static_cast<size_t>(nx_) * ny_, 0.0),
          v_(static_cast<size_t>(nx_) * nvr_, 0.0) {}

    double& u(int i, int j) { return u_[uindex(i, j)]; }
    double u(int i, int j) const { return u_[uindex(i, j)]; }
    double& v(int i, int j) { return v_[vindex(i, j)]; }
    double v(int i, int j) const { return v_[vindex(i, j)]; }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int n_v_rows() const { return nvr_; }

private:
    size_t uindex(int i, int j) const {
        i = (i % nx_ + nx_) % nx_;
        if (periodic_y_) j = (j % ny_ + ny_) % ny_;
        assert(j >= 0 && j < ny_);
        return static_cast<size_t>(j) * nx_ + i;
    }
    size_t vindex(int i, int j) const {
        i = (i % nx_ + nx_) % nx_;
        if (periodic_y_) j = (j % ny_ + ny_) % ny_;
        assert(j >= 0 && j < nvr_);
        return static_cast<size_t>(j) * nx_ + i;
    }
    int nx_ = 0, ny_ = 0, nvr_ = 0;
    bool periodic_y_ = false;
    std::vector<double> u_, v_;
};

} // namespace poros
