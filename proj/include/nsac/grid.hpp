#ifndef NSAC_GRID_HPP
#define NSAC_GRID_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsac {

// Boundary mode for the whole domain.
//   PeriodicTorus : all fields wrap.
//   NoSlipBox     : u = 0 on the walls, homogeneous Neumann for chi-type scalars.
enum class Bc { PeriodicTorus, NoSlipBox };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int nx{0}, ny{0};
    double lx{1.0}, ly{1.0};
    Bc bc{Bc::PeriodicTorus};

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double lx_, double ly_, Bc bc_)
        : nx(nx_), ny(ny_), lx(lx_), ly(ly_), bc(bc_) {
        if (nx < 8 || ny < 8) throw ConfigError("GridSpec: nx, ny must be >= 8");
        if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("GridSpec: lx, ly must be > 0");
    }

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double cell_area() const { return dx() * dy(); }
    int cells() const { return nx * ny; }
    bool periodic() const { return bc == Bc::PeriodicTorus; }

    double xc(int i) const { return (i + 0.5) * dx(); }
    double yc(int j) const { return (j + 0.5) * dy(); }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly && bc == o.bc;
    }
};

// Cell-centered scalar field, row-major (j outer, i inner).
struct ScalarField {
    GridSpec grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), v(static_cast<size_t>(g.nx) * g.ny, fill) {}

    double& at(int i, int j) { return v[static_cast<size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return v[static_cast<size_t>(j) * grid.nx + i]; }

    // Wrapped / reflected access honoring the grid's boundary mode.
    // For NoSlipBox this is the homogeneous-Neumann ghost reflection.
    double ghost(int i, int j) const {
        const int nx = grid.nx, ny = grid.ny;
        if (grid.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
        } else {
            if (i < 0) i = -i - 1;
            if (i >= nx) i = 2 * nx - 1 - i;
            if (j < 0) j = -j - 1;
            if (j >= ny) j = 2 * ny - 1 - j;
        }
        return at(i, j);
    }

    double min() const;
    double max() const;
    bool finite() const;
};

// MAC (staggered) vector field: ux on vertical faces, uy on horizontal faces.
// ux has (nx+1) x ny entries, uy has nx x (ny+1).
// Periodic grids keep the redundant layer wrap-consistent:
//   ux(nx,j) == ux(0,j), uy(i,ny) == uy(i,0).
struct VectorFieldMAC {
    GridSpec grid;
    std::vector<double> ux, uy;

    VectorFieldMAC() = default;
    explicit VectorFieldMAC(const GridSpec& g, double fill = 0.0)
        : grid(g),
          ux(static_cast<size_t>(g.nx + 1) * g.ny, fill),
          uy(static_cast<size_t>(g.nx) * (g.ny + 1), fill) {}

    double& x(int i, int j) { return ux[static_cast<size_t>(j) * (grid.nx + 1) + i]; }
    double x(int i, int j) const { return ux[static_cast<size_t>(j) * (grid.nx + 1) + i]; }
    double& y(int i, int j) { return uy[static_cast<size_t>(j) * grid.nx + i]; }
    double y(int i, int j) const { return uy[static_cast<size_t>(j) * grid.nx + i]; }

    // Ghost access: periodic wrap on the torus; on the box odd reflection
    // (normal component about the wall face, tangential about the wall line),
    // consistent with the no-slip value 0 on the wall.
    double xg(int i, int j) const {
        const int nx = grid.nx, ny = grid.ny;
        if (grid.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
            return x(i, j);
        }
        double s = 1.0;
        if (i < 0) { i = -i; s = -s; }
        if (i > nx) { i = 2 * nx - i; s = -s; }
        if (j < 0) { j = -j - 1; s = -s; }
        if (j > ny - 1) { j = 2 * ny - 1 - j; s = -s; }
        return s * x(i, j);
    }
    double yg(int i, int j) const {
        const int nx = grid.nx, ny = grid.ny;
        if (grid.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
            return y(i, j);
        }
        double s = 1.0;
        if (j < 0) { j = -j; s = -s; }
        if (j > ny) { j = 2 * ny - j; s = -s; }
        if (i < 0) { i = -i - 1; s = -s; }
        if (i > nx - 1) { i = 2 * nx - 1 - i; s = -s; }
        return s * y(i, j);
    }

    // Copy the primary layer into the redundant one (periodic grids).
    void sync_wrap();
    // Zero the wall-normal faces (no-slip grids).
    void zero_normal_boundary();
    // Enforce whichever of the two the grid's bc requires.
    void enforce_bc() {
        if (grid.periodic()) sync_wrap(); else zero_normal_boundary();
    }

    double max_abs() const;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw ConfigError(std::string(where) + ": mismatched grids");
}

} // namespace nsac

#endif
