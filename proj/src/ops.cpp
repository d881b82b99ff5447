#include "nsac/ops.hpp"

#include "nsac/reduce.hpp"

namespace nsac {

void grad_into(const ScalarField& f, VectorFieldMAC& out) {
    require_same_grid(f.grid, out.grid, "grad");
    const GridSpec& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    const bool per = g.periodic();

    parallel_for(ny, [&](size_t jlo, size_t jhi) {
        for (size_t j = jlo; j < jhi; ++j) {
            for (int i = 1; i < nx; ++i)
                out.x(i, (int)j) = (f.at(i, (int)j) - f.at(i - 1, (int)j)) * idx;
            if (per) {
                out.x(0, (int)j) = (f.at(0, (int)j) - f.at(nx - 1, (int)j)) * idx;
                out.x(nx, (int)j) = out.x(0, (int)j);
            } else {
                // homogeneous Neumann: zero normal derivative at the walls
                out.x(0, (int)j) = 0.0;
                out.x(nx, (int)j) = 0.0;
            }
        }
    });
    parallel_for(nx, [&](size_t ilo, size_t ihi) {
        for (size_t i = ilo; i < ihi; ++i) {
            for (int j = 1; j < ny; ++j)
                out.y((int)i, j) = (f.at((int)i, j) - f.at((int)i, j - 1)) * idy;
            if (per) {
                out.y((int)i, 0) = (f.at((int)i, 0) - f.at((int)i, ny - 1)) * idy;
                out.y((int)i, ny) = out.y((int)i, 0);
            } else {
                out.y((int)i, 0) = 0.0;
                out.y((int)i, ny) = 0.0;
            }
        }
    });
}

VectorFieldMAC grad(const ScalarField& f) {
    VectorFieldMAC out(f.grid);
    grad_into(f, out);
    return out;
}

void div_into(const VectorFieldMAC& v, ScalarField& out) {
    require_same_grid(v.grid, out.grid, "div");
    const GridSpec& g = v.grid;
    const int nx = g.nx;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t j = jlo; j < jhi; ++j)
            for (int i = 0; i < nx; ++i)
                out.at(i, (int)j) = (v.x(i + 1, (int)j) - v.x(i, (int)j)) * idx +
                                    (v.y(i, (int)j + 1) - v.y(i, (int)j)) * idy;
    });
}

ScalarField div(const VectorFieldMAC& v) {
    ScalarField out(v.grid);
    div_into(v, out);
    return out;
}

void laplacian_into(const ScalarField& f, ScalarField& out, VectorFieldMAC& scratch) {
    grad_into(f, scratch);
    div_into(scratch, out);
}

ScalarField laplacian(const ScalarField& f) {
    VectorFieldMAC scratch(f.grid);
    ScalarField out(f.grid);
    laplacian_into(f, out, scratch);
    return out;
}

namespace {
// du_x/dy at node (i,j), no-slip walls via odd ghost reflection.
double dudy_node(const VectorFieldMAC& u, int i, int j) {
    const GridSpec& g = u.grid;
    const double idy = 1.0 / g.dy();
    if (g.periodic()) {
        int jm = (j - 1 + g.ny) % g.ny;
        int jj = j % g.ny;
        return (u.x(i, jj) - u.x(i, jm)) * idy;
    }
    if (j == 0) return 2.0 * u.x(i, 0) * idy;
    if (j == g.ny) return -2.0 * u.x(i, g.ny - 1) * idy;
    return (u.x(i, j) - u.x(i, j - 1)) * idy;
}

double dvdx_node(const VectorFieldMAC& u, int i, int j) {
    const GridSpec& g = u.grid;
    const double idx = 1.0 / g.dx();
    if (g.periodic()) {
        int im = (i - 1 + g.nx) % g.nx;
        int ii = i % g.nx;
        return (u.y(ii, j) - u.y(im, j)) * idx;
    }
    if (i == 0) return 2.0 * u.y(0, j) * idx;
    if (i == g.nx) return -2.0 * u.y(g.nx - 1, j) * idx;
    return (u.y(i, j) - u.y(i - 1, j)) * idx;
}
} // namespace

ScalarField sym_grad_normsq(const VectorFieldMAC& u, const MaterialLaws& law,
                            const ScalarField& chi) {
    require_same_grid(u.grid, chi.grid, "sym_grad_normsq");
    const GridSpec& g = u.grid;
    const int nx = g.nx;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    ScalarField out(g);
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                double dudx = (u.x(i + 1, j) - u.x(i, j)) * idx;
                double dvdy = (u.y(i, j + 1) - u.y(i, j)) * idy;
                // off-diagonal terms averaged from the four surrounding nodes
                double cross = 0.25 * ((dudy_node(u, i, j) + dvdx_node(u, i, j)) +
                                       (dudy_node(u, i + 1, j) + dvdx_node(u, i + 1, j)) +
                                       (dudy_node(u, i, j + 1) + dvdx_node(u, i, j + 1)) +
                                       (dudy_node(u, i + 1, j + 1) + dvdx_node(u, i + 1, j + 1)));
                double dsq = dudx * dudx + dvdy * dvdy + 0.5 * cross * cross;
                out.at(i, j) = law.eta(chi.at(i, j)) * dsq;
            }
        }
    });
    return out;
}

double integrate(const ScalarField& f) {
    return pairwise_sum(f.v) * f.grid.cell_area();
}

double grad_l2sq(const ScalarField& f) {
    const GridSpec& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    VectorFieldMAC gr = grad(f);
    const int nxu = g.periodic() ? nx : nx + 1;
    const int nyu = g.periodic() ? ny : ny + 1;
    double sx = pairwise_sum_fn((size_t)nxu * ny, [&](size_t k) {
        int i = (int)(k % nxu), j = (int)(k / nxu);
        double v = gr.x(i, j);
        return v * v;
    });
    double sy = pairwise_sum_fn((size_t)nx * nyu, [&](size_t k) {
        int i = (int)(k % nx), j = (int)(k / nx);
        double v = gr.y(i, j);
        return v * v;
    });
    return (sx + sy) * g.cell_area();
}

void center_velocity(const VectorFieldMAC& u, ScalarField& ucx, ScalarField& ucy) {
    const GridSpec& g = u.grid;
    const int nx = g.nx;
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                ucx.at(i, j) = 0.5 * (u.x(i, j) + u.x(i + 1, j));
                ucy.at(i, j) = 0.5 * (u.y(i, j) + u.y(i, j + 1));
            }
        }
    });
}

} // namespace nsac
