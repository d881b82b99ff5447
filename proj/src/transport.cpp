#include "nsac/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsac/ops.hpp"
#include "nsac/reduce.hpp"

namespace nsac {

namespace {

double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

double vanleer(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return 2.0 * a * b / (a + b);
}

struct Workspace {
    ScalarField slope_x, slope_y;   // limited one-sided differences
    ScalarField rho_td;             // low-order (donor) update
    std::vector<double> flo_x, fhi_x, flo_y, fhi_y;
    std::vector<double> rplus, rminus;
};

} // namespace

ScalarField advect_density(const ScalarField& rho, const VectorFieldMAC& u, double dt,
                           Limiter limiter) {
    require_same_grid(rho.grid, u.grid, "advect_density");
    const GridSpec& g = rho.grid;
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();

    // Courant check, per cell (donor-cell convex-combination bound).
    double cmax = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double cx = std::max(std::abs(u.x(i, j)), std::abs(u.x(i + 1, j))) / dx;
            double cy = std::max(std::abs(u.y(i, j)), std::abs(u.y(i, j + 1))) / dy;
            cmax = std::max(cmax, (cx + cy) * dt);
        }
    if (cmax > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "advect_density: CFL violation, dt = " << dt
           << " gives Courant number " << cmax << " > 1 (limit dt = " << dt / cmax << ")";
        throw CflError(os.str());
    }

    // Divergence precondition.
    double umax = u.max_abs();
    if (umax > 0.0) {
        ScalarField d = div(u);
        double dinf = 0.0;
        for (double x : d.v) dinf = std::max(dinf, std::abs(x));
        if (dinf > 1e-6 * umax / std::min(dx, dy))
            throw ConfigError("advect_density: velocity is not divergence-free (||div u||_inf = " +
                              std::to_string(dinf) + ")");
    }

    auto lim = (limiter == Limiter::Minmod) ? minmod : vanleer;

    // Limited slopes (stored as undivided differences).
    ScalarField sx(g), sy(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double c = rho.at(i, j);
            sx.at(i, j) = lim(rho.ghost(i + 1, j) - c, c - rho.ghost(i - 1, j));
            sy.at(i, j) = lim(rho.ghost(i, j + 1) - c, c - rho.ghost(i, j - 1));
        }

    // Low- and high-order fluxes per face. For no-slip boxes the wall-normal
    // velocities are zero, so wall fluxes vanish identically.
    const size_t nxf = static_cast<size_t>(nx + 1) * ny;
    const size_t nyf = static_cast<size_t>(nx) * (ny + 1);
    std::vector<double> flo_x(nxf, 0.0), ant_x(nxf, 0.0);
    std::vector<double> flo_y(nyf, 0.0), ant_y(nyf, 0.0);

    auto cell = [&](int i, int j) { return rho.ghost(i, j); };
    auto slope_x_at = [&](int i, int j) {
        if (g.periodic()) return sx.at(((i % nx) + nx) % nx, j);
        if (i < 0 || i >= nx) return 0.0;
        return sx.at(i, j);
    };
    auto slope_y_at = [&](int i, int j) {
        if (g.periodic()) return sy.at(i, ((j % ny) + ny) % ny);
        if (j < 0 || j >= ny) return 0.0;
        return sy.at(i, j);
    };

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            double uf = u.x(i, j);
            if (uf == 0.0) continue;
            size_t id = static_cast<size_t>(j) * (nx + 1) + i;
            double nu = uf * dt / dx;
            double lo, hi;
            if (uf > 0.0) {
                lo = uf * cell(i - 1, j);
                hi = uf * (cell(i - 1, j) + 0.5 * (1.0 - nu) * slope_x_at(i - 1, j));
            } else {
                lo = uf * cell(i, j);
                hi = uf * (cell(i, j) - 0.5 * (1.0 + nu) * slope_x_at(i, j));
            }
            flo_x[id] = lo;
            ant_x[id] = hi - lo;
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double uf = u.y(i, j);
            if (uf == 0.0) continue;
            size_t id = static_cast<size_t>(j) * nx + i;
            double nu = uf * dt / dy;
            double lo, hi;
            if (uf > 0.0) {
                lo = uf * cell(i, j - 1);
                hi = uf * (cell(i, j - 1) + 0.5 * (1.0 - nu) * slope_y_at(i, j - 1));
            } else {
                lo = uf * cell(i, j);
                hi = uf * (cell(i, j) - 0.5 * (1.0 + nu) * slope_y_at(i, j));
            }
            flo_y[id] = lo;
            ant_y[id] = hi - lo;
        }

    auto fx = [&](const std::vector<double>& f, int i, int j) -> double {
        if (g.periodic() && i == nx) i = 0;          // wrap-consistent layer
        return f[static_cast<size_t>(j) * (nx + 1) + i];
    };
    auto fy = [&](const std::vector<double>& f, int i, int j) -> double {
        if (g.periodic() && j == ny) j = 0;
        return f[static_cast<size_t>(j) * nx + i];
    };

    // Donor-cell transported solution.
    ScalarField td(g);
    const double rx = dt / dx, ry = dt / dy;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            td.at(i, j) = rho.at(i, j) - rx * (fx(flo_x, i + 1, j) - fx(flo_x, i, j)) -
                          ry * (fy(flo_y, i, j + 1) - fy(flo_y, i, j));

    // Zalesak FCT limiting of the antidiffusive corrections.
    auto td_ghost = [&](int i, int j) {
        if (g.periodic()) return td.ghost(i, j);
        if (i < 0) i = 0;
        if (i >= nx) i = nx - 1;
        if (j < 0) j = 0;
        if (j >= ny) j = ny - 1;
        return td.at(i, j);
    };
    ScalarField rplus(g), rminus(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double wmax = td.at(i, j), wmin = td.at(i, j);
            auto consider = [&](double a) { wmax = std::max(wmax, a); wmin = std::min(wmin, a); };
            consider(rho.ghost(i, j));
            consider(td_ghost(i - 1, j));
            consider(td_ghost(i + 1, j));
            consider(td_ghost(i, j - 1));
            consider(td_ghost(i, j + 1));
            consider(rho.ghost(i - 1, j));
            consider(rho.ghost(i + 1, j));
            consider(rho.ghost(i, j - 1));
            consider(rho.ghost(i, j + 1));
            double pplus = rx * (std::max(0.0, fx(ant_x, i, j)) - std::min(0.0, fx(ant_x, i + 1, j))) +
                           ry * (std::max(0.0, fy(ant_y, i, j)) - std::min(0.0, fy(ant_y, i, j + 1)));
            double pminus = rx * (std::max(0.0, fx(ant_x, i + 1, j)) - std::min(0.0, fx(ant_x, i, j))) +
                            ry * (std::max(0.0, fy(ant_y, i, j + 1)) - std::min(0.0, fy(ant_y, i, j)));
            rplus.at(i, j) = pplus > 0.0 ? std::min(1.0, (wmax - td.at(i, j)) / pplus) : 1.0;
            rminus.at(i, j) = pminus > 0.0 ? std::min(1.0, (td.at(i, j) - wmin) / pminus) : 1.0;
        }
    auto rp = [&](int i, int j) {
        if (g.periodic()) { i = ((i % nx) + nx) % nx; j = ((j % ny) + ny) % ny; }
        else { i = std::clamp(i, 0, nx - 1); j = std::clamp(j, 0, ny - 1); }
        return rplus.at(i, j);
    };
    auto rm = [&](int i, int j) {
        if (g.periodic()) { i = ((i % nx) + nx) % nx; j = ((j % ny) + ny) % ny; }
        else { i = std::clamp(i, 0, nx - 1); j = std::clamp(j, 0, ny - 1); }
        return rminus.at(i, j);
    };

    std::vector<double> cfl_x(nxf, 0.0), cfl_y(nyf, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            size_t id = static_cast<size_t>(j) * (nx + 1) + i;
            double a = ant_x[id];
            // positive antidiffusive x-flux drains cell (i-1) and feeds cell (i)
            cfl_x[id] = (a >= 0.0) ? std::min(rm(i - 1, j), rp(i, j))
                                   : std::min(rp(i - 1, j), rm(i, j));
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            size_t id = static_cast<size_t>(j) * nx + i;
            double a = ant_y[id];
            cfl_y[id] = (a >= 0.0) ? std::min(rm(i, j - 1), rp(i, j))
                                   : std::min(rp(i, j - 1), rm(i, j));
        }

    ScalarField out(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            auto cax = [&](int ii) {
                int iw = (g.periodic() && ii == nx) ? 0 : ii;
                size_t id = static_cast<size_t>(j) * (nx + 1) + iw;
                return cfl_x[id] * ant_x[id];
            };
            auto cay = [&](int jj) {
                int jw = (g.periodic() && jj == ny) ? 0 : jj;
                size_t id = static_cast<size_t>(jw) * nx + i;
                return cfl_y[id] * ant_y[id];
            };
            out.at(i, j) = td.at(i, j) - rx * (cax(i + 1) - cax(i)) - ry * (cay(j + 1) - cay(j));
        }
    return out;
}

} // namespace nsac
