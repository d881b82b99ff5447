#include "nsac/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "nsac/linsolve.hpp"
#include "nsac/ops.hpp"
#include "nsac/reduce.hpp"
#include "nsac/spectral.hpp"

namespace nsac {

namespace {

// Ghost accessors for MAC components: periodic wrap on the torus; on the box
// odd reflection (normal component about the wall face, tangential component
// about the wall line, consistent with the no-slip value 0 on the wall).
struct UxGhost {
    const VectorFieldMAC& u;
    double operator()(int i, int j) const {
        const GridSpec& g = u.grid;
        const int nx = g.nx, ny = g.ny;
        if (g.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
            return u.x(i, j);
        }
        double s = 1.0;
        if (i < 0) { i = -i; s = -s; }
        if (i > nx) { i = 2 * nx - i; s = -s; }
        if (j < 0) { j = -j - 1; s = -s; }
        if (j > ny - 1) { j = 2 * ny - 1 - j; s = -s; }
        return s * u.x(i, j);
    }
};

struct UyGhost {
    const VectorFieldMAC& u;
    double operator()(int i, int j) const {
        const GridSpec& g = u.grid;
        const int nx = g.nx, ny = g.ny;
        if (g.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
            return u.y(i, j);
        }
        double s = 1.0;
        if (j < 0) { j = -j; s = -s; }
        if (j > ny) { j = 2 * ny - j; s = -s; }
        if (i < 0) { i = -i - 1; s = -s; }
        if (i > nx - 1) { i = 2 * nx - 1 - i; s = -s; }
        return s * u.y(i, j);
    }
};

double upwind2(double c, double m1, double m2, double p1, double p2, double vel,
               double inv2h) {
    if (vel >= 0.0) return (3.0 * c - 4.0 * m1 + m2) * inv2h;
    return (-3.0 * c + 4.0 * p1 - p2) * inv2h;
}

// rho averaged to an x-face / y-face.
double rho_xface(const ScalarField& rho, int i, int j) {
    return 0.5 * (rho.ghost(i - 1, j) + rho.ghost(i, j));
}
double rho_yface(const ScalarField& rho, int i, int j) {
    return 0.5 * (rho.ghost(i, j - 1) + rho.ghost(i, j));
}

// eta at a grid node (cell corner), averaged from the four touching cells.
double eta_node(const ScalarField& chi, const MaterialLaws& law, int i, int j) {
    return 0.25 * (law.eta(chi.ghost(i - 1, j - 1)) + law.eta(chi.ghost(i, j - 1)) +
                   law.eta(chi.ghost(i - 1, j)) + law.eta(chi.ghost(i, j)));
}

} // namespace

VectorFieldMAC capillary_force(const ScalarField& chi) {
    const GridSpec& g = chi.grid;
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();
    ScalarField lap = laplacian(chi);
    VectorFieldMAC f(g);
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i <= nx; ++i)
                f.x(i, j) = -0.5 * (lap.ghost(i - 1, j) + lap.ghost(i, j)) *
                            (chi.ghost(i, j) - chi.ghost(i - 1, j)) / dx;
        }
    });
    parallel_for(g.ny + 1, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i)
                f.y(i, j) = -0.5 * (lap.ghost(i, j - 1) + lap.ghost(i, j)) *
                            (chi.ghost(i, j) - chi.ghost(i, j - 1)) / dy;
        }
    });
    (void)ny;
    return f;
}

VectorFieldMAC advection_term(const VectorFieldMAC& u) {
    const GridSpec& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double i2dx = 1.0 / (2.0 * g.dx()), i2dy = 1.0 / (2.0 * g.dy());
    UxGhost UX{u};
    UyGhost UY{u};
    VectorFieldMAC a(g);

    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i <= nx; ++i) {
                if (!g.periodic() && (i == 0 || i == nx)) { a.x(i, j) = 0.0; continue; }
                double uc = u.x(i, j);
                double vc = 0.25 * (UY(i - 1, j) + UY(i, j) + UY(i - 1, j + 1) + UY(i, j + 1));
                double ddx = upwind2(uc, UX(i - 1, j), UX(i - 2, j), UX(i + 1, j),
                                     UX(i + 2, j), uc, i2dx);
                double ddy = upwind2(uc, UX(i, j - 1), UX(i, j - 2), UX(i, j + 1),
                                     UX(i, j + 2), vc, i2dy);
                a.x(i, j) = uc * ddx + vc * ddy;
            }
        }
    });
    parallel_for(g.ny + 1, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                if (!g.periodic() && (j == 0 || j == ny)) { a.y(i, j) = 0.0; continue; }
                double vc = u.y(i, j);
                double uc = 0.25 * (UX(i, j - 1) + UX(i + 1, j - 1) + UX(i, j) + UX(i + 1, j));
                double ddx = upwind2(vc, UY(i - 1, j), UY(i - 2, j), UY(i + 1, j),
                                     UY(i + 2, j), uc, i2dx);
                double ddy = upwind2(vc, UY(i, j - 1), UY(i, j - 2), UY(i, j + 1),
                                     UY(i, j + 2), vc, i2dy);
                a.y(i, j) = uc * ddx + vc * ddy;
            }
        }
    });
    if (g.periodic()) a.sync_wrap();
    return a;
}

VectorFieldMAC transpose_viscous_term(const VectorFieldMAC& u, const ScalarField& chi,
                                      const MaterialLaws& law) {
    require_same_grid(u.grid, chi.grid, "transpose_viscous_term");
    const GridSpec& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();
    UxGhost UX{u};
    UyGhost UY{u};
    auto etac = [&](int i, int j) { return law.eta(chi.ghost(i, j)); };
    VectorFieldMAC f(g);

    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i <= nx; ++i) {
                if (!g.periodic() && (i == 0 || i == nx)) { f.x(i, j) = 0.0; continue; }
                // d/dx(eta du/dx), eta and du/dx at cell centers
                double tR = etac(i, j) * (UX(i + 1, j) - UX(i, j)) / dx;
                double tL = etac(i - 1, j) * (UX(i, j) - UX(i - 1, j)) / dx;
                // d/dy(eta dv/dx), eta and dv/dx at nodes
                double qT = eta_node(chi, law, i, j + 1) * (UY(i, j + 1) - UY(i - 1, j + 1)) / dx;
                double qB = eta_node(chi, law, i, j) * (UY(i, j) - UY(i - 1, j)) / dx;
                f.x(i, j) = 0.5 * ((tR - tL) / dx + (qT - qB) / dy);
            }
        }
    });
    parallel_for(g.ny + 1, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                if (!g.periodic() && (j == 0 || j == ny)) { f.y(i, j) = 0.0; continue; }
                double tT = etac(i, j) * (UY(i, j + 1) - UY(i, j)) / dy;
                double tB = etac(i, j - 1) * (UY(i, j) - UY(i, j - 1)) / dy;
                double qR = eta_node(chi, law, i + 1, j) * (UX(i + 1, j) - UX(i + 1, j - 1)) / dy;
                double qL = eta_node(chi, law, i, j) * (UX(i, j) - UX(i, j - 1)) / dy;
                f.y(i, j) = 0.5 * ((tT - tB) / dy + (qR - qL) / dx);
            }
        }
    });
    if (g.periodic()) f.sync_wrap();
    return f;
}

namespace {

// Helmholtz solve for one MAC component. Unknowns are the unique faces
// (periodic: nx*ny; box: interior faces, walls pinned to zero through
// identity rows). The operator rho_f/dt - div(eta grad .)/2 is SPD; the
// tangential wall ghost u(-1) = -u(0) keeps symmetry.
struct ComponentSolve {
    const GridSpec& g;
    bool xcomp;
    const ScalarField& rho;
    const ScalarField& chi;
    const MaterialLaws& law;
    double dt;

    int ni() const { return g.periodic() ? g.nx : (xcomp ? g.nx + 1 : g.nx); }
    int nj() const { return g.periodic() ? g.ny : (xcomp ? g.ny : g.ny + 1); }
    size_t idx(int i, int j) const { return (size_t)j * ni() + i; }
    bool wall(int i, int j) const {
        if (g.periodic()) return false;
        return xcomp ? (i == 0 || i == g.nx) : (j == 0 || j == g.ny);
    }

    double rho_face(int i, int j) const {
        return xcomp ? rho_xface(rho, i, j) : rho_yface(rho, i, j);
    }
    // viscosity at the two stencil positions: along the component direction it
    // sits at cell centers, transverse at nodes
    double eta_along(int i, int j) const {
        return law.eta(chi.ghost(i, j));
    }
    double eta_trans(int i, int j) const { return eta_node(chi, law, i, j); }

    // value of the unknown vector at (i, j) with ghosts
    double at(const std::vector<double>& v, int i, int j) const {
        const int nx = g.nx, ny = g.ny;
        if (g.periodic()) {
            i = ((i % nx) + nx) % nx;
            j = ((j % ny) + ny) % ny;
            return v[idx(i, j)];
        }
        double s = 1.0;
        if (xcomp) {
            if (i < 0 || i > nx) return 0.0; // beyond a pinned wall face
            if (j < 0) { j = -j - 1; s = -1.0; }
            if (j > ny - 1) { j = 2 * ny - 1 - j; s = -1.0; }
        } else {
            if (j < 0 || j > ny) return 0.0;
            if (i < 0) { i = -i - 1; s = -1.0; }
            if (i > nx - 1) { i = 2 * nx - 1 - i; s = -1.0; }
        }
        return s * v[idx(i, j)];
    }

    void apply(const std::vector<double>& v, std::vector<double>& y) const {
        const double dx = g.dx(), dy = g.dy();
        const int NI = ni(), NJ = nj();
        parallel_for((size_t)NJ, [&](size_t jlo, size_t jhi) {
            for (size_t jj = jlo; jj < jhi; ++jj) {
                int j = (int)jj;
                for (int i = 0; i < NI; ++i) {
                    size_t id = idx(i, j);
                    if (wall(i, j)) { y[id] = v[id]; continue; }
                    double c = v[id];
                    double lap;
                    if (xcomp) {
                        double fR = eta_along(i, j) * (at(v, i + 1, j) - c) / dx;
                        double fL = eta_along(i - 1, j) * (c - at(v, i - 1, j)) / dx;
                        double fT = eta_trans(i, j + 1) * (at(v, i, j + 1) - c) / dy;
                        double fB = eta_trans(i, j) * (c - at(v, i, j - 1)) / dy;
                        lap = (fR - fL) / dx + (fT - fB) / dy;
                    } else {
                        double fT = eta_along(i, j) * (at(v, i, j + 1) - c) / dy;
                        double fB = eta_along(i, j - 1) * (c - at(v, i, j - 1)) / dy;
                        double fR = eta_trans(i + 1, j) * (at(v, i + 1, j) - c) / dx;
                        double fL = eta_trans(i, j) * (c - at(v, i - 1, j)) / dx;
                        lap = (fT - fB) / dy + (fR - fL) / dx;
                    }
                    y[id] = rho_face(i, j) / dt * c - 0.5 * lap;
                }
            }
        });
    }

    std::vector<double> jacobi_diag() const {
        const double dx2 = g.dx() * g.dx(), dy2 = g.dy() * g.dy();
        const int NI = ni(), NJ = nj(), nx = g.nx, ny = g.ny;
        std::vector<double> d((size_t)NI * NJ);
        for (int j = 0; j < NJ; ++j)
            for (int i = 0; i < NI; ++i) {
                size_t id = idx(i, j);
                if (wall(i, j)) { d[id] = 1.0; continue; }
                double a, t;
                if (xcomp) {
                    a = (eta_along(i, j) + eta_along(i - 1, j)) / dx2;
                    // odd reflection across a wall doubles that link
                    double cB = (!g.periodic() && j == 0) ? 2.0 : 1.0;
                    double cT = (!g.periodic() && j == ny - 1) ? 2.0 : 1.0;
                    t = (cT * eta_trans(i, j + 1) + cB * eta_trans(i, j)) / dy2;
                } else {
                    a = (eta_along(i, j) + eta_along(i, j - 1)) / dy2;
                    double cL = (!g.periodic() && i == 0) ? 2.0 : 1.0;
                    double cR = (!g.periodic() && i == nx - 1) ? 2.0 : 1.0;
                    t = (cR * eta_trans(i + 1, j) + cL * eta_trans(i, j)) / dx2;
                }
                d[id] = rho_face(i, j) / dt + 0.5 * (a + t);
            }
        return d;
    }
};

} // namespace

VectorFieldMAC solve_momentum_helmholtz(const VectorFieldMAC& rhs, const ScalarField& rho,
                                        const ScalarField& chi, const MaterialLaws& law,
                                        double dt, const MomentumOptions& opt,
                                        int* cg_iters_x, int* cg_iters_y) {
    require_same_grid(rhs.grid, rho.grid, "solve_momentum_helmholtz");
    require_same_grid(rhs.grid, chi.grid, "solve_momentum_helmholtz");
    if (!(dt > 0.0)) throw ConfigError("solve_momentum_helmholtz: dt must be > 0");
    if (!(rho.min() > 0.0))
        throw ConfigError("solve_momentum_helmholtz: density must be strictly positive");
    const GridSpec& g = rhs.grid;
    VectorFieldMAC out(g);
    CgOptions cgo;
    cgo.tol = opt.cg_tol;
    cgo.max_iters = opt.cg_max_iters;

    for (int comp = 0; comp < 2; ++comp) {
        bool xc = (comp == 0);
        ComponentSolve cs{g, xc, rho, chi, law, dt};
        const int NI = cs.ni(), NJ = cs.nj();
        std::vector<double> b((size_t)NI * NJ), x((size_t)NI * NJ);
        for (int j = 0; j < NJ; ++j)
            for (int i = 0; i < NI; ++i) {
                size_t id = cs.idx(i, j);
                double bv = xc ? rhs.x(i, j) : rhs.y(i, j);
                double x0 = 0.0; // warm start from the rhs scaled back to velocity
                if (!cs.wall(i, j)) x0 = bv * dt / cs.rho_face(i, j);
                else bv = 0.0;
                b[id] = bv;
                x[id] = x0;
            }
        LinearOp apply = [&](const std::vector<double>& v, std::vector<double>& y) {
            cs.apply(v, y);
        };
        std::vector<double> diag = cs.jacobi_diag();
        CgResult res = conjugate_gradient(apply, b, x, &diag, cgo);
        if (xc && cg_iters_x) *cg_iters_x = res.iters;
        if (!xc && cg_iters_y) *cg_iters_y = res.iters;
        for (int j = 0; j < NJ; ++j)
            for (int i = 0; i < NI; ++i) {
                if (xc) out.x(i, j) = x[cs.idx(i, j)];
                else out.y(i, j) = x[cs.idx(i, j)];
            }
    }
    if (g.periodic()) out.sync_wrap();
    else out.zero_normal_boundary();
    return out;
}

VectorFieldMAC predict_velocity(const State& state, const MaterialLaws& law, double dt,
                                const MomentumOptions& opt, int* cg_iters_x,
                                int* cg_iters_y) {
    const GridSpec& g = state.grid();
    VectorFieldMAC adv = advection_term(state.u);
    VectorFieldMAC cap = capillary_force(state.chi);
    VectorFieldMAC tve = transpose_viscous_term(state.u, state.chi, law);
    VectorFieldMAC gp = grad(state.p);

    VectorFieldMAC rhs(g);
    const int nx = g.nx, ny = g.ny;
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i <= nx; ++i) {
                double rf = rho_xface(state.rho, i, j);
                rhs.x(i, j) = rf / dt * state.u.x(i, j) - rf * adv.x(i, j) + cap.x(i, j) -
                              gp.x(i, j) + tve.x(i, j);
            }
        }
    });
    parallel_for(g.ny + 1, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                double rf = rho_yface(state.rho, i, j);
                rhs.y(i, j) = rf / dt * state.u.y(i, j) - rf * adv.y(i, j) + cap.y(i, j) -
                              gp.y(i, j) + tve.y(i, j);
            }
        }
    });
    (void)ny;
    return solve_momentum_helmholtz(rhs, state.rho, state.chi, law, dt, opt,
                                    cg_iters_x, cg_iters_y);
}

ProjectionResult pressure_project(const ScalarField& rho, const VectorFieldMAC& u_star,
                                  double dt, const MomentumOptions& opt,
                                  const ScalarField* phi_guess) {
    require_same_grid(rho.grid, u_star.grid, "pressure_project");
    if (!(dt > 0.0)) throw ConfigError("pressure_project: dt must be > 0");
    if (!(rho.min() > 0.0))
        throw ConfigError("pressure_project: density must be strictly positive");
    const GridSpec& g = rho.grid;
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();

    // 1/rho on the faces; zero on box walls (no flux through the wall).
    VectorFieldMAC beta(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            beta.x(i, j) = (!g.periodic() && (i == 0 || i == nx))
                               ? 0.0
                               : 1.0 / rho_xface(rho, i, j);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            beta.y(i, j) = (!g.periodic() && (j == 0 || j == ny))
                               ? 0.0
                               : 1.0 / rho_yface(rho, i, j);

    const size_t n = g.cells();
    ScalarField tmp(g);
    VectorFieldMAC gw(g);
    ScalarField dv(g);
    // A phi = -div(beta grad phi), SPD on the zero-mean subspace
    LinearOp apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        tmp.v = x;
        grad_into(tmp, gw);
        const int NX = nx;
        parallel_for(ny, [&](size_t jlo, size_t jhi) {
            for (size_t jj = jlo; jj < jhi; ++jj) {
                int j = (int)jj;
                for (int i = 0; i <= NX; ++i) gw.x(i, j) *= beta.x(i, j);
            }
        });
        parallel_for(ny + 1, [&](size_t jlo, size_t jhi) {
            for (size_t jj = jlo; jj < jhi; ++jj) {
                int j = (int)jj;
                for (int i = 0; i < NX; ++i) gw.y(i, j) *= beta.y(i, j);
            }
        });
        div_into(gw, dv);
        for (size_t k = 0; k < n; ++k) y[k] = -dv.v[k];
    };

    std::vector<double> diag(n);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            diag[(size_t)j * nx + i] = (beta.x(i, j) + beta.x(i + 1, j)) / (dx * dx) +
                                       (beta.y(i, j) + beta.y(i, j + 1)) / (dy * dy);

    ScalarField divu = div(u_star);
    std::vector<double> b(n);
    for (size_t k = 0; k < n; ++k) b[k] = -divu.v[k] / dt;

    ProjectionResult res{u_star, ScalarField(g), 0, 0.0};
    if (phi_guess) {
        require_same_grid(phi_guess->grid, g, "pressure_project");
        res.phi = *phi_guess;
    }
    CgOptions cgo;
    cgo.tol = opt.cg_tol;
    cgo.max_iters = opt.cg_max_iters;
    cgo.remove_mean = true;
    // constant-coefficient FFT/DCT solve as preconditioner; one per grid,
    // beta0 fixed at first use (valid since the density extrema cannot expand)
    static std::mutex pc_mutex;
    static std::map<std::tuple<int, int, double, double, int>,
                    std::unique_ptr<PoissonPreconditioner>> pc_cache;
    PoissonPreconditioner* pc = nullptr;
    {
        std::lock_guard<std::mutex> lock(pc_mutex);
        auto key = std::make_tuple(nx, ny, g.lx, g.ly, (int)g.bc);
        auto it = pc_cache.find(key);
        if (it == pc_cache.end()) {
            double beta0 = 0.5 * (1.0 / rho.min() + 1.0 / rho.max());
            it = pc_cache.emplace(key, std::make_unique<PoissonPreconditioner>(g, beta0))
                     .first;
        }
        pc = it->second.get();
    }
    LinearOp prec = [pc](const std::vector<double>& rr, std::vector<double>& zz) {
        pc->apply(rr, zz);
    };
    CgResult cg = conjugate_gradient(apply, b, res.phi.v, prec, cgo);
    res.cg_iters = cg.iters;

    VectorFieldMAC gphi = grad(res.phi);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            res.u.x(i, j) = u_star.x(i, j) - dt * beta.x(i, j) * gphi.x(i, j);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            res.u.y(i, j) = u_star.y(i, j) - dt * beta.y(i, j) * gphi.y(i, j);
    if (g.periodic()) res.u.sync_wrap();
    else res.u.zero_normal_boundary();

    ScalarField dfinal = div(res.u);
    double dinf = 0.0;
    for (double v : dfinal.v) dinf = std::max(dinf, std::abs(v));
    res.div_inf = dinf;
    return res;
}

} // namespace nsac
