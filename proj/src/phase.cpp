#include "nsac/phase.hpp"

#include <cmath>

#include "nsac/ops.hpp"
#include "nsac/reduce.hpp"

namespace nsac {

ScalarField compute_mu(const ScalarField& rho, const ScalarField& chi,
                       const MaterialLaws& law) {
    (void)law;
    require_same_grid(rho.grid, chi.grid, "compute_mu");
    if (!(rho.min() > 0.0))
        throw ConfigError("compute_mu: density must be strictly positive");
    ScalarField lap = laplacian(chi);
    ScalarField mu(chi.grid);
    const size_t n = mu.v.size();
    parallel_for(n, [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i)
            mu.v[i] = (-lap.v[i] + rho.v[i] * MaterialLaws::dF(chi.v[i])) / rho.v[i];
    });
    return mu;
}

ScalarField upwind_grad_dot(const ScalarField& chi, const VectorFieldMAC& u) {
    require_same_grid(chi.grid, u.grid, "upwind_grad_dot");
    const GridSpec& g = chi.grid;
    const int nx = g.nx;
    const double idx2 = 1.0 / (2.0 * g.dx()), idy2 = 1.0 / (2.0 * g.dy());
    ScalarField out(g);
    parallel_for(g.ny, [&](size_t jlo, size_t jhi) {
        for (size_t jj = jlo; jj < jhi; ++jj) {
            int j = (int)jj;
            for (int i = 0; i < nx; ++i) {
                double uc = 0.5 * (u.x(i, j) + u.x(i + 1, j));
                double vc = 0.5 * (u.y(i, j) + u.y(i, j + 1));
                double c = chi.at(i, j);
                double ddx, ddy;
                if (uc >= 0.0)
                    ddx = (3.0 * c - 4.0 * chi.ghost(i - 1, j) + chi.ghost(i - 2, j)) * idx2;
                else
                    ddx = (-3.0 * c + 4.0 * chi.ghost(i + 1, j) - chi.ghost(i + 2, j)) * idx2;
                if (vc >= 0.0)
                    ddy = (3.0 * c - 4.0 * chi.ghost(i, j - 1) + chi.ghost(i, j - 2)) * idy2;
                else
                    ddy = (-3.0 * c + 4.0 * chi.ghost(i, j + 1) - chi.ghost(i, j + 2)) * idy2;
                out.at(i, j) = uc * ddx + vc * ddy;
            }
        }
    });
    return out;
}

ScalarField phase_step(const ScalarField& rho, const VectorFieldMAC& u,
                       const ScalarField& chi, const MaterialLaws& law, double dt,
                       const PhaseStepOptions& opt, int* cg_iters) {
    require_same_grid(rho.grid, chi.grid, "phase_step");
    if (!(dt > 0.0)) throw ConfigError("phase_step: dt must be > 0");
    if (!(rho.min() > 0.0))
        throw ConfigError("phase_step: density must be strictly positive");

    const GridSpec& g = chi.grid;
    const size_t n = chi.v.size();
    const double S = opt.stabilization;

    // diagonal coefficient rho^2/(m(chi^n) dt) + rho S, frozen at chi^n
    std::vector<double> dcoef(n);
    for (size_t i = 0; i < n; ++i) {
        double r = rho.v[i];
        dcoef[i] = r * r / (law.mob(chi.v[i]) * dt) + r * S;
    }

    ScalarField adv = upwind_grad_dot(chi, u);

    std::vector<double> b(n);
    for (size_t i = 0; i < n; ++i) {
        double r = rho.v[i];
        double m = law.mob(chi.v[i]);
        b[i] = r * r / (m * dt) * chi.v[i] - (r * r / m) * adv.v[i] -
               r * MaterialLaws::dF(chi.v[i]) + r * S * chi.v[i];
    }

    // operator [diag - lap], SPD
    ScalarField tmp(g);
    VectorFieldMAC scratch(g);
    ScalarField lap(g);
    LinearOp apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        tmp.v = x;
        laplacian_into(tmp, lap, scratch);
        for (size_t i = 0; i < n; ++i) y[i] = dcoef[i] * x[i] - lap.v[i];
    };
    std::vector<double> diag(n);
    const double lapdiag = 2.0 / (g.dx() * g.dx()) + 2.0 / (g.dy() * g.dy());
    for (size_t i = 0; i < n; ++i) diag[i] = dcoef[i] + lapdiag;

    ScalarField out = chi; // warm start
    CgOptions cgo;
    cgo.tol = opt.cg_tol;
    cgo.max_iters = opt.cg_max_iters;
    CgResult res = conjugate_gradient(apply, b, out.v, &diag, cgo);
    if (cg_iters) *cg_iters = res.iters;
    return out;
}

} // namespace nsac
