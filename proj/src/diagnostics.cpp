#include "nsac/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nsac/ops.hpp"
#include "nsac/phase.hpp"
#include "nsac/reduce.hpp"

namespace nsac {

namespace {

double grad_sq_sum(const ScalarField& f) { return grad_l2sq(f); }

// Sum of squared first differences of both MAC components (discrete |grad u|^2).
double grad_u_sq_sum(const VectorFieldMAC& u) {
    const GridSpec& g = u.grid;
    const int nx = g.nx, ny = g.ny;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    const int nnx = g.periodic() ? nx : nx + 1;   // unique nodes per row
    const int nny = g.periodic() ? ny : ny + 1;
    // d(ux)/dx at cells, d(uy)/dy at cells
    double s = pairwise_sum_fn((size_t)nx * ny, [&](size_t k) {
        int i = (int)(k % nx), j = (int)(k / nx);
        double a = (u.x(i + 1, j) - u.x(i, j)) * idx;
        double b = (u.y(i, j + 1) - u.y(i, j)) * idy;
        return a * a + b * b;
    });
    // d(ux)/dy and d(uy)/dx at nodes
    s += pairwise_sum_fn((size_t)nnx * nny, [&](size_t k) {
        int i = (int)(k % nnx), j = (int)(k / nnx);
        double a = (u.xg(i, j) - u.xg(i, j - 1)) * idy;
        double b = (u.yg(i, j) - u.yg(i - 1, j)) * idx;
        return a * a + b * b;
    });
    return s * g.cell_area();
}

// Sum of squared second derivatives (chi_xx^2 + 2 chi_xy^2 + chi_yy^2).
double hessian_sq_sum(const ScalarField& f) {
    const GridSpec& g = f.grid;
    const int nx = g.nx, ny = g.ny;
    const double idx2 = 1.0 / (g.dx() * g.dx()), idy2 = 1.0 / (g.dy() * g.dy());
    const double idxy = 1.0 / (g.dx() * g.dy());
    double s = pairwise_sum_fn((size_t)nx * ny, [&](size_t k) {
        int i = (int)(k % nx), j = (int)(k / nx);
        double c = f.at(i, j);
        double fxx = (f.ghost(i + 1, j) - 2.0 * c + f.ghost(i - 1, j)) * idx2;
        double fyy = (f.ghost(i, j + 1) - 2.0 * c + f.ghost(i, j - 1)) * idy2;
        return fxx * fxx + fyy * fyy;
    });
    const int nnx = g.periodic() ? nx : nx + 1;
    const int nny = g.periodic() ? ny : ny + 1;
    s += 2.0 * pairwise_sum_fn((size_t)nnx * nny, [&](size_t k) {
        int i = (int)(k % nnx), j = (int)(k / nnx);
        double fxy = (f.ghost(i, j) - f.ghost(i - 1, j) - f.ghost(i, j - 1) +
                      f.ghost(i - 1, j - 1)) * idxy;
        return fxy * fxy;
    });
    return s * g.cell_area();
}

double l2sq_cells(const ScalarField& f) {
    return pairwise_dot(f.v, f.v) * f.grid.cell_area();
}

void centered(const VectorFieldMAC& u, ScalarField& cx, ScalarField& cy) {
    cx = ScalarField(u.grid);
    cy = ScalarField(u.grid);
    center_velocity(u, cx, cy);
}

} // namespace

double energy_E0(const State& state, const MaterialLaws& law) {
    const GridSpec& g = state.grid();
    ScalarField ucx, ucy;
    centered(state.u, ucx, ucy);
    double kin = pairwise_sum_fn(g.cells(), [&](size_t k) {
        return 0.5 * state.rho.v[k] * (ucx.v[k] * ucx.v[k] + ucy.v[k] * ucy.v[k]);
    }) * g.cell_area();
    double grad = 0.5 * grad_sq_sum(state.chi);
    double pot = pairwise_sum_fn(g.cells(), [&](size_t k) {
        return state.rho.v[k] * MaterialLaws::F(state.chi.v[k]);
    }) * g.cell_area();
    return kin + grad + pot;
}

std::pair<double, double> dissipation(const State& state, const MaterialLaws& law) {
    ScalarField dsq = sym_grad_normsq(state.u, law, state.chi);
    double visc = integrate(dsq);
    ScalarField mu = compute_mu(state.rho, state.chi, law);
    double chem = pairwise_sum_fn(mu.v.size(), [&](size_t k) {
        return law.mob(state.chi.v[k]) * mu.v[k] * mu.v[k];
    }) * state.grid().cell_area();
    return {visc, chem};
}

std::vector<double> energy_budget(const std::vector<DiagRecord>& series) {
    if (series.size() < 2)
        throw ConfigError("energy_budget: need at least 2 records");
    std::vector<double> r(series.size());
    double acc = 0.0;
    r[0] = 0.0;
    for (size_t n = 1; n < series.size(); ++n) {
        double dt = series[n].t - series[n - 1].t;
        acc += 0.5 * dt * (series[n].visc_diss + series[n].chem_diss +
                           series[n - 1].visc_diss + series[n - 1].chem_diss);
        r[n] = series[n].E0 + acc - series[0].E0;
    }
    return r;
}

std::vector<double> budget_rho_chi(const std::vector<DiagRecord>& series) {
    if (series.size() < 2)
        throw ConfigError("budget_rho_chi: need at least 2 records");
    std::vector<double> r(series.size());
    double acc = 0.0;
    r[0] = 0.0;
    for (size_t n = 1; n < series.size(); ++n) {
        double dt = series[n].t - series[n - 1].t;
        acc += 0.5 * dt * (series[n].int_m_mu + series[n - 1].int_m_mu);
        r[n] = series[n].mass_rhochi + acc - series[0].mass_rhochi;
    }
    return r;
}

DecayFunctionals decay_functionals(const State& state, const State& state_prev,
                                   double dt, const MaterialLaws& law) {
    if (!(dt > 0.0)) throw ConfigError("decay_functionals: dt must be > 0");
    require_same_grid(state.grid(), state_prev.grid(), "decay_functionals");
    const GridSpec& g = state.grid();
    const double da = g.cell_area();
    const size_t n = g.cells();

    ScalarField ucx, ucy;
    centered(state.u, ucx, ucy);
    double u_l2 = pairwise_sum_fn(n, [&](size_t k) {
        return ucx.v[k] * ucx.v[k] + ucy.v[k] * ucy.v[k];
    }) * da;
    double u_h1 = u_l2 + grad_u_sq_sum(state.u);

    ScalarField dtchi(g);
    for (size_t k = 0; k < n; ++k)
        dtchi.v[k] = (state.chi.v[k] - state_prev.chi.v[k]) / dt;
    double dtchi_l2 = l2sq_cells(dtchi);
    double dtchi_h1 = dtchi_l2 + grad_sq_sum(dtchi);

    double chi2m1 = pairwise_sum_fn(n, [&](size_t k) {
        double q = state.chi.v[k] * state.chi.v[k] - 1.0;
        return q * q;
    }) * da;
    double gchi_h1 = grad_sq_sum(state.chi) + hessian_sq_sum(state.chi);

    DecayFunctionals out;
    out.Ecal = u_h1 + chi2m1 + gchi_h1 + dtchi_l2;

    ScalarField pcx, pcy;
    centered(state_prev.u, pcx, pcy);
    double dtu_l2 = pairwise_sum_fn(n, [&](size_t k) {
        double a = (ucx.v[k] - pcx.v[k]) / dt;
        double b = (ucy.v[k] - pcy.v[k]) / dt;
        return a * a + b * b;
    }) * da;
    ScalarField mu = compute_mu(state.rho, state.chi, law);
    out.Dcal = dtu_l2 + u_h1 + dtchi_h1 + chi2m1 + gchi_h1 + l2sq_cells(mu);

    out.Acal = pairwise_sum_fn(n, [&](size_t k) {
        double r = state.rho.v[k];
        double q = state.chi.v[k] * state.chi.v[k] - 1.0;
        return r * (ucx.v[k] * ucx.v[k] + ucy.v[k] * ucy.v[k]) + r * q * q +
               r * r * q * q;
    }) * da + grad_sq_sum(state.chi);
    return out;
}

double higher_energy(const State& state, const State& state_prev, double dt,
                     const MaterialLaws& law) {
    if (!(dt > 0.0)) throw ConfigError("higher_energy: dt must be > 0");
    require_same_grid(state.grid(), state_prev.grid(), "higher_energy");
    const GridSpec& g = state.grid();
    double chit = pairwise_sum_fn(g.cells(), [&](size_t k) {
        double r = state.rho.v[k];
        double d = (state.chi.v[k] - state_prev.chi.v[k]) / dt;
        return 0.5 * r * r * d * d;
    }) * g.cell_area();
    ScalarField dsq = sym_grad_normsq(state.u, law, state.chi);
    return chit + 0.5 * integrate(dsq);
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                   double t_lo, double t_hi) {
    if (times.size() != values.size())
        throw ConfigError("decay_fit: times/values length mismatch");
    std::vector<double> ts, ys;
    for (size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_lo || times[k] > t_hi) continue;
        if (!(values[k] > 0.0))
            throw ConfigError("decay_fit: nonpositive value inside fit window");
        ts.push_back(times[k]);
        ys.push_back(std::log(values[k]));
    }
    if (ts.size() < 10)
        throw ConfigError("decay_fit: need at least 10 samples in window");

    const size_t m = ts.size();
    double tm = 0.0, ym = 0.0;
    for (size_t k = 0; k < m; ++k) { tm += ts[k]; ym += ys[k]; }
    tm /= (double)m;
    ym /= (double)m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t k = 0; k < m; ++k) {
        sxx += (ts[k] - tm) * (ts[k] - tm);
        sxy += (ts[k] - tm) * (ys[k] - ym);
        syy += (ys[k] - ym) * (ys[k] - ym);
    }
    DecayFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    if (syy <= 1e-28 * (double)m) {   // constant series
        fit.degenerate = true;
        return fit;
    }
    double slope = sxy / sxx;
    fit.sigma = -slope;
    double sse = syy - slope * sxy;
    fit.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
    return fit;
}

TwinDistance ws_distance(const State& a, const State& b) {
    require_same_grid(a.grid(), b.grid(), "ws_distance");
    const GridSpec& g = a.grid();
    const size_t n = g.cells();
    ScalarField acx, acy, bcx, bcy;
    centered(a.u, acx, acy);
    centered(b.u, bcx, bcy);
    ScalarField dchi(g);
    for (size_t k = 0; k < n; ++k) dchi.v[k] = a.chi.v[k] - b.chi.v[k];
    double s = pairwise_sum_fn(n, [&](size_t k) {
        double du = acx.v[k] - bcx.v[k], dv = acy.v[k] - bcy.v[k];
        double dc = dchi.v[k];
        double dr = a.rho.v[k] - b.rho.v[k];
        return a.rho.v[k] * (du * du + dv * dv) + dc * dc + dr * dr;
    }) * g.cell_area();
    s += grad_sq_sum(dchi);
    return {0.5 * s};
}

DiagRecord make_diag_record(const State& state, const State* state_prev, double dt,
                            const MaterialLaws& law) {
    const GridSpec& g = state.grid();
    DiagRecord r;
    r.t = state.t;
    r.E0 = energy_E0(state, law);
    auto [visc, chem] = dissipation(state, law);
    r.visc_diss = visc;
    r.chem_diss = chem;
    r.mass_rho = integrate(state.rho);
    r.mass_rhochi = pairwise_sum_fn(g.cells(), [&](size_t k) {
        return state.rho.v[k] * state.chi.v[k];
    }) * g.cell_area();
    ScalarField mu = compute_mu(state.rho, state.chi, law);
    r.int_m_mu = pairwise_sum_fn(g.cells(), [&](size_t k) {
        return law.mob(state.chi.v[k]) * mu.v[k];
    }) * g.cell_area();
    r.rho_min = state.rho.min();
    r.rho_max = state.rho.max();
    r.chi_min = state.chi.min();
    r.chi_max = state.chi.max();
    ScalarField dv = div(state.u);
    double dinf = 0.0;
    for (double x : dv.v) dinf = std::max(dinf, std::abs(x));
    r.div_inf = dinf;
    ScalarField ucx, ucy;
    centered(state.u, ucx, ucy);
    r.u_l2sq = pairwise_sum_fn(g.cells(), [&](size_t k) {
        return ucx.v[k] * ucx.v[k] + ucy.v[k] * ucy.v[k];
    }) * g.cell_area();
    r.gradchi_l2sq = grad_sq_sum(state.chi);
    r.chi2m1_l2sq = pairwise_sum_fn(g.cells(), [&](size_t k) {
        double q = state.chi.v[k] * state.chi.v[k] - 1.0;
        return q * q;
    }) * g.cell_area();
    if (state_prev) {
        DecayFunctionals f = decay_functionals(state, *state_prev, dt, law);
        r.Ecal = f.Ecal;
        r.Dcal = f.Dcal;
        r.Acal = f.Acal;
        r.H_higher = higher_energy(state, *state_prev, dt, law);
    } else {
        // no previous state: time-derivative terms enter as zero
        DecayFunctionals f = decay_functionals(state, state, 1.0, law);
        r.Ecal = f.Ecal;
        r.Dcal = f.Dcal;
        r.Acal = f.Acal;
        r.H_higher = higher_energy(state, state, 1.0, law);
    }
    return r;
}

} // namespace nsac
