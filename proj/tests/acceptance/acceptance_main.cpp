// End-to-end acceptance harness: one pass/fail line per criterion.
// Exit code 0 iff every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nsac/diagnostics.hpp"
#include "nsac/galerkin.hpp"
#include "nsac/io.hpp"
#include "nsac/ops.hpp"
#include "nsac/spectral.hpp"
#include "nsac/stepper.hpp"
#include "nsac/transport.hpp"

using namespace nsac;

namespace {

bool g_all = true;

void line(const char* crit, const char* what, bool ok, double value) {
    std::printf("%s criterion %s: %s = %.6g\n", ok ? "PASS" : "FAIL", crit, what, value);
    g_all &= ok;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double max_abs_residual(const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
}

Config reference_config(int n, double dt) {
    Config c;
    c.nx = c.ny = n;
    c.bc = Bc::NoSlipBox;
    c.eta_star = 0.02;
    c.eta_upper = 0.05;
    c.m_star = 0.02;
    c.m_upper = 0.05;
    c.rho_init = "blob 1 2 0.5 0.5 0.2";
    c.chi_init = "tanhx 0.5 0.12";
    c.u_init = "zero";
    c.t_end = 2.0;
    c.dt_max = dt;
    c.diag_every = 10;
    return c;
}

struct GalerkinRun {
    double E0_init = 0.0;
    double worst_rate = 0.0;   // max over records of |r(t)| / t
};

GalerkinRun run_galerkin(double dt, double t_end) {
    GridSpec g(64, 64, 1.0, 1.0, Bc::PeriodicTorus);
    MaterialLaws law;
    auto modes = build_modes(4, 1.0, 1.0);
    std::vector<double> g0(modes.size());
    for (size_t q = 0; q < g0.size(); ++q)
        g0[q] = (q % 2 ? -1.0 : 1.0) * 2.0 / (1.0 + modes[q].eigenvalue);
    ScalarField rho(g, 1.0), chi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            chi.at(i, j) = 0.15 * std::sin(2.0 * M_PI * g.xc(i)) *
                           std::sin(2.0 * M_PI * g.yc(j));
    GalerkinSystem sys = make_system(g, law, 4, g0, rho, chi);
    std::vector<double> E{galerkin_energy(sys)}, inc;
    const int steps = (int)std::llround(t_end / dt);
    for (int n = 0; n < steps; ++n) {
        auto info = galerkin_step(sys, dt);
        E.push_back(galerkin_energy(sys));
        inc.push_back(info.visc_increment + info.chem_increment);
    }
    std::vector<double> r = energy_identity_residual(E, inc);
    GalerkinRun out;
    out.E0_init = E.front();
    for (int n = 1; n <= steps; ++n)
        out.worst_rate = std::max(out.worst_rate, std::abs(r[n]) / (n * dt));
    return out;
}

void oracle_suite() {
    double t0 = now_s();
    bool ok = true;
    double worst = 0.0;

    // spectral differentiation against the analytic derivative
    {
        GridSpec g(32, 32, 1.0, 1.0, Bc::PeriodicTorus);
        ScalarField f(g), fx(g), fy(g);
        const double k = 2.0 * M_PI * 3.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) = std::sin(k * g.xc(i)) * std::cos(k * g.yc(j));
        spectral_gradient(f, fx, fy);
        double e = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                e = std::max(e, std::abs(fx.at(i, j) - k * std::cos(k * g.xc(i)) *
                                                           std::cos(k * g.yc(j))));
        ok &= e <= 1e-10;
        worst = std::max(worst, e);
    }
    // circular shift transport
    {
        GridSpec g(32, 32, 1.0, 1.0, Bc::PeriodicTorus);
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> un(1.0, 2.0);
        ScalarField rho(g);
        for (double& v : rho.v) v = un(rng);
        VectorFieldMAC u(g);
        for (double& v : u.ux) v = 1.0;
        ScalarField out = advect_density(rho, u, g.dx());
        double e = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                e = std::max(e, std::abs(out.at(i, j) - rho.ghost(i - 1, j)));
        ok &= e <= 1e-13;
        worst = std::max(worst, e);
    }
    // closed-form scalar mode decay in the spectral velocity system
    {
        GridSpec g(32, 32, 1.0, 1.0, Bc::PeriodicTorus);
        MaterialLaws law;
        auto modes = build_modes(1, 1.0, 1.0);
        std::vector<double> g0(modes.size(), 0.0);
        g0[0] = 0.1;
        GalerkinSystem sys =
            make_system(g, law, 1, g0, ScalarField(g, 1.0), ScalarField(g, 1.0));
        const double dt = 1e-3;
        for (int n = 0; n < 100; ++n) galerkin_step(sys, dt);
        const double c = 0.5 * law.eta(1.0) * modes[0].eigenvalue;
        double e = std::abs(sys.g[0] - 0.1 * std::exp(-c * 0.1));
        ok &= e <= 1e-5;
        worst = std::max(worst, e);
    }
    // grid-search fit oracle
    {
        std::vector<double> t, v;
        for (int k = 0; k <= 100; ++k) {
            t.push_back(0.1 * k);
            v.push_back(0.7 * std::exp(-1.3 * 0.1 * k));
        }
        DecayFit fit = decay_fit(t, v, 1.0, 8.0);
        double best = 1e300, bs = 0.0;
        for (int si = 0; si <= 2000; ++si) {
            double sg = 1.0 + si * 3e-4;
            double mean = 0.0;
            int cnt = 0;
            for (size_t k = 0; k < t.size(); ++k)
                if (t[k] >= 1.0 && t[k] <= 8.0) { mean += std::log(v[k]) + sg * t[k]; ++cnt; }
            mean /= cnt;
            double obj = 0.0;
            for (size_t k = 0; k < t.size(); ++k)
                if (t[k] >= 1.0 && t[k] <= 8.0) {
                    double e = std::log(v[k]) - (mean - sg * t[k]);
                    obj += e * e;
                }
            if (obj < best) { best = obj; bs = sg; }
        }
        double e = std::abs(fit.sigma - bs);
        ok &= e <= 5e-4;
        worst = std::max(worst, e);
    }
    // refined quadrature
    {
        auto f = [](double x, double y) {
            return std::exp(std::sin(2.0 * M_PI * x)) + std::cos(2.0 * M_PI * y);
        };
        double vals[2];
        int idx = 0;
        for (int n : {64, 128}) {
            GridSpec g(n, n, 1.0, 1.0, Bc::PeriodicTorus);
            ScalarField s(g);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) s.at(i, j) = f(g.xc(i), g.yc(j));
            vals[idx++] = integrate(s);
        }
        double e = std::abs(vals[0] - vals[1]);
        ok &= e <= 1e-10;
        worst = std::max(worst, e);
    }
    double elapsed = now_s() - t0;
    line("9", "oracle suite max deviation", ok, worst);
    line("9", "oracle suite wall seconds (<= 600)", elapsed <= 600.0, elapsed);
}

} // namespace

int main() {
    // ---- criterion 8: pointwise identities (cheap, first) ----
    {
        double worst = 0.0;
        const double h = 1e-6;
        for (double s : {-1.2, -0.6, 0.0, 0.4, 1.0}) {
            worst = std::max(worst,
                             std::abs((MaterialLaws::F(s + h) - MaterialLaws::F(s - h)) /
                                          (2 * h) -
                                      MaterialLaws::dF(s)));
            worst = std::max(worst,
                             std::abs((MaterialLaws::dF(s + h) - MaterialLaws::dF(s - h)) /
                                          (2 * h) -
                                      MaterialLaws::d2F(s)));
        }
        line("8", "potential finite differences (<= 1e-8)", worst <= 1e-8, worst);
    }

    // ---- criterion 9: oracle equivalence suite ----
    oracle_suite();

    // ---- criterion 2: spectral-velocity energy identity ----
    {
        double t0 = now_s();
        GalerkinRun full = run_galerkin(1e-3, 1.0);
        GalerkinRun half = run_galerkin(5e-4, 1.0);
        double elapsed = now_s() - t0;
        line("2", "|r(t)|/t at dt=1e-3 (<= 1e-4 E0)",
             full.worst_rate <= 1e-4 * full.E0_init, full.worst_rate);
        double ratio = full.worst_rate / half.worst_rate;
        line("2", "dt-halving residual ratio (in [3.2, 4.8])",
             ratio >= 3.2 && ratio <= 4.8, ratio);
        line("2", "wall seconds (<= 180)", elapsed <= 180.0, elapsed);
    }

    // ---- criterion 5: exponential decay of a small-data run ----
    {
        Config c;
        c.nx = c.ny = 32;
        c.bc = Bc::NoSlipBox;
        c.chi_init = "nearone 0.01";
        c.t_end = 8.0;
        c.dt_max = 0.01;
        c.cg_tol = 1e-12;
        c.diag_every = 20;
        RunResult rr = run_simulation(c);
        const auto& recs = rr.records;
        double small0 = std::sqrt(recs[0].u_l2sq) + std::sqrt(recs[0].chi2m1_l2sq) +
                        std::sqrt(recs[0].gradchi_l2sq);
        line("5", "initial data smallness (<= 0.05)", small0 <= 0.05, small0);
        std::vector<double> ts, qs;
        for (const auto& r : recs) {
            ts.push_back(r.t);
            qs.push_back(r.u_l2sq + r.chi2m1_l2sq + r.gradchi_l2sq);
        }
        DecayFit fit = decay_fit(ts, qs, 1.0, 6.0);
        line("5", "sigma > 0", !fit.degenerate && fit.sigma > 0.0, fit.sigma);
        line("5", "r^2 (>= 0.99)", fit.r_squared >= 0.99, fit.r_squared);
        auto q_at = [&](double t) {
            size_t best = 0;
            for (size_t k = 1; k < ts.size(); ++k)
                if (std::abs(ts[k] - t) < std::abs(ts[best] - t)) best = k;
            return qs[best];
        };
        double ratio = q_at(6.0) / q_at(1.0);
        line("5", "q(6)/q(1) (<= 0.2)", ratio <= 0.2, ratio);
        double worst_rise = 0.0;
        for (size_t k = 1; k < recs.size(); ++k)
            worst_rise = std::max(worst_rise, recs[k].Acal - recs[k - 1].Acal);
        line("5", "A(t) monotone nonincreasing", worst_rise <= 1e-12 * recs[0].Acal,
             worst_rise);
    }

    // ---- criterion 6: twin-run weak-strong stability ----
    {
        Config c = reference_config(64, 3e-4);
        c.t_end = 1.0;
        State base = initial_state(c);
        ScalarField bump(base.grid());
        for (int j = 0; j < c.ny; ++j)
            for (int i = 0; i < c.nx; ++i)
                bump.at(i, j) = std::cos(M_PI * base.grid().xc(i)) *
                                std::cos(M_PI * base.grid().yc(j));
        RunResult rb = run_simulation(c, &base);
        double d0[2], dT[2];
        const double deltas[2] = {1e-3, 1e-4};
        for (int k = 0; k < 2; ++k) {
            State pert = base;
            for (size_t q = 0; q < pert.chi.v.size(); ++q)
                pert.chi.v[q] += deltas[k] * bump.v[q];
            d0[k] = std::sqrt(ws_distance(base, pert).value);
            RunResult rp = run_simulation(c, &pert);
            dT[k] = std::sqrt(ws_distance(rb.final_state, rp.final_state).value);
        }
        double ratio = dT[0] / dT[1];
        line("6", "distance ratio across deltas (in [5, 20])",
             ratio >= 5.0 && ratio <= 20.0, ratio);
        line("6", "growth at delta=1e-3 (<= 100x)", dT[0] <= 100.0 * d0[0],
             dT[0] / d0[0]);
        line("6", "growth at delta=1e-4 (<= 100x)", dT[1] <= 100.0 * d0[1],
             dT[1] / d0[1]);
    }

    // ---- reference runs at two resolutions (criteria 1, 3, 4, 7, 8) ----
    {
        Config cA = reference_config(64, 3e-4);
        RunResult A = run_simulation(cA);
        double t0 = now_s();
        Config cB = reference_config(128, 1.5e-4);
        RunResult B = run_simulation(cB);
        double elapsedB = now_s() - t0;

        // criterion 1: energy budget residual + refinement decay
        double rA = max_abs_residual(energy_budget(A.records));
        double rB = max_abs_residual(energy_budget(B.records));
        double E00 = B.records.front().E0;
        line("1", "budget residual at 128^2 (<= 0.05 E0)", rB <= 0.05 * E00, rB / E00);
        line("1", "residual refinement ratio (>= 1.8)", rA / rB >= 1.8, rA / rB);
        line("1", "reference run wall seconds (<= 300)", elapsedB <= 300.0, elapsedB);

        // criterion 3: maximum principle, mass, incompressibility
        double expand = 0.0;
        const auto& recs = B.records;
        for (const auto& r : recs) {
            expand = std::max(expand, recs.front().rho_min - r.rho_min);
            expand = std::max(expand, r.rho_max - recs.front().rho_max);
        }
        line("3", "rho extrema expansion (<= 1e-12)",
             expand <= 1e-12 * recs.front().rho_max, expand);
        double mdrift = 0.0;
        for (const auto& r : recs)
            mdrift = std::max(mdrift, std::abs(r.mass_rho - recs.front().mass_rho));
        mdrift /= std::abs(recs.front().mass_rho);
        line("3", "mass relative drift (<= 1e-10)", mdrift <= 1e-10, mdrift);
        double dworst = 0.0;
        bool div_ok = true;
        for (const auto& r : recs) {
            double scale = 1e-8 * std::max(1.0, std::sqrt(r.u_l2sq)) / cB.grid().dx();
            div_ok &= r.div_inf <= scale;
            dworst = std::max(dworst, r.div_inf);
        }
        line("3", "div u inf (<= 1e-8 scaled)", div_ok, dworst);

        // criterion 4: comparison principle surrogate
        auto overshoot = [](const std::vector<DiagRecord>& rs) {
            double o = 0.0;
            for (const auto& r : rs)
                o = std::max({o, std::abs(r.chi_min) - 1.0, std::abs(r.chi_max) - 1.0});
            return std::max(o, 0.0);
        };
        double oA = overshoot(A.records), oB = overshoot(B.records);
        line("4", "max |chi|-1 at 64^2 (<= 1e-3)", oA <= 1e-3, oA);
        line("4", "refined overshoot (<= 0.5x coarse)", oB <= 0.5 * oA + 1e-15, oB);

        // criterion 7: rho-chi budget refinement
        double cAres = max_abs_residual(budget_rho_chi(A.records));
        double cBres = max_abs_residual(budget_rho_chi(B.records));
        line("7", "rho-chi budget refinement ratio (>= 1.8)", cAres / cBres >= 1.8,
             cAres / cBres);

        // criterion 8: chemical-potential identity on the evolved state
        ScalarField mu = compute_mu(B.final_state.rho, B.final_state.chi, cB.laws());
        ScalarField lap = laplacian(B.final_state.chi);
        double scale = 0.0, resid = 0.0;
        for (size_t k = 0; k < mu.v.size(); ++k)
            scale = std::max(scale, std::abs(B.final_state.rho.v[k] * mu.v[k]));
        for (size_t k = 0; k < mu.v.size(); ++k)
            resid = std::max(resid,
                             std::abs(B.final_state.rho.v[k] * mu.v[k] + lap.v[k] -
                                      B.final_state.rho.v[k] *
                                          MaterialLaws::dF(B.final_state.chi.v[k])));
        line("8", "rho mu identity residual (<= 1e-12 scaled)",
             resid <= 1e-12 * std::max(1.0, scale), resid);
    }

    std::printf("%s\n", g_all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return g_all ? 0 : 1;
}
