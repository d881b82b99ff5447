#include "nsac/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsac/ops.hpp"
#include "nsac/reduce.hpp"

namespace nsac {

double cfl_dt(const State& state, const MaterialLaws& law, double cfl, double dt_max) {
    if (!(cfl > 0.0) || cfl > 1.0) throw ConfigError("cfl_dt: need 0 < cfl <= 1");
    if (!(dt_max > 0.0)) throw ConfigError("cfl_dt: dt_max must be > 0");
    const GridSpec& g = state.grid();
    const double dxm = std::min(g.dx(), g.dy());
    const double rho_lo = state.rho.min();
    if (!(rho_lo > 0.0)) throw ConfigError("cfl_dt: density must be strictly positive");

    double limit = std::numeric_limits<double>::infinity();
    double umax = state.u.max_abs();
    if (umax > 0.0) limit = dxm / umax;
    limit = std::min(limit, dxm * dxm * rho_lo * rho_lo / (4.0 * law.m_upper));
    limit = std::min(limit, rho_lo * dxm * dxm / (4.0 * law.eta_upper));
    return std::min(cfl * limit, dt_max);
}

StepReport step(State& state, const MaterialLaws& law, double dt, const StepOptions& opt,
                ScalarField* phi_warm) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
    // Work on copies; commit only after every sub-step succeeded.
    ScalarField rho = state.rho, chi = state.chi, p = state.p;
    VectorFieldMAC u = state.u;
    StepReport rep;
    rep.dt_used = dt;

    ProjectionResult proj;
    int cg_phase = 0, cgx = 0, cgy = 0;

    auto momentum_substeps = [&](const ScalarField& r, const ScalarField& c) {
        State pred;
        pred.t = state.t;
        pred.rho = r;
        pred.chi = c;
        pred.u = u;
        pred.p = p;
        pred.mu = state.mu;
        VectorFieldMAC ustar = predict_velocity(pred, law, dt, opt.momentum, &cgx, &cgy);
        proj = pressure_project(r, ustar, dt, opt.momentum, phi_warm);
        u = proj.u;
        for (size_t k = 0; k < p.v.size(); ++k) p.v[k] += proj.phi.v[k];
        double pm = pairwise_sum(p.v) / (double)p.v.size();
        for (double& v : p.v) v -= pm;
        if (phi_warm) *phi_warm = proj.phi;
    };

    if (opt.u_first) {
        momentum_substeps(rho, chi);
        rho = advect_density(state.rho, u, dt, opt.limiter);
        PhaseStepOptions po = opt.phase;
        chi = phase_step(rho, u, state.chi, law, dt, po, &cg_phase);
    } else {
        rho = advect_density(state.rho, state.u, dt, opt.limiter);
        chi = phase_step(rho, state.u, state.chi, law, dt, opt.phase, &cg_phase);
        momentum_substeps(rho, chi);
    }
    ScalarField mu = compute_mu(rho, chi, law);

    if (!rho.finite() || !chi.finite() || !mu.finite())
        throw SolverError("step: non-finite field after sub-steps");

    state.rho = std::move(rho);
    state.chi = std::move(chi);
    state.mu = std::move(mu);
    state.u = std::move(u);
    state.p = std::move(p);
    state.t += dt;

    rep.cg_phase = cg_phase;
    rep.cg_ux = cgx;
    rep.cg_uy = cgy;
    rep.cg_proj = proj.cg_iters;
    rep.rho_min = state.rho.min();
    rep.rho_max = state.rho.max();
    rep.chi_min = state.chi.min();
    rep.chi_max = state.chi.max();
    rep.div_inf = proj.div_inf;
    return rep;
}

RunResult run_simulation(const Config& cfg, const State* init) {
    MaterialLaws law = cfg.laws();
    RunResult out;
    State state = init ? *init : initial_state(cfg);
    state.mu = compute_mu(state.rho, state.chi, law);

    StepOptions opt;
    opt.phase.stabilization = cfg.stabilization;
    opt.phase.cg_tol = cfg.cg_tol;
    opt.phase.cg_max_iters = cfg.cg_maxiter;
    opt.momentum.cg_tol = cfg.cg_tol;
    opt.momentum.cg_max_iters = cfg.cg_maxiter;
    opt.limiter = cfg.limiter;
    opt.u_first = (cfg.order == "u_first");

    // Make the initial velocity discretely divergence-free.
    {
        ScalarField d = div(state.u);
        double dinf = 0.0;
        for (double v : d.v) dinf = std::max(dinf, std::abs(v));
        if (dinf > 1e-13 * std::max(1.0, state.u.max_abs())) {
            ProjectionResult pr = pressure_project(state.rho, state.u, 1.0, opt.momentum);
            state.u = pr.u;
        }
    }

    ScalarField phi_warm(state.grid());
    State prev = state;
    out.records.push_back(make_diag_record(state, nullptr, 1.0, law));
    if (cfg.snap_every > 0) out.snapshots.push_back(state);

    double last_dt = 1.0;
    int n = 0;
    const double t_end = cfg.t_end;
    while (state.t < t_end - 1e-12 * std::max(1.0, t_end)) {
        double dt = cfl_dt(state, law, cfg.cfl, cfg.dt_max);
        dt = std::min(dt, t_end - state.t);
        prev = state;
        step(state, law, dt, opt, &phi_warm);
        last_dt = dt;
        ++n;
        if (cfg.diag_every > 0 && n % cfg.diag_every == 0)
            out.records.push_back(make_diag_record(state, &prev, last_dt, law));
        if (cfg.snap_every > 0 && n % cfg.snap_every == 0)
            out.snapshots.push_back(state);
    }
    out.final_state = std::move(state);
    out.steps = n;
    return out;
}

} // namespace nsac
