#ifndef NSAC_STEPPER_HPP
#define NSAC_STEPPER_HPP

#include <vector>

#include "nsac/config.hpp"
#include "nsac/diagnostics.hpp"
#include "nsac/momentum.hpp"
#include "nsac/phase.hpp"
#include "nsac/state.hpp"
#include "nsac/transport.hpp"

namespace nsac {

struct StepReport {
    double dt_used = 0.0;
    int cg_phase = 0, cg_ux = 0, cg_uy = 0, cg_proj = 0;
    double rho_min = 0.0, rho_max = 0.0;
    double chi_min = 0.0, chi_max = 0.0;
    double div_inf = 0.0;
};

struct StepOptions {
    PhaseStepOptions phase;
    MomentumOptions momentum;
    Limiter limiter = Limiter::Minmod;
    bool u_first = false;   // alternative coupling order (time.order = u_first)
};

// dt = min(cfl * min(dx/|u|max, dx^2 rho_*^2 / (4 m^*), rho_* dx^2 / (4 eta^*)),
//          dt_max), the diffusive limits from the worst-case coefficient
// bounds so only |u|max depends on the current solution.
double cfl_dt(const State& state, const MaterialLaws& law, double cfl, double dt_max);

// One splitting step: advect rho -> phase step (old u, new rho) -> mu ->
// velocity predictor (new rho, chi) -> projection. Transactional: on error
// the input state is left unmodified. phi_warm, when given, warm-starts the
// pressure solve and receives the new increment.
StepReport step(State& state, const MaterialLaws& law, double dt,
                const StepOptions& opt = {}, ScalarField* phi_warm = nullptr);

struct RunResult {
    std::vector<DiagRecord> records;
    std::vector<State> snapshots;
    State final_state;
    int steps = 0;
};

// Step from the configured initial data to t_end, recording diagnostics every
// diag_every steps (row 0 is the initial state) and snapshots every
// snap_every steps. Deterministic for a fixed config.
RunResult run_simulation(const Config& cfg, const State* init = nullptr);

} // namespace nsac

#endif
