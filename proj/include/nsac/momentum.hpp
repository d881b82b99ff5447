#ifndef NSAC_MOMENTUM_HPP
#define NSAC_MOMENTUM_HPP

#include "nsac/grid.hpp"
#include "nsac/material.hpp"
#include "nsac/state.hpp"

namespace nsac {

struct MomentumOptions {
    double cg_tol = 1e-10;
    int cg_max_iters = 20000;
};

// Capillary forcing -lap(chi) grad(chi) on the faces. The gradient part of
// -div(grad chi x grad chi) is absorbed into the augmented pressure.
VectorFieldMAC capillary_force(const ScalarField& chi);

// (u . grad) u at the faces, second-order upwind.
VectorFieldMAC advection_term(const VectorFieldMAC& u);

// Explicit half of the viscous stress: div(eta (grad u)^T) / 2.
VectorFieldMAC transpose_viscous_term(const VectorFieldMAC& u, const ScalarField& chi,
                                      const MaterialLaws& law);

// Solve [rho_f/dt - div(eta grad .)/2] u = rhs per component (SPD, CG).
// rhs carries the rho_f/dt u^n term and all explicit forces.
VectorFieldMAC solve_momentum_helmholtz(const VectorFieldMAC& rhs, const ScalarField& rho,
                                        const ScalarField& chi, const MaterialLaws& law,
                                        double dt, const MomentumOptions& opt = {},
                                        int* cg_iters_x = nullptr, int* cg_iters_y = nullptr);

// Predictor u*: explicit advection/capillary/transpose-stress/old-pressure
// gradient, implicit div(eta grad u)/2.
VectorFieldMAC predict_velocity(const State& state, const MaterialLaws& law, double dt,
                                const MomentumOptions& opt = {},
                                int* cg_iters_x = nullptr, int* cg_iters_y = nullptr);

struct ProjectionResult {
    VectorFieldMAC u;
    ScalarField phi;       // pressure increment, zero mean
    int cg_iters = 0;
    double div_inf = 0.0;  // max |div u| after correction
};

// Variable-density projection: solve div((1/rho) grad phi) = div(u*)/dt and
// correct u = u* - (dt/rho) grad phi. phi_guess (optional) warm-starts CG.
ProjectionResult pressure_project(const ScalarField& rho, const VectorFieldMAC& u_star,
                                  double dt, const MomentumOptions& opt = {},
                                  const ScalarField* phi_guess = nullptr);

} // namespace nsac

#endif
