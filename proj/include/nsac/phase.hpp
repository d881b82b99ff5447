#ifndef NSAC_PHASE_HPP
#define NSAC_PHASE_HPP

#include "nsac/grid.hpp"
#include "nsac/linsolve.hpp"
#include "nsac/material.hpp"

namespace nsac {

// Chemical potential from rho*mu = -laplacian(chi) + rho*F'(chi).
// Throws ConfigError if rho is not strictly positive.
ScalarField compute_mu(const ScalarField& rho, const ScalarField& chi,
                       const MaterialLaws& law);

// Cell-centered (u . grad chi) by second-order upwind differences from the
// MAC faces (velocity averaged to centers, derivative biased by its sign).
ScalarField upwind_grad_dot(const ScalarField& chi, const VectorFieldMAC& u);

struct PhaseStepOptions {
    double stabilization = 2.0;   // S >= max_{|s|<=1} |F''| = 2
    double cg_tol = 1e-10;
    int cg_max_iters = 20000;
};

// One stabilized linearly-implicit step of the density-weighted Allen-Cahn
// equation  rho^2 chi_t + rho^2 u.grad chi = m(chi) lap chi - rho m(chi) F'(chi),
// divided by m(chi^n) so the implicit operator
//   [rho^2/(m dt) + rho S - lap]
// is symmetric positive definite (CG solve).
ScalarField phase_step(const ScalarField& rho, const VectorFieldMAC& u,
                       const ScalarField& chi, const MaterialLaws& law, double dt,
                       const PhaseStepOptions& opt = {}, int* cg_iters = nullptr);

} // namespace nsac

#endif
