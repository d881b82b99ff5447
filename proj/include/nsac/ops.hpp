#ifndef NSAC_OPS_HPP
#define NSAC_OPS_HPP

#include "nsac/grid.hpp"
#include "nsac/material.hpp"

namespace nsac {

// Discrete differential operators on the MAC grid.
//
// grad and div are exact adjoints (up to boundary handling), and
// laplacian(f) == div(grad(f)) by construction, so the compatibility
// identity holds fieldwise to machine precision.

void grad_into(const ScalarField& f, VectorFieldMAC& out);
VectorFieldMAC grad(const ScalarField& f);

void div_into(const VectorFieldMAC& v, ScalarField& out);
ScalarField div(const VectorFieldMAC& v);

void laplacian_into(const ScalarField& f, ScalarField& out, VectorFieldMAC& scratch);
ScalarField laplacian(const ScalarField& f);

// Cell-centered eta(chi) |D u|^2, D u = (grad u + grad u^T)/2.
ScalarField sym_grad_normsq(const VectorFieldMAC& u, const MaterialLaws& law,
                            const ScalarField& chi);

// Midpoint-rule quadrature with deterministic pairwise summation.
double integrate(const ScalarField& f);

// Sum of squared face gradients of f times the cell area: the discrete
// Dirichlet energy dual to laplacian (periodic faces counted once).
double grad_l2sq(const ScalarField& f);

// Velocity components interpolated to cell centers.
void center_velocity(const VectorFieldMAC& u, ScalarField& ucx, ScalarField& ucy);

} // namespace nsac

#endif
