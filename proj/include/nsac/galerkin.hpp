#ifndef NSAC_GALERKIN_HPP
#define NSAC_GALERKIN_HPP

#include <array>
#include <vector>

#include "nsac/grid.hpp"
#include "nsac/material.hpp"
#include "nsac/phase.hpp"
#include "nsac/transport.hpp"

namespace nsac {

// One divergence-free Fourier velocity mode on the torus:
//   w(x) = norm_const * direction * trig(k_phys . x),
// trig = cos or sin, direction = k_perp/|k|, k_phys = 2*pi*(kx/lx, ky/ly).
struct FourierMode {
    int kx = 0, ky = 0;      // integer wavevector, canonical rep of {k, -k}
    bool sine = false;       // parity: false = cos, true = sin
    double dirx = 0.0, diry = 0.0;
    double norm_const = 0.0; // sqrt(2/|Omega|)
    double eigenvalue = 0.0; // |k_phys|^2 (Stokes eigenvalue)
};

// All modes with 0 < |k|^2 <= k_max^2, one wavevector per {k,-k} pair
// (kx > 0, or kx == 0 and ky > 0), both parities.
std::vector<FourierMode> build_modes(int k_max, double lx = 1.0, double ly = 1.0);

using Mat = std::vector<double>;   // dense row-major m x m

// Spectral velocity + grid (rho, chi) companions with precomputed mode
// tables: values and gradients at cell centers, and a discretely
// divergence-free face sampling (discrete curl of the node streamfunction)
// used for density transport.
struct GalerkinSystem {
    GridSpec grid;
    MaterialLaws law;
    std::vector<FourierMode> modes;
    std::vector<double> g;     // coefficients
    ScalarField rho, chi;
    double t = 0.0;

    // tables, one row per mode, cells() entries each
    std::vector<std::vector<double>> wxc, wyc;                   // values
    std::vector<std::vector<double>> dwxdx, dwxdy, dwydx, dwydy; // gradients
    std::vector<VectorFieldMAC> wf;                              // face sampling

    Mat A;                     // cached A(rho) at the current time level

    size_t nmodes() const { return modes.size(); }
};

GalerkinSystem make_system(const GridSpec& grid, const MaterialLaws& law, int k_max,
                           const std::vector<double>& g0, const ScalarField& rho0,
                           const ScalarField& chi0);

// u_g on the MAC faces (discretely divergence-free) and at cell centers.
VectorFieldMAC sample_velocity_faces(const GalerkinSystem& sys,
                                     const std::vector<double>& g);
void sample_velocity_centers(const GalerkinSystem& sys, const std::vector<double>& g,
                             ScalarField& ucx, ScalarField& ucy);

// A_jk = int rho w_j . w_k   (SPD for rho >= rho_* > 0)
Mat assemble_A(const ScalarField& rho, const GalerkinSystem& sys);
// C_jk = int eta(chi) D w_j : grad w_k
Mat assemble_C(const ScalarField& chi, const GalerkinSystem& sys,
               const MaterialLaws& law);
// B[j][k][l] = int rho (w_k . grad) w_l . w_j  (test scale; O(m^3) entries)
std::vector<double> assemble_B(const ScalarField& rho, const GalerkinSystem& sys);
inline double b_entry(const std::vector<double>& B, size_t m, size_t j, size_t k,
                      size_t l) {
    return B[(j * m + k) * m + l];
}

// Skew-symmetrized advection action: b_j = (1/2) int rho [ (u.grad)u . w_j
// - (u.grad)w_j . u ], u = sum a_i w_i. Exactly energy-neutral: a . b(a) = 0.
std::vector<double> skew_advection(const ScalarField& rho, const GalerkinSystem& sys,
                                   const std::vector<double>& a);

// f_j = int (grad chi x grad chi) : grad w_j  (spectral gradients)
std::vector<double> capillary_rhs(const ScalarField& chi, const GalerkinSystem& sys);

// Dense LU solve with partial pivoting (deterministic).
std::vector<double> dense_solve(Mat M, std::vector<double> b);

struct GalerkinStepInfo {
    double visc_increment = 0.0;   // dt * int eta(chi_mid) |D u_mid|^2
    double chem_increment = 0.0;   // dt * int m(chi_mid) mu_mid^2
    int cg_iters = 0;
    int sweeps = 0;
};

struct GalerkinStepOptions {
    int sweeps = 3;           // fixed-point sweeps around the implicit midpoint
    double cg_tol = 1e-12;
    int cg_max_iters = 20000;
    Limiter limiter = Limiter::Minmod;
};

// Implicit-midpoint step of the coupled coefficient ODE + grid transport +
// phase equation. Discrete energy identity holds to O(dt^3) per step for
// constant density.
GalerkinStepInfo galerkin_step(GalerkinSystem& sys, double dt,
                               const GalerkinStepOptions& opt = {});

// E0 of the spectral/grid composite state: g'A(rho)g/2 + |grad chi|^2/2
// + int rho F(chi).
double galerkin_energy(const GalerkinSystem& sys);

// r(t_n) = E0(t_n) + cumulative dissipation - E0(0); diss_increments[n] is
// the dissipation of step n (between records n-1 and n).
std::vector<double> energy_identity_residual(const std::vector<double>& E0_series,
                                             const std::vector<double>& diss_increments);

// Sampled coefficient trajectory for characteristic tracing.
struct GSample {
    double t = 0.0;
    std::vector<double> g;
};

// RK4 integration of dX/dt = u(X, t) with g linearly interpolated in t.
std::array<double, 2> trace_characteristic(const std::vector<FourierMode>& modes,
                                           const std::vector<GSample>& series,
                                           std::array<double, 2> x0, double t0,
                                           double t1, double dt);

} // namespace nsac

#endif
