#ifndef NSAC_CONFIG_HPP
#define NSAC_CONFIG_HPP

#include <string>

#include "nsac/grid.hpp"
#include "nsac/material.hpp"
#include "nsac/state.hpp"
#include "nsac/transport.hpp"

namespace nsac {

// Parsed, validated run configuration (line-oriented `section.key = value`
// files; see cli_io for the grammar). Field defaults are the documented
// config defaults.
struct Config {
    // [grid]
    int nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    Bc bc = Bc::NoSlipBox;

    // [physics]
    double eta_star = 1.0, eta_upper = 1.0;
    double m_star = 1.0, m_upper = 1.0;
    std::string rho_init = "constant 1";
    std::string chi_init = "constant 1";
    std::string u_init = "zero";

    // [time]
    double t_end = 1.0;
    double cfl = 0.5;
    double dt_max = 0.01;
    std::string order = "rho_first";   // or "u_first"

    // [numerics]
    double cg_tol = 1e-10;
    int cg_maxiter = 20000;
    double stabilization = 2.0;
    Limiter limiter = Limiter::Minmod;

    // [output]
    int diag_every = 10;
    int snap_every = 0;    // 0 disables snapshots
    std::string outdir = "out";

    // [experiment]
    std::string kind = "run";   // run | galerkin | decay | twin | check
    int k_max = 4;
    double delta = 1e-3;        // twin perturbation amplitudes
    double delta2 = 1e-4;
    double fit_lo = 1.0;        // decay-fit window
    double fit_hi = 6.0;
    std::string g_init = "zero";   // galerkin coefficients: zero | single <i> <amp> | bands <amp>
    double exp_dt = 1e-3;          // fixed galerkin step size

    GridSpec grid() const { return GridSpec(nx, ny, lx, ly, bc); }
    MaterialLaws laws() const { return MaterialLaws(eta_star, eta_upper, m_star, m_upper); }
};

// Build (rho, u, chi) from the init-spec strings. Understood specs:
//   scalar fields: "constant <v>", "blob <base> <amp> <cx> <cy> <r>",
//                  "tanhx <x0> <w>", "sine <amp> <kx> <ky>", "nearone <eps>"
//   velocity:      "zero", "taylorgreen <amp> <k>" (requires dx == dy)
// Validates rho > 0 and |chi| <= 1 after sampling.
State initial_state(const Config& cfg);

} // namespace nsac

#endif
