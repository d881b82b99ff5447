#ifndef NSAC_DIAGNOSTICS_HPP
#define NSAC_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include "nsac/material.hpp"
#include "nsac/state.hpp"

namespace nsac {

// One diagnostics row; field order matches the frozen CSV schema.
struct DiagRecord {
    double t = 0.0;
    double E0 = 0.0;
    double visc_diss = 0.0;     // int eta(chi) |Du|^2
    double chem_diss = 0.0;     // int m(chi) mu^2
    double mass_rho = 0.0;      // int rho
    double mass_rhochi = 0.0;   // int rho chi
    double int_m_mu = 0.0;      // int m(chi) mu  (signed, for the rho*chi budget)
    double rho_min = 0.0, rho_max = 0.0;
    double chi_min = 0.0, chi_max = 0.0;
    double div_inf = 0.0;
    double u_l2sq = 0.0;
    double gradchi_l2sq = 0.0;
    double chi2m1_l2sq = 0.0;
    double Ecal = 0.0, Dcal = 0.0, Acal = 0.0;
    double H_higher = 0.0;
};

struct DecayFunctionals {
    double Ecal = 0.0;   // |u|_H1^2 + |chi^2-1|^2 + |grad chi|_H1^2 + |chi_t|^2
    double Dcal = 0.0;   // + |u_t|^2 + |chi_t|_H1^2 + |mu|^2
    double Acal = 0.0;   // int rho|u|^2 + |grad chi|^2 + rho|chi^2-1|^2 + rho^2|chi^2-1|^2
};

struct DecayFit {
    double sigma = 0.0;
    double r_squared = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    bool degenerate = false;   // constant series: sigma = 0, r^2 reported as 0
};

struct TwinDistance {
    double value = 0.0;
};

// Total energy int( rho|u|^2/2 + |grad chi|^2/2 + rho F(chi) ), velocity
// interpolated to cell centers, gradient summed over faces.
double energy_E0(const State& state, const MaterialLaws& law);

// (int eta(chi)|Du|^2, int m(chi) mu^2); mu recomputed from (rho, chi).
std::pair<double, double> dissipation(const State& state, const MaterialLaws& law);

// Budget residuals r(t_n) = E0(t_n) + trapezoid(visc+chem) - E0(0).
std::vector<double> energy_budget(const std::vector<DiagRecord>& series);

// Residuals of d/dt int(rho chi) + int m(chi) mu = 0:
// r(t_n) = mass_rhochi(t_n) - mass_rhochi(0) + trapezoid(int_m_mu).
std::vector<double> budget_rho_chi(const std::vector<DiagRecord>& series);

// Time derivatives by backward difference of two consecutive states.
DecayFunctionals decay_functionals(const State& state, const State& state_prev,
                                   double dt, const MaterialLaws& law);

// int rho^2 |chi_t|^2 / 2 + int eta |Du|^2 / 2.
double higher_energy(const State& state, const State& state_prev, double dt,
                     const MaterialLaws& law);

// Least-squares fit of ln(values) over times in [t_lo, t_hi]; sigma = -slope.
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& values,
                   double t_lo, double t_hi);

// (1/2) int( rho_a|u_a-u_b|^2 + |grad(chi_a-chi_b)|^2 + |chi_a-chi_b|^2 + |rho_a-rho_b|^2 ).
TwinDistance ws_distance(const State& a, const State& b);

// Assemble a full row. state_prev may be null (time-derivative terms zero).
DiagRecord make_diag_record(const State& state, const State* state_prev, double dt,
                            const MaterialLaws& law);

} // namespace nsac

#endif
