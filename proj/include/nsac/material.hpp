#ifndef NSAC_MATERIAL_HPP
#define NSAC_MATERIAL_HPP

#include <algorithm>
#include <cmath>

#include "nsac/grid.hpp"

namespace nsac {

// Viscosity/mobility profiles and the double-well potential.
//
// Profiles are the parametric family
//   eta(s) = eta_* + (eta^* - eta_*) * h((clamp(s,-1,1)+1)/2)
// with h the C^1 cubic smoothstep, so eta_* <= eta(s) <= eta^* globally.
// The potential is Landau: F(s) = (s^2-1)^2 / 4.
struct MaterialLaws {
    double eta_star{1.0}, eta_upper{1.0};
    double m_star{1.0}, m_upper{1.0};

    MaterialLaws() = default;
    MaterialLaws(double es, double eu, double ms, double mu)
        : eta_star(es), eta_upper(eu), m_star(ms), m_upper(mu) {
        if (!(es > 0.0) || !(eu >= es)) throw ConfigError("MaterialLaws: need 0 < eta_* <= eta^*");
        if (!(ms > 0.0) || !(mu >= ms)) throw ConfigError("MaterialLaws: need 0 < m_* <= m^*");
    }

    static double blend(double s) {
        double t = (std::clamp(s, -1.0, 1.0) + 1.0) * 0.5;
        return t * t * (3.0 - 2.0 * t);
    }

    double eta(double s) const { return eta_star + (eta_upper - eta_star) * blend(s); }
    double mob(double s) const { return m_star + (m_upper - m_star) * blend(s); }

    static double F(double s) {
        double q = s * s - 1.0;
        return 0.25 * q * q;
    }
    static double dF(double s) { return s * s * s - s; }
    static double d2F(double s) { return 3.0 * s * s - 1.0; }
};

} // namespace nsac

#endif
