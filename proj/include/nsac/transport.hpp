#ifndef NSAC_TRANSPORT_HPP
#define NSAC_TRANSPORT_HPP

#include "nsac/grid.hpp"

namespace nsac {

enum class Limiter { Minmod, VanLeer };

// Conservative finite-volume transport of rho by a (discretely) divergence-free
// MAC velocity: MUSCL reconstruction with a TVD limiter, time-centered fluxes,
// and an FCT clip of the antidiffusive corrections so the discrete maximum
// principle holds to roundoff. Exact shift at Courant 1 with constant velocity.
//
// Preconditions (checked):
//   - Courant number (|ux|/dx + |uy|/dy) * dt <= 1 (+eps); violation throws
//     CflError naming the offending dt and the limit.
//   - ||div u||_inf <= 1e-6 * |u|_max / min(dx, dy).
ScalarField advect_density(const ScalarField& rho, const VectorFieldMAC& u, double dt,
                           Limiter limiter = Limiter::Minmod);

} // namespace nsac

#endif
