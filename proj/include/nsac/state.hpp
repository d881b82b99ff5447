#ifndef NSAC_STATE_HPP
#define NSAC_STATE_HPP

#include "nsac/grid.hpp"

namespace nsac {

// One time level of (rho, u, p, chi, mu). p is the augmented pressure
// (p + |grad chi|^2/2, pinned to zero mean); mu is derived from (rho, chi)
// after every step.
struct State {
    double t{0.0};
    ScalarField rho;
    VectorFieldMAC u;
    ScalarField p;
    ScalarField chi;
    ScalarField mu;

    State() = default;
    explicit State(const GridSpec& g)
        : rho(g, 1.0), u(g), p(g), chi(g), mu(g) {}

    const GridSpec& grid() const { return rho.grid; }
};

} // namespace nsac

#endif
