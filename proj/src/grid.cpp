#include "nsac/grid.hpp"

#include <algorithm>
#include <cmath>

namespace nsac {

double ScalarField::min() const {
    double m = v[0];
    for (double x : v) m = std::min(m, x);
    return m;
}

double ScalarField::max() const {
    double m = v[0];
    for (double x : v) m = std::max(m, x);
    return m;
}

bool ScalarField::finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void VectorFieldMAC::sync_wrap() {
    const int nx = grid.nx, ny = grid.ny;
    for (int j = 0; j < ny; ++j) x(nx, j) = x(0, j);
    for (int i = 0; i < nx; ++i) y(i, ny) = y(i, 0);
}

void VectorFieldMAC::zero_normal_boundary() {
    const int nx = grid.nx, ny = grid.ny;
    for (int j = 0; j < ny; ++j) {
        x(0, j) = 0.0;
        x(nx, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        y(i, 0) = 0.0;
        y(i, ny) = 0.0;
    }
}

double VectorFieldMAC::max_abs() const {
    double m = 0.0;
    for (double u : ux) m = std::max(m, std::abs(u));
    for (double u : uy) m = std::max(m, std::abs(u));
    return m;
}

} // namespace nsac
