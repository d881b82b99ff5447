#ifndef NSAC_SPECTRAL_HPP
#define NSAC_SPECTRAL_HPP

#include <memory>
#include <vector>

#include "nsac/grid.hpp"

namespace nsac {

// Fourier-spectral derivatives of cell-centered fields on the periodic torus.
// Throws ConfigError on non-periodic grids.

void spectral_gradient(const ScalarField& f, ScalarField& fx, ScalarField& fy);
ScalarField spectral_laplacian(const ScalarField& f);

// Exact inverse of -beta0 * lap_h on the grid's natural boundary conditions:
// FFT on the torus, DCT (homogeneous Neumann, matching the cell-centered
// ghost reflection) on the box. The constant mode is projected out, so apply()
// is SPD on the zero-mean subspace. Intended as a CG preconditioner for
// variable-coefficient Poisson operators.
class PoissonPreconditioner {
public:
    PoissonPreconditioner(const GridSpec& grid, double beta0);
    ~PoissonPreconditioner();
    PoissonPreconditioner(const PoissonPreconditioner&) = delete;
    PoissonPreconditioner& operator=(const PoissonPreconditioner&) = delete;

    void apply(const std::vector<double>& r, std::vector<double>& z) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace nsac

#endif
