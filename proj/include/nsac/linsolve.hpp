#ifndef NSAC_LINSOLVE_HPP
#define NSAC_LINSOLVE_HPP

#include <functional>
#include <vector>

#include "nsac/grid.hpp"

namespace nsac {

using LinearOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct CgOptions {
    double tol = 1e-10;     // relative to ||b||
    int max_iters = 20000;
    // Project constants out of b, x and the running residual (singular
    // Neumann/periodic Poisson operators).
    bool remove_mean = false;
};

struct CgResult {
    int iters = 0;
    double rel_residual = 0.0;
};

// Preconditioned conjugate gradient for SPD operators. `diag`, when non-null,
// is the operator diagonal used as a Jacobi preconditioner. Deterministic:
// all inner products are fixed-tree pairwise reductions.
// Throws SolverError if max_iters is reached.
CgResult conjugate_gradient(const LinearOp& apply, const std::vector<double>& b,
                            std::vector<double>& x, const std::vector<double>* diag,
                            const CgOptions& opt);

// Same, with a general SPD preconditioner z = M^{-1} r.
CgResult conjugate_gradient(const LinearOp& apply, const std::vector<double>& b,
                            std::vector<double>& x, const LinearOp& prec,
                            const CgOptions& opt);

} // namespace nsac

#endif
