#include "nsac/linsolve.hpp"

#include <cmath>
#include <string>

#include "nsac/reduce.hpp"

namespace nsac {

namespace {
void remove_mean(std::vector<double>& v) {
    double m = pairwise_sum(v) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
}
} // namespace

CgResult conjugate_gradient(const LinearOp& apply, const std::vector<double>& b,
                            std::vector<double>& x, const std::vector<double>* diag,
                            const CgOptions& opt) {
    LinearOp prec;
    if (diag) {
        const std::vector<double>* d = diag;
        prec = [d](const std::vector<double>& rr, std::vector<double>& zz) {
            for (size_t i = 0; i < rr.size(); ++i) zz[i] = rr[i] / (*d)[i];
        };
    } else {
        prec = [](const std::vector<double>& rr, std::vector<double>& zz) { zz = rr; };
    }
    return conjugate_gradient(apply, b, x, prec, opt);
}

CgResult conjugate_gradient(const LinearOp& apply, const std::vector<double>& b,
                            std::vector<double>& x, const LinearOp& precond,
                            const CgOptions& opt) {
    const size_t n = b.size();
    std::vector<double> r = b, z(n), p(n), ap(n);

    if (opt.remove_mean) remove_mean(r);
    const double bnorm = std::sqrt(pairwise_dot(r, r));

    // residual of the warm start
    apply(x, ap);
    for (size_t i = 0; i < n; ++i) r[i] -= ap[i];
    if (opt.remove_mean) remove_mean(r);

    const double floor = 1e-300;
    const double target = opt.tol * std::max(bnorm, floor);
    double rnorm = std::sqrt(pairwise_dot(r, r));
    if (rnorm <= target) return {0, bnorm > 0.0 ? rnorm / bnorm : 0.0};

    precond(r, z);
    p = z;
    double rz = pairwise_dot(r, z);

    for (int it = 1; it <= opt.max_iters; ++it) {
        apply(p, ap);
        double pap = pairwise_dot(p, ap);
        if (!(pap > 0.0))
            throw SolverError("cg: operator not positive definite (p^T A p = " +
                              std::to_string(pap) + ")");
        double alpha = rz / pap;
        for (size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if (opt.remove_mean && (it % 32) == 0) remove_mean(r);
        rnorm = std::sqrt(pairwise_dot(r, r));
        if (rnorm <= target) {
            if (opt.remove_mean) remove_mean(x);
            return {it, bnorm > 0.0 ? rnorm / bnorm : 0.0};
        }
        precond(r, z);
        double rz_new = pairwise_dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg: no convergence in " + std::to_string(opt.max_iters) +
                      " iterations, relative residual " +
                      std::to_string(bnorm > 0.0 ? rnorm / bnorm : rnorm));
}

} // namespace nsac
