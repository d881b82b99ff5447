#include "nsac/spectral.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace nsac {

namespace {

std::mutex fftw_mutex; // FFTW planning is not thread-safe

// Forward r2c transform, derivative multipliers applied by `mul`, inverse.
template <class Mul>
void spectral_apply(const ScalarField& f, ScalarField& out, Mul mul) {
    if (!f.grid.periodic())
        throw ConfigError("spectral derivatives require a periodic grid");
    const int nx = f.grid.nx, ny = f.grid.ny;
    const int nkx = nx / 2 + 1;
    std::vector<double> in(f.v);
    std::vector<std::complex<double>> fh((size_t)ny * nkx);

    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_plan p = fftw_plan_dft_r2c_2d(ny, nx, in.data(),
                                           reinterpret_cast<fftw_complex*>(fh.data()),
                                           FFTW_ESTIMATE);
        fftw_execute(p);
        fftw_destroy_plan(p);
    }

    const double kx0 = 2.0 * M_PI / f.grid.lx, ky0 = 2.0 * M_PI / f.grid.ly;
    for (int j = 0; j < ny; ++j) {
        int kj = (j <= ny / 2) ? j : j - ny;
        for (int i = 0; i < nkx; ++i) {
            double kx = kx0 * i, ky = ky0 * kj;
            // the unmatched Nyquist mode carries no usable derivative phase
            if (2 * i == nx) kx = 0.0;
            if (2 * kj == ny || 2 * kj == -ny) ky = 0.0;
            fh[(size_t)j * nkx + i] *= mul(kx, ky);
        }
    }

    out = ScalarField(f.grid);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        fftw_plan p = fftw_plan_dft_c2r_2d(ny, nx,
                                           reinterpret_cast<fftw_complex*>(fh.data()),
                                           out.v.data(), FFTW_ESTIMATE);
        fftw_execute(p);
        fftw_destroy_plan(p);
    }
    const double scale = 1.0 / ((double)nx * ny);
    for (double& v : out.v) v *= scale;
}

} // namespace

void spectral_gradient(const ScalarField& f, ScalarField& fx, ScalarField& fy) {
    spectral_apply(f, fx, [](double kx, double) { return std::complex<double>(0.0, kx); });
    spectral_apply(f, fy, [](double, double ky) { return std::complex<double>(0.0, ky); });
}

ScalarField spectral_laplacian(const ScalarField& f) {
    ScalarField out;
    spectral_apply(f, out, [](double kx, double ky) {
        return std::complex<double>(-(kx * kx + ky * ky), 0.0);
    });
    return out;
}

struct PoissonPreconditioner::Impl {
    GridSpec grid;
    double beta0;
    // eigenvalues of -lap_h per wavenumber, separable in x and y
    std::vector<double> lam_x, lam_y;
    mutable std::vector<double> buf;        // real work array (box)
    mutable std::vector<std::complex<double>> cbuf; // spectral array (torus)
    fftw_plan fwd = nullptr, inv = nullptr;
    double norm = 1.0;

    Impl(const GridSpec& g, double b0) : grid(g), beta0(b0) {
        if (!(beta0 > 0.0))
            throw ConfigError("PoissonPreconditioner: beta0 must be > 0");
        const int nx = g.nx, ny = g.ny;
        const double dx = g.dx(), dy = g.dy();
        buf.resize((size_t)nx * ny);
        std::lock_guard<std::mutex> lock(fftw_mutex);
        if (g.periodic()) {
            const int nkx = nx / 2 + 1;
            cbuf.resize((size_t)ny * nkx);
            fwd = fftw_plan_dft_r2c_2d(ny, nx, buf.data(),
                                       reinterpret_cast<fftw_complex*>(cbuf.data()),
                                       FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_2d(ny, nx,
                                       reinterpret_cast<fftw_complex*>(cbuf.data()),
                                       buf.data(), FFTW_ESTIMATE);
            norm = 1.0 / ((double)nx * ny);
            lam_x.resize(nkx);
            for (int i = 0; i < nkx; ++i)
                lam_x[i] = (2.0 - 2.0 * std::cos(2.0 * M_PI * i / nx)) / (dx * dx);
            lam_y.resize(ny);
            for (int j = 0; j < ny; ++j)
                lam_y[j] = (2.0 - 2.0 * std::cos(2.0 * M_PI * j / ny)) / (dy * dy);
        } else {
            // DCT-II forward / DCT-III inverse diagonalize the cell-centered
            // homogeneous-Neumann 5-point laplacian
            fwd = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), FFTW_REDFT10,
                                   FFTW_REDFT10, FFTW_ESTIMATE);
            inv = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), FFTW_REDFT01,
                                   FFTW_REDFT01, FFTW_ESTIMATE);
            norm = 1.0 / (4.0 * (double)nx * ny);
            lam_x.resize(nx);
            for (int i = 0; i < nx; ++i)
                lam_x[i] = (2.0 - 2.0 * std::cos(M_PI * i / nx)) / (dx * dx);
            lam_y.resize(ny);
            for (int j = 0; j < ny; ++j)
                lam_y[j] = (2.0 - 2.0 * std::cos(M_PI * j / ny)) / (dy * dy);
        }
    }

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }
};

PoissonPreconditioner::PoissonPreconditioner(const GridSpec& grid, double beta0)
    : impl_(std::make_unique<Impl>(grid, beta0)) {}

PoissonPreconditioner::~PoissonPreconditioner() = default;

void PoissonPreconditioner::apply(const std::vector<double>& r,
                                  std::vector<double>& z) const {
    Impl& s = *impl_;
    const int nx = s.grid.nx, ny = s.grid.ny;
    if (r.size() != s.buf.size())
        throw ConfigError("PoissonPreconditioner: size mismatch");
    std::copy(r.begin(), r.end(), s.buf.begin());
    fftw_execute(s.fwd);
    if (s.grid.periodic()) {
        const int nkx = nx / 2 + 1;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nkx; ++i) {
                double lam = s.beta0 * (s.lam_x[i] + s.lam_y[j]);
                auto& c = s.cbuf[(size_t)j * nkx + i];
                c = (lam > 0.0) ? c / lam : 0.0;
            }
    } else {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double lam = s.beta0 * (s.lam_x[i] + s.lam_y[j]);
                double& c = s.buf[(size_t)j * nx + i];
                c = (lam > 0.0) ? c / lam : 0.0;
            }
    }
    fftw_execute(s.inv);
    z.resize(r.size());
    for (size_t k = 0; k < z.size(); ++k) z[k] = s.buf[k] * s.norm;
}

} // namespace nsac
