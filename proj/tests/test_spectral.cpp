#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nsac/spectral.hpp"

using namespace nsac;

TEST_CASE("spectral gradient is exact for band-limited fields") {
    GridSpec g(32, 48, 2.0, 1.0, Bc::PeriodicTorus);
    ScalarField f(g), gx_ref(g), gy_ref(g);
    const double kx = 2.0 * M_PI * 3.0 / g.lx, ky = 2.0 * M_PI * 5.0 / g.ly;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double x = g.xc(i), y = g.yc(j);
            f.at(i, j) = std::sin(kx * x) * std::cos(ky * y) + 0.3 * std::cos(kx * x);
            gx_ref.at(i, j) = kx * std::cos(kx * x) * std::cos(ky * y) -
                              0.3 * kx * std::sin(kx * x);
            gy_ref.at(i, j) = -ky * std::sin(kx * x) * std::sin(ky * y);
        }
    ScalarField fx(g), fy(g);
    spectral_gradient(f, fx, fy);
    for (size_t k = 0; k < f.v.size(); ++k) {
        CHECK(fx.v[k] == doctest::Approx(gx_ref.v[k]).epsilon(1e-11));
        CHECK(fy.v[k] == doctest::Approx(gy_ref.v[k]).epsilon(1e-11));
    }
}

TEST_CASE("spectral laplacian matches the analytic eigenvalue") {
    GridSpec g(64, 64, 1.0, 1.0, Bc::PeriodicTorus);
    ScalarField f(g);
    const double kx = 2.0 * M_PI * 4.0, ky = 2.0 * M_PI * 7.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) = std::cos(kx * g.xc(i)) * std::sin(ky * g.yc(j));
    ScalarField lf = spectral_laplacian(f);
    const double lam = -(kx * kx + ky * ky);
    for (size_t k = 0; k < f.v.size(); ++k)
        CHECK(lf.v[k] == doctest::Approx(lam * f.v[k]).epsilon(1e-10));
}

TEST_CASE("nyquist mode produces no spurious derivative") {
    GridSpec g(16, 16, 1.0, 1.0, Bc::PeriodicTorus);
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) = (i % 2 == 0) ? 1.0 : -1.0;   // pure nyquist in x
    ScalarField fx(g), fy(g);
    spectral_gradient(f, fx, fy);
    for (double v : fx.v) CHECK(std::abs(v) <= 1e-12);
    for (double v : fy.v) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("gradient of a constant is zero and a round trip is stable") {
    GridSpec g(16, 16, 1.0, 1.0, Bc::PeriodicTorus);
    ScalarField f(g, 3.7);
    ScalarField fx(g), fy(g);
    spectral_gradient(f, fx, fy);
    for (double v : fx.v) CHECK(std::abs(v) <= 1e-13);

    std::mt19937 rng(51);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (double& v : f.v) v = un(rng);
    ScalarField l1 = spectral_laplacian(f);
    ScalarField l2 = spectral_laplacian(f);
    for (size_t k = 0; k < l1.v.size(); ++k) CHECK(l1.v[k] == l2.v[k]);
}

TEST_CASE("spectral operators reject non-periodic grids") {
    GridSpec g(16, 16, 1.0, 1.0, Bc::NoSlipBox);
    ScalarField f(g, 1.0), fx(g), fy(g);
    CHECK_THROWS_AS(spectral_gradient(f, fx, fy), ConfigError);
    CHECK_THROWS_AS(spectral_laplacian(f), ConfigError);
}
