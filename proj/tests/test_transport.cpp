#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nsac/ops.hpp"
#include "nsac/transport.hpp"

using namespace nsac;

namespace {

// Discretely divergence-free MAC velocity from a node streamfunction.
VectorFieldMAC curl_from_stream(const GridSpec& g, unsigned seed, double amp) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> un(-amp, amp);
    const int nx = g.nx, ny = g.ny;
    std::vector<double> psi((size_t)(nx + 1) * (ny + 1));
    for (double& v : psi) v = un(rng);
    if (!g.periodic()) {
        // constant streamfunction on the boundary: no flow through the walls
        for (int i = 0; i <= nx; ++i) {
            psi[i] = 0.0;
            psi[(size_t)ny * (nx + 1) + i] = 0.0;
        }
        for (int j = 0; j <= ny; ++j) {
            psi[(size_t)j * (nx + 1)] = 0.0;
            psi[(size_t)j * (nx + 1) + nx] = 0.0;
        }
    }
    auto P = [&](int i, int j) -> double {
        if (g.periodic()) {
            return psi[(size_t)(((j % ny) + ny) % ny) * (nx + 1) + (((i % nx) + nx) % nx)];
        }
        return psi[(size_t)j * (nx + 1) + i];
    };
    VectorFieldMAC u(g);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            u.x(i, j) = -(P(i, j + 1) - P(i, j)) / g.dy();
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            u.y(i, j) = (P(i + 1, j) - P(i, j)) / g.dx();
    u.enforce_bc();
    return u;
}

} // namespace

TEST_CASE("curl of a streamfunction is discretely divergence free") {
    for (Bc bc : {Bc::PeriodicTorus, Bc::NoSlipBox}) {
        GridSpec g(24, 16, 1.0, 1.0, bc);
        VectorFieldMAC u = curl_from_stream(g, 41, 1.0);
        ScalarField d = div(u);
        for (double v : d.v) CHECK(std::abs(v) <= 1e-12 * u.max_abs() / g.dx());
    }
}

TEST_CASE("exact circular shift at courant one") {
    GridSpec g(32, 32, 1.0, 1.0, Bc::PeriodicTorus);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> un(1.0, 3.0);
    ScalarField rho(g);
    for (double& v : rho.v) v = un(rng);
    VectorFieldMAC u(g);
    const double speed = 0.5;
    for (double& v : u.ux) v = speed;
    const double dt = g.dx() / speed;   // courant exactly 1
    ScalarField out = advect_density(rho, u, dt);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(out.at(i, j) == doctest::Approx(rho.ghost(i - 1, j)).epsilon(1e-14));
}

TEST_CASE("constant density is preserved by any divergence-free velocity") {
    GridSpec g(32, 24, 1.0, 1.0, Bc::PeriodicTorus);
    VectorFieldMAC u = curl_from_stream(g, 43, 2.0);
    ScalarField rho(g, 1.3);
    ScalarField out = advect_density(rho, u, 0.2 * g.dx() / u.max_abs());
    for (double v : out.v) CHECK(v == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("mass conservation and maximum principle over 50 random trials") {
    for (unsigned trial = 0; trial < 50; ++trial) {
        Bc bc = (trial % 2 == 0) ? Bc::PeriodicTorus : Bc::NoSlipBox;
        Limiter lim = (trial % 3 == 0) ? Limiter::VanLeer : Limiter::Minmod;
        GridSpec g(16, 16, 1.0, 1.0, bc);
        std::mt19937 rng(100 + trial);
        std::uniform_real_distribution<double> un(0.5, 4.0);
        ScalarField rho(g);
        for (double& v : rho.v) v = un(rng);
        VectorFieldMAC u = curl_from_stream(g, 200 + trial, 1.0);
        double dt = 0.4 / (u.max_abs() * (1.0 / g.dx() + 1.0 / g.dy()));

        double lo = rho.min(), hi = rho.max(), mass = integrate(rho);
        ScalarField cur = rho;
        for (int step = 0; step < 5; ++step) {
            cur = advect_density(cur, u, dt, lim);
            CHECK(cur.min() >= lo - 1e-12 * hi);
            CHECK(cur.max() <= hi + 1e-12 * hi);
        }
        CHECK(integrate(cur) == doctest::Approx(mass).epsilon(1e-13));
    }
}

TEST_CASE("courant violation throws CflError") {
    GridSpec g(16, 16, 1.0, 1.0, Bc::PeriodicTorus);
    ScalarField rho(g, 1.0);
    VectorFieldMAC u(g);
    for (double& v : u.ux) v = 1.0;
    CHECK_THROWS_AS(advect_density(rho, u, 2.0 * g.dx()), CflError);
}

TEST_CASE("non-divergence-free velocity is rejected") {
    GridSpec g(16, 16, 1.0, 1.0, Bc::PeriodicTorus);
    ScalarField rho(g, 1.0);
    VectorFieldMAC u(g);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    for (double& v : u.ux) v = un(rng);
    for (double& v : u.uy) v = un(rng);
    u.sync_wrap();
    CHECK_THROWS_AS(advect_density(rho, u, 1e-3), ConfigError);
}

TEST_CASE("smooth profile transport converges under refinement") {
    // advect a smooth bump one full period; oracle is the initial data
    auto bump = [](double x, double y) {
        return 2.0 + std::sin(2.0 * M_PI * x) * std::cos(2.0 * M_PI * y);
    };
    double err[2];
    int idx = 0;
    for (int n : {32, 64}) {
        GridSpec g(n, n, 1.0, 1.0, Bc::PeriodicTorus);
        ScalarField rho(g);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) rho.at(i, j) = bump(g.xc(i), g.yc(j));
        VectorFieldMAC u(g);
        for (double& v : u.ux) v = 1.0;
        const int steps = 2 * n;               // courant 1/2
        const double dt = 1.0 / steps;
        ScalarField cur = rho;
        for (int s = 0; s < steps; ++s) cur = advect_density(cur, u, dt);
        double e = 0.0;
        for (size_t k = 0; k < cur.v.size(); ++k)
            e = std::max(e, std::abs(cur.v[k] - rho.v[k]));
        err[idx++] = e;
    }
    CHECK(err[0] / err[1] >= 1.8);   // at least first-order in the max norm
    CHECK(err[1] <= 0.05);
}
