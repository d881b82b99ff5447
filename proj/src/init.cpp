#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nsac/config.hpp"

namespace nsac {

namespace {

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> t;
    std::string w;
    while (is >> w) t.push_back(w);
    return t;
}

double arg(const std::vector<std::string>& t, size_t k, const char* what) {
    if (k >= t.size())
        throw ConfigError(std::string("init spec '") + t[0] + "': missing argument for " + what);
    try {
        return std::stod(t[k]);
    } catch (const std::exception&) {
        throw ConfigError(std::string("init spec '") + t[0] + "': bad number '" + t[k] + "'");
    }
}

ScalarField sample_scalar(const GridSpec& g, const std::string& spec) {
    auto t = tokens(spec);
    if (t.empty()) throw ConfigError("empty init spec");
    ScalarField f(g);
    if (t[0] == "constant") {
        double v = arg(t, 1, "value");
        for (double& x : f.v) x = v;
    } else if (t[0] == "blob") {
        double base = arg(t, 1, "base"), amp = arg(t, 2, "amp");
        double cx = arg(t, 3, "cx"), cy = arg(t, 4, "cy"), r = arg(t, 5, "radius");
        if (!(r > 0.0)) throw ConfigError("init spec 'blob': radius must be > 0");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                double dx = g.xc(i) - cx, dy = g.yc(j) - cy;
                f.at(i, j) = base + amp * std::exp(-(dx * dx + dy * dy) / (r * r));
            }
    } else if (t[0] == "tanhx") {
        double x0 = arg(t, 1, "x0"), w = arg(t, 2, "width");
        if (!(w > 0.0)) throw ConfigError("init spec 'tanhx': width must be > 0");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) = std::tanh((g.xc(i) - x0) / w);
    } else if (t[0] == "sine") {
        double amp = arg(t, 1, "amp");
        double kx = arg(t, 2, "kx"), ky = arg(t, 3, "ky");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) = amp * std::sin(2.0 * M_PI * kx * g.xc(i) / g.lx) *
                             std::sin(2.0 * M_PI * ky * g.yc(j) / g.ly);
    } else if (t[0] == "nearone") {
        double eps = arg(t, 1, "eps");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) = 1.0 - 0.5 * eps *
                             (1.0 + std::cos(M_PI * g.xc(i) / g.lx) *
                                        std::cos(M_PI * g.yc(j) / g.ly));
    } else {
        throw ConfigError("unknown scalar init spec '" + t[0] + "'");
    }
    return f;
}

VectorFieldMAC sample_velocity(const GridSpec& g, const std::string& spec) {
    auto t = tokens(spec);
    if (t.empty()) throw ConfigError("empty velocity init spec");
    VectorFieldMAC u(g);
    if (t[0] == "zero") {
        // nothing
    } else if (t[0] == "taylorgreen") {
        double amp = arg(t, 1, "amp");
        double k = t.size() > 2 ? arg(t, 2, "k") : 1.0;
        if (std::abs(g.dx() - g.dy()) > 1e-14 * g.dx())
            throw ConfigError("init spec 'taylorgreen' requires dx == dy for a "
                              "discretely divergence-free field");
        double ax = 2.0 * M_PI * k / g.lx, ay = 2.0 * M_PI * k / g.ly;
        if (!g.periodic()) { ax *= 0.5; ay *= 0.5; } // sin vanishes on the walls
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                u.x(i, j) = amp * std::sin(ax * i * g.dx()) * std::cos(ay * g.yc(j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                u.y(i, j) = -amp * std::cos(ax * g.xc(i)) * std::sin(ay * j * g.dy());
        u.enforce_bc();
    } else {
        throw ConfigError("unknown velocity init spec '" + t[0] + "'");
    }
    return u;
}

} // namespace

State initial_state(const Config& cfg) {
    GridSpec g = cfg.grid();
    State s(g);
    s.rho = sample_scalar(g, cfg.rho_init);
    s.chi = sample_scalar(g, cfg.chi_init);
    s.u = sample_velocity(g, cfg.u_init);
    if (!(s.rho.min() > 0.0))
        throw ConfigError("initial density must be strictly positive");
    if (s.chi.max() > 1.0 + 1e-12 || s.chi.min() < -1.0 - 1e-12)
        throw ConfigError("initial phase field must satisfy |chi| <= 1");
    return s;
}

} // namespace nsac
