#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nsac/diagnostics.hpp"
#include "nsac/galerkin.hpp"
#include "nsac/io.hpp"
#include "nsac/ops.hpp"
#include "nsac/spectral.hpp"
#include "nsac/stepper.hpp"

namespace fs = std::filesystem;
using namespace nsac;

namespace {

struct Assertions {
    std::ostringstream table;
    bool all_pass = true;
    void check(const std::string& name, bool ok, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", value);
        table << (ok ? "PASS " : "FAIL ") << name << " = " << buf << "\n";
        all_pass &= ok;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << text;
}

void write_meta(const Config& cfg, const std::string& path) {
    std::ostringstream os;
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    os << "# run metadata (timestamps live here, not in the data files)\n";
    os << "wall_clock = " << now << "\n";
    os << "# time derivatives in Ecal/Dcal/H are backward differences of\n";
    os << "# consecutive recorded states\n";
    os << "# --- effective configuration ---\n";
    os << serialize_config(cfg);
    write_text(path, os.str());
}

void write_snapshots(const RunResult& rr, const std::string& outdir) {
    for (size_t k = 0; k < rr.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "%s/rho_%04zu.snap", outdir.c_str(), k);
        write_snapshot(rr.snapshots[k].rho, "rho", rr.snapshots[k].t, name);
        std::snprintf(name, sizeof name, "%s/chi_%04zu.snap", outdir.c_str(), k);
        write_snapshot(rr.snapshots[k].chi, "chi", rr.snapshots[k].t, name);
    }
}

int finish(const Config& cfg, const Assertions& a, const std::string& extra = "") {
    std::string summary = a.table.str() + extra;
    write_text(cfg.outdir + "/summary.txt", summary);
    std::cout << summary;
    return a.all_pass ? 0 : 3;
}

int cmd_run(const Config& cfg) {
    fs::create_directories(cfg.outdir);
    write_meta(cfg, cfg.outdir + "/meta.txt");
    RunResult rr = run_simulation(cfg);
    write_csv(rr.records, cfg.outdir + "/diag.csv");
    write_snapshots(rr, cfg.outdir);
    emit_gnuplot("diag.csv", cfg.outdir + "/plot.gp");

    Assertions a;
    const auto& recs = rr.records;
    double E00 = recs.front().E0;
    if (recs.size() >= 2) {
        std::vector<double> r = energy_budget(recs);
        double rmax = 0.0;
        for (double v : r) rmax = std::max(rmax, std::abs(v));
        a.check("energy_budget_residual_max", E00 <= 0.0 || rmax <= 0.05 * E00, rmax);
    }
    // max principle: extrema may contract but never expand
    double rho_scale = std::max(std::abs(recs.front().rho_max), 1.0);
    double expand = 0.0;
    for (const auto& rec : recs) {
        expand = std::max(expand, recs.front().rho_min - rec.rho_min);
        expand = std::max(expand, rec.rho_max - recs.front().rho_max);
    }
    a.check("rho_extrema_expansion", expand <= 1e-12 * rho_scale, expand);
    double mass0 = recs.front().mass_rho;
    double mdrift = std::abs(recs.back().mass_rho - mass0) / std::max(1.0, std::abs(mass0));
    a.check("rho_mass_rel_drift", mdrift <= 1e-10, mdrift);
    double divmax = 0.0, umax = 1.0;
    for (const auto& rec : recs) {
        divmax = std::max(divmax, rec.div_inf);
        umax = std::max(umax, std::sqrt(rec.u_l2sq));
    }
    double dxm = std::min(cfg.lx / cfg.nx, cfg.ly / cfg.ny);
    a.check("div_u_inf_max", divmax <= 1e-8 * umax / dxm, divmax);
    return finish(cfg, a);
}

int cmd_decay(const Config& cfg) {
    fs::create_directories(cfg.outdir);
    write_meta(cfg, cfg.outdir + "/meta.txt");
    RunResult rr = run_simulation(cfg);
    write_csv(rr.records, cfg.outdir + "/diag.csv");
    emit_gnuplot("diag.csv", cfg.outdir + "/plot.gp", cfg.fit_lo, cfg.fit_hi);

    std::vector<double> ts, qs;
    for (const auto& rec : rr.records) {
        ts.push_back(rec.t);
        qs.push_back(rec.u_l2sq + rec.chi2m1_l2sq + rec.gradchi_l2sq);
    }
    DecayFit fit = decay_fit(ts, qs, cfg.fit_lo, cfg.fit_hi);
    Assertions a;
    a.check("decay_sigma_positive", !fit.degenerate && fit.sigma > 0.0, fit.sigma);
    a.check("decay_r_squared", fit.r_squared >= 0.99, fit.r_squared);
    // fitted quantity at the window ends (nearest records)
    auto q_at = [&](double t) {
        size_t best = 0;
        for (size_t k = 1; k < ts.size(); ++k)
            if (std::abs(ts[k] - t) < std::abs(ts[best] - t)) best = k;
        return qs[best];
    };
    double ratio = q_at(cfg.fit_hi) / q_at(cfg.fit_lo);
    a.check("decay_window_ratio", ratio <= 0.2, ratio);
    bool monotone = true;
    double worst = 0.0;
    for (size_t k = 1; k < rr.records.size(); ++k) {
        double rise = rr.records[k].Acal - rr.records[k - 1].Acal;
        worst = std::max(worst, rise);
        if (rise > 1e-12 * std::max(1.0, rr.records[0].Acal)) monotone = false;
    }
    a.check("Acal_monotone", monotone, worst);
    std::ostringstream extra;
    extra << "sigma = " << fit.sigma << "\nr_squared = " << fit.r_squared << "\n";
    return finish(cfg, a, extra.str());
}

ScalarField twin_bump(const GridSpec& g) {
    ScalarField p(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double ax = g.periodic() ? 2.0 * M_PI * g.xc(i) / g.lx : M_PI * g.xc(i) / g.lx;
            double ay = g.periodic() ? 2.0 * M_PI * g.yc(j) / g.ly : M_PI * g.yc(j) / g.ly;
            p.at(i, j) = std::cos(ax) * std::cos(ay);
        }
    return p;
}

int cmd_twin(const Config& cfg) {
    fs::create_directories(cfg.outdir);
    write_meta(cfg, cfg.outdir + "/meta.txt");
    State base = initial_state(cfg);
    ScalarField bump = twin_bump(base.grid());

    RunResult rb = run_simulation(cfg, &base);
    double d0[2], dT[2];
    const double deltas[2] = {cfg.delta, cfg.delta2};
    for (int k = 0; k < 2; ++k) {
        State pert = base;
        for (size_t c = 0; c < pert.chi.v.size(); ++c)
            pert.chi.v[c] += deltas[k] * bump.v[c];
        d0[k] = std::sqrt(ws_distance(base, pert).value);
        RunResult rp = run_simulation(cfg, &pert);
        dT[k] = std::sqrt(ws_distance(rb.final_state, rp.final_state).value);
    }
    Assertions a;
    double ratio = dT[0] / dT[1];
    a.check("twin_distance_ratio", ratio >= 5.0 && ratio <= 20.0, ratio);
    a.check("twin_growth_delta1", dT[0] <= 100.0 * d0[0], dT[0] / d0[0]);
    a.check("twin_growth_delta2", dT[1] <= 100.0 * d0[1], dT[1] / d0[1]);
    std::ostringstream extra;
    extra << "distance_ratio = " << ratio << "\n"
          << "final_distance_delta1 = " << dT[0] << "\n"
          << "final_distance_delta2 = " << dT[1] << "\n";
    return finish(cfg, a, extra.str());
}

std::vector<double> galerkin_g0(const Config& cfg, const std::vector<FourierMode>& modes) {
    std::istringstream is(cfg.g_init);
    std::string kind;
    is >> kind;
    std::vector<double> g(modes.size(), 0.0);
    if (kind == "zero") return g;
    if (kind == "single") {
        size_t idx;
        double amp;
        if (!(is >> idx >> amp) || idx >= modes.size())
            throw ConfigError("experiment.g_init: usage 'single <index> <amp>'");
        g[idx] = amp;
        return g;
    }
    if (kind == "bands") {
        double amp;
        if (!(is >> amp)) throw ConfigError("experiment.g_init: usage 'bands <amp>'");
        for (size_t q = 0; q < modes.size(); ++q)
            g[q] = (q % 2 ? -1.0 : 1.0) * amp / (1.0 + modes[q].eigenvalue);
        return g;
    }
    throw ConfigError("experiment.g_init: unknown kind '" + kind + "'");
}

int cmd_galerkin(const Config& cfg) {
    if (cfg.bc != Bc::PeriodicTorus)
        throw ConfigError("the galerkin experiment requires grid.bc = torus");
    fs::create_directories(cfg.outdir);
    write_meta(cfg, cfg.outdir + "/meta.txt");

    Config scfg = cfg;   // sample rho/chi with the shared init machinery
    State init = initial_state(scfg);
    GalerkinSystem sys = make_system(cfg.grid(), cfg.laws(), cfg.k_max,
                                     galerkin_g0(cfg, build_modes(cfg.k_max, cfg.lx, cfg.ly)),
                                     init.rho, init.chi);
    {
        std::ostringstream os;
        os << "# kx ky parity eigenvalue\n";
        for (const auto& md : sys.modes)
            os << md.kx << " " << md.ky << " " << (md.sine ? "sin" : "cos") << " "
               << md.eigenvalue << "\n";
        write_text(cfg.outdir + "/modes.txt", os.str());
    }

    const double dt = cfg.exp_dt;
    const int steps = (int)std::llround(cfg.t_end / dt);
    std::vector<double> ts{0.0}, E0{galerkin_energy(sys)}, diss;
    GalerkinStepOptions opt;
    opt.limiter = cfg.limiter;
    for (int n = 0; n < steps; ++n) {
        GalerkinStepInfo info = galerkin_step(sys, dt, opt);
        ts.push_back(sys.t);
        E0.push_back(galerkin_energy(sys));
        diss.push_back(info.visc_increment + info.chem_increment);
    }
    std::vector<double> r = energy_identity_residual(E0, diss);
    {
        std::ostringstream os;
        os << "t,E0,identity_residual\n";
        for (size_t k = 0; k < ts.size(); ++k) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", ts[k], E0[k], r[k]);
            os << buf;
        }
        write_text(cfg.outdir + "/galerkin.csv", os.str());
    }
    double worst = 0.0;
    for (size_t k = 1; k < ts.size(); ++k)
        worst = std::max(worst, std::abs(r[k]) / ts[k]);
    Assertions a;
    a.check("galerkin_identity_residual_rate", worst <= 1e-3 * E0.front(), worst);
    std::ostringstream extra;
    extra << "E0_initial = " << E0.front() << "\nmax_residual_per_time = " << worst << "\n";
    return finish(cfg, a, extra.str());
}

int cmd_check() {
    Assertions a;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> un(-1.0, 1.0);

    for (Bc bc : {Bc::PeriodicTorus, Bc::NoSlipBox}) {
        GridSpec g(16, 16, 1.0, 1.0, bc);
        ScalarField f(g);
        for (double& v : f.v) v = un(rng);
        ScalarField lap = laplacian(f);
        ScalarField dg = div(grad(f));
        double err = 0.0;
        for (size_t k = 0; k < lap.v.size(); ++k)
            err = std::max(err, std::abs(lap.v[k] - dg.v[k]));
        a.check(bc == Bc::PeriodicTorus ? "laplacian_div_grad_torus"
                                        : "laplacian_div_grad_box",
                err <= 1e-12, err);
    }
    {
        double worst = 0.0;
        for (double s : {-0.9, -0.3, 0.1, 0.7, 1.0}) {
            double h = 1e-6;
            double fd = (MaterialLaws::F(s + h) - MaterialLaws::F(s - h)) / (2 * h);
            worst = std::max(worst, std::abs(fd - MaterialLaws::dF(s)));
            double fd2 = (MaterialLaws::dF(s + h) - MaterialLaws::dF(s - h)) / (2 * h);
            worst = std::max(worst, std::abs(fd2 - MaterialLaws::d2F(s)));
        }
        a.check("potential_derivatives_fd", worst <= 1e-8, worst);
    }
    {
        GridSpec g(32, 32, 1.0, 1.0, Bc::PeriodicTorus);
        auto modes = build_modes(2, 1.0, 1.0);
        GalerkinSystem sys = make_system(g, MaterialLaws(), 2,
                                         std::vector<double>(modes.size(), 0.0),
                                         ScalarField(g, 1.0), ScalarField(g, 1.0));
        Mat A = assemble_A(sys.rho, sys);
        double worst = 0.0;
        size_t m = sys.nmodes();
        for (size_t j = 0; j < m; ++j)
            for (size_t k = 0; k < m; ++k)
                worst = std::max(worst, std::abs(A[j * m + k] - (j == k ? 1.0 : 0.0)));
        a.check("mode_gram_identity", worst <= 1e-10, worst);
    }
    {
        Config cfg;
        cfg.nx = cfg.ny = 16;
        cfg.t_end = 0.0;
        State s = initial_state(cfg);
        MaterialLaws law = cfg.laws();
        State before = s;
        StepOptions opt;
        step(s, law, 1e-3, opt);
        double worst = 0.0;
        for (size_t k = 0; k < s.chi.v.size(); ++k) {
            worst = std::max(worst, std::abs(s.chi.v[k] - before.chi.v[k]));
            worst = std::max(worst, std::abs(s.rho.v[k] - before.rho.v[k]));
        }
        worst = std::max(worst, s.u.max_abs());
        a.check("equilibrium_fixed_point", worst <= 1e-10, worst);
    }
    std::cout << a.table.str();
    return a.all_pass ? 0 : 3;
}

int usage() {
    std::cerr << "usage: nsac <run|galerkin|decay|twin> <config>\n"
              << "       nsac check\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage();
    std::string cmd = argv[1];
    try {
        if (cmd == "check") return cmd_check();
        if (argc < 3) return usage();
        Config cfg = parse_config_file(argv[2]);
        cfg.kind = cmd;
        if (cmd == "run") return cmd_run(cfg);
        if (cmd == "galerkin") return cmd_galerkin(cfg);
        if (cmd == "decay") return cmd_decay(cfg);
        if (cmd == "twin") return cmd_twin(cfg);
        return usage();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CflError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
