#include "nsac/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsac {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_num(const std::string& v, int line, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(line, "key " + key + ": expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& v, int line, const std::string& key) {
    double d = to_num(v, line, key);
    int i = (int)d;
    if ((double)i != d) fail(line, "key " + key + ": expected an integer");
    return i;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Config parse_config(const std::string& text) {
    Config c;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        size_t h = s.find('#');
        if (h != std::string::npos) s = s.substr(0, h);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'section.key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.find('.') == std::string::npos)
            fail(line, "key '" + key + "' is missing its section prefix");
        if (val.empty()) fail(line, "key " + key + ": empty value");

        if (key == "grid.nx") c.nx = to_int(val, line, key);
        else if (key == "grid.ny") c.ny = to_int(val, line, key);
        else if (key == "grid.lx") c.lx = to_num(val, line, key);
        else if (key == "grid.ly") c.ly = to_num(val, line, key);
        else if (key == "grid.bc") {
            if (val == "torus") c.bc = Bc::PeriodicTorus;
            else if (val == "box") c.bc = Bc::NoSlipBox;
            else fail(line, "grid.bc must be 'torus' or 'box'");
        } else if (key == "physics.eta_star") c.eta_star = to_num(val, line, key);
        else if (key == "physics.eta_upper") c.eta_upper = to_num(val, line, key);
        else if (key == "physics.m_star") c.m_star = to_num(val, line, key);
        else if (key == "physics.m_upper") c.m_upper = to_num(val, line, key);
        else if (key == "physics.rho_init") c.rho_init = val;
        else if (key == "physics.chi_init") c.chi_init = val;
        else if (key == "physics.u_init") c.u_init = val;
        else if (key == "time.t_end") c.t_end = to_num(val, line, key);
        else if (key == "time.cfl") c.cfl = to_num(val, line, key);
        else if (key == "time.dt_max") c.dt_max = to_num(val, line, key);
        else if (key == "time.order") {
            if (val != "rho_first" && val != "u_first")
                fail(line, "time.order must be 'rho_first' or 'u_first'");
            c.order = val;
        } else if (key == "numerics.cg_tol") c.cg_tol = to_num(val, line, key);
        else if (key == "numerics.cg_maxiter") c.cg_maxiter = to_int(val, line, key);
        else if (key == "numerics.stabilization") c.stabilization = to_num(val, line, key);
        else if (key == "numerics.limiter") {
            if (val == "minmod") c.limiter = Limiter::Minmod;
            else if (val == "vanleer") c.limiter = Limiter::VanLeer;
            else fail(line, "numerics.limiter must be 'minmod' or 'vanleer'");
        } else if (key == "output.diag_every") c.diag_every = to_int(val, line, key);
        else if (key == "output.snap_every") c.snap_every = to_int(val, line, key);
        else if (key == "output.outdir") c.outdir = val;
        else if (key == "experiment.kind") {
            if (val != "run" && val != "galerkin" && val != "decay" && val != "twin" &&
                val != "check")
                fail(line, "experiment.kind must be run|galerkin|decay|twin|check");
            c.kind = val;
        } else if (key == "experiment.k_max") c.k_max = to_int(val, line, key);
        else if (key == "experiment.delta") c.delta = to_num(val, line, key);
        else if (key == "experiment.delta2") c.delta2 = to_num(val, line, key);
        else if (key == "experiment.fit_lo") c.fit_lo = to_num(val, line, key);
        else if (key == "experiment.fit_hi") c.fit_hi = to_num(val, line, key);
        else if (key == "experiment.g_init") c.g_init = val;
        else if (key == "experiment.dt") c.exp_dt = to_num(val, line, key);
        else fail(line, "unknown key '" + key + "'");
    }

    auto range = [&](bool ok, const char* key, const char* what) {
        if (!ok) throw ConfigError(std::string("config key ") + key + ": " + what);
    };
    range(c.nx >= 8, "grid.nx", "must be >= 8");
    range(c.ny >= 8, "grid.ny", "must be >= 8");
    range(c.lx > 0.0, "grid.lx", "must be > 0");
    range(c.ly > 0.0, "grid.ly", "must be > 0");
    range(c.eta_star > 0.0, "physics.eta_star", "must be > 0");
    range(c.eta_upper >= c.eta_star, "physics.eta_upper", "must be >= eta_star");
    range(c.m_star > 0.0, "physics.m_star", "must be > 0");
    range(c.m_upper >= c.m_star, "physics.m_upper", "must be >= m_star");
    range(c.t_end >= 0.0, "time.t_end", "must be >= 0");
    range(c.cfl > 0.0 && c.cfl <= 1.0, "time.cfl", "must be in (0, 1]");
    range(c.dt_max > 0.0, "time.dt_max", "must be > 0");
    range(c.cg_tol > 0.0, "numerics.cg_tol", "must be > 0");
    range(c.cg_maxiter > 0, "numerics.cg_maxiter", "must be > 0");
    range(c.stabilization >= 0.0, "numerics.stabilization", "must be >= 0");
    range(c.diag_every >= 1, "output.diag_every", "must be >= 1");
    range(c.snap_every >= 0, "output.snap_every", "must be >= 0");
    range(c.k_max >= 1, "experiment.k_max", "must be >= 1");
    range(c.delta > 0.0, "experiment.delta", "must be > 0");
    range(c.delta2 > 0.0, "experiment.delta2", "must be > 0");
    range(c.fit_lo < c.fit_hi, "experiment.fit_lo", "must be < fit_hi");
    range(c.exp_dt > 0.0, "experiment.dt", "must be > 0");
    return c;
}

Config parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str());
}

std::string serialize_config(const Config& c) {
    std::ostringstream os;
    os << "grid.nx = " << c.nx << "\n";
    os << "grid.ny = " << c.ny << "\n";
    os << "grid.lx = " << fmt17(c.lx) << "\n";
    os << "grid.ly = " << fmt17(c.ly) << "\n";
    os << "grid.bc = " << (c.bc == Bc::PeriodicTorus ? "torus" : "box") << "\n";
    os << "physics.eta_star = " << fmt17(c.eta_star) << "\n";
    os << "physics.eta_upper = " << fmt17(c.eta_upper) << "\n";
    os << "physics.m_star = " << fmt17(c.m_star) << "\n";
    os << "physics.m_upper = " << fmt17(c.m_upper) << "\n";
    os << "physics.rho_init = " << c.rho_init << "\n";
    os << "physics.chi_init = " << c.chi_init << "\n";
    os << "physics.u_init = " << c.u_init << "\n";
    os << "time.t_end = " << fmt17(c.t_end) << "\n";
    os << "time.cfl = " << fmt17(c.cfl) << "\n";
    os << "time.dt_max = " << fmt17(c.dt_max) << "\n";
    os << "time.order = " << c.order << "\n";
    os << "numerics.cg_tol = " << fmt17(c.cg_tol) << "\n";
    os << "numerics.cg_maxiter = " << c.cg_maxiter << "\n";
    os << "numerics.stabilization = " << fmt17(c.stabilization) << "\n";
    os << "numerics.limiter = " << (c.limiter == Limiter::Minmod ? "minmod" : "vanleer")
       << "\n";
    os << "output.diag_every = " << c.diag_every << "\n";
    os << "output.snap_every = " << c.snap_every << "\n";
    os << "output.outdir = " << c.outdir << "\n";
    os << "experiment.kind = " << c.kind << "\n";
    os << "experiment.k_max = " << c.k_max << "\n";
    os << "experiment.delta = " << fmt17(c.delta) << "\n";
    os << "experiment.delta2 = " << fmt17(c.delta2) << "\n";
    os << "experiment.fit_lo = " << fmt17(c.fit_lo) << "\n";
    os << "experiment.fit_hi = " << fmt17(c.fit_hi) << "\n";
    os << "experiment.g_init = " << c.g_init << "\n";
    os << "experiment.dt = " << fmt17(c.exp_dt) << "\n";
    return os.str();
}

const char* const kCsvHeader =
    "t,E0,visc_diss,chem_diss,mass_rho,mass_rhochi,int_m_mu,rho_min,rho_max,"
    "chi_min,chi_max,div_inf,u_l2sq,gradchi_l2sq,chi2m1_l2sq,Ecal,Dcal,Acal,H_higher";

void write_csv(const std::vector<DiagRecord>& records, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");
    f << kCsvHeader << "\n";
    for (const DiagRecord& r : records) {
        const double vals[] = {r.t, r.E0, r.visc_diss, r.chem_diss, r.mass_rho,
                               r.mass_rhochi, r.int_m_mu, r.rho_min, r.rho_max,
                               r.chi_min, r.chi_max, r.div_inf, r.u_l2sq,
                               r.gradchi_l2sq, r.chi2m1_l2sq, r.Ecal, r.Dcal, r.Acal,
                               r.H_higher};
        for (size_t k = 0; k < 19; ++k) f << (k ? "," : "") << fmt17(vals[k]);
        f << "\n";
    }
    if (!f) throw ConfigError("write failure on '" + path + "'");
}

std::vector<DiagRecord> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(f, line)) throw ConfigError("empty CSV '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ConfigError("malformed CSV header in '" + path + "'");
    std::vector<DiagRecord> out;
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        std::istringstream is(line);
        double vals[19];
        std::string tok;
        for (size_t k = 0; k < 19; ++k) {
            if (!std::getline(is, tok, ','))
                throw ConfigError("short CSV row in '" + path + "'");
            vals[k] = std::stod(tok);
        }
        DiagRecord r;
        r.t = vals[0]; r.E0 = vals[1]; r.visc_diss = vals[2]; r.chem_diss = vals[3];
        r.mass_rho = vals[4]; r.mass_rhochi = vals[5]; r.int_m_mu = vals[6];
        r.rho_min = vals[7]; r.rho_max = vals[8]; r.chi_min = vals[9];
        r.chi_max = vals[10]; r.div_inf = vals[11]; r.u_l2sq = vals[12];
        r.gradchi_l2sq = vals[13]; r.chi2m1_l2sq = vals[14]; r.Ecal = vals[15];
        r.Dcal = vals[16]; r.Acal = vals[17]; r.H_higher = vals[18];
        out.push_back(r);
    }
    return out;
}

void write_snapshot(const ScalarField& f, const std::string& fieldname, double t,
                    const std::string& path) {
    std::ofstream of(path);
    if (!of) throw ConfigError("cannot open '" + path + "' for writing");
    const GridSpec& g = f.grid;
    of << "NSACSNAP 1 " << fieldname << "\n";
    of << g.nx << " " << g.ny << " " << fmt17(g.lx) << " " << fmt17(g.ly) << " "
       << fmt17(t) << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) of << (i ? " " : "") << fmt17(f.at(i, j));
        of << "\n";
    }
    if (!of) throw ConfigError("write failure on '" + path + "'");
}

Snapshot read_snapshot(const std::string& path, Bc bc) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::string magic, name;
    int version = 0;
    if (!(f >> magic >> version >> name) || magic != "NSACSNAP")
        throw ConfigError("bad snapshot magic in '" + path + "'");
    if (version != 1)
        throw ConfigError("unsupported snapshot version in '" + path + "'");
    int nx = 0, ny = 0;
    double lx = 0, ly = 0, t = 0;
    if (!(f >> nx >> ny >> lx >> ly >> t))
        throw ConfigError("bad snapshot dimensions in '" + path + "'");
    Snapshot s;
    s.name = name;
    s.t = t;
    s.field = ScalarField(GridSpec(nx, ny, lx, ly, bc));
    for (size_t k = 0; k < s.field.v.size(); ++k)
        if (!(f >> s.field.v[k]))
            throw ConfigError("snapshot value count mismatch in '" + path + "'");
    double extra;
    if (f >> extra) throw ConfigError("snapshot has trailing values in '" + path + "'");
    return s;
}

void emit_gnuplot(const std::string& csv_relpath, const std::string& script_path,
                  double fit_lo, double fit_hi) {
    std::ofstream f(script_path);
    if (!f) throw ConfigError("cannot open '" + script_path + "' for writing");
    f << "# generated plotting script\n"
      << "set datafile separator ','\n"
      << "csv = '" << csv_relpath << "'\n"
      << "set terminal pngcairo size 1400,500\n"
      << "set output 'diagnostics.png'\n"
      << "set multiplot layout 1,3\n"
      << "set title 'energy and dissipation'\n"
      << "plot csv using 1:2 with lines title 'E0', \\\n"
      << "     csv using 1:3 with lines title 'visc', \\\n"
      << "     csv using 1:4 with lines title 'chem'\n"
      << "set title 'budget residual'\n"
      << "plot csv using 1:($2) with lines title 'E0(t)'\n"
      << "set title 'decay (semilog)'\n"
      << "set logscale y\n";
    if (fit_hi > fit_lo)
        f << "set arrow from " << fmt17(fit_lo) << ", graph 0 to " << fmt17(fit_lo)
          << ", graph 1 nohead dt 2\n"
          << "set arrow from " << fmt17(fit_hi) << ", graph 0 to " << fmt17(fit_hi)
          << ", graph 1 nohead dt 2\n";
    f << "plot csv using 1:($13+$14+$15) with lines title 'u^2 + (chi^2-1)^2 + grad chi^2'\n"
      << "unset multiplot\n";
}

} // namespace nsac
