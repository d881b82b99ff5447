#ifndef NSAC_IO_HPP
#define NSAC_IO_HPP

#include <string>
#include <vector>

#include "nsac/config.hpp"
#include "nsac/diagnostics.hpp"

namespace nsac {

// Line-oriented `section.key = value` grammar, `#` comments. Unknown keys
// and range violations throw ConfigError with the line number / key name.
Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);

// Emits every key (defaults included); parse(serialize(c)) == c.
std::string serialize_config(const Config& cfg);

extern const char* const kCsvHeader;

void write_csv(const std::vector<DiagRecord>& records, const std::string& path);
std::vector<DiagRecord> read_csv(const std::string& path);

// Snapshot format:
//   line 1: NSACSNAP 1 <fieldname>
//   line 2: <nx> <ny> <lx> <ly> <t>
//   nx*ny row-major values, 17 significant digits
void write_snapshot(const ScalarField& f, const std::string& fieldname, double t,
                    const std::string& path);
struct Snapshot {
    ScalarField field;
    std::string name;
    double t = 0.0;
};
Snapshot read_snapshot(const std::string& path, Bc bc = Bc::PeriodicTorus);

// Gnuplot script with energy/dissipation, budget-residual and semilog decay
// panels; references the CSV by relative path. Deterministic bytes.
void emit_gnuplot(const std::string& csv_relpath, const std::string& script_path,
                  double fit_lo = 0.0, double fit_hi = 0.0);

} // namespace nsac

#endif
