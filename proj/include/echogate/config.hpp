#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "echogate/errorbudget.hpp"
#include "echogate/manybody.hpp"

namespace echogate {

// Anything wrong with user-supplied configuration: unreadable file, JSON
// syntax error, unknown key, wrong type, or an invariant violation.  The
// CLI maps this to exit code 2; other exceptions count as numeric failures
// and map to exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Preset parameter sets for the many-body echo: the dressing regime detunes
// the drive far off resonance (delta >> omega) on a tighter lattice, the
// near-resonant regime brings it close (delta ~ omega/2) on a wider one.
enum class Regime { dressing, near_resonant };

// Many-body block: lattice/drive physics plus the regime preset and trace
// resolution.  The regime chooses block defaults and the initial product
// state of the run; explicit fields always win over the preset.
struct ManybodySettings {
    Regime regime = Regime::dressing;
    LatticeConfig lattice;
    DressingParams dressing;
    EchoSchedule schedule;
    int points_per_phase = 200;

    void validate() const;
};

// Sweep block: the temperature grid plus how thermal averages are sampled.
// k_eff_rad_um = 0 selects the built-in two-photon (480/780 nm) value.
struct SweepSettings {
    std::vector<double> temperatures_uk = {0.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0};
    SamplingSpec sampling;
    double k_eff_rad_um = 0.0;

    void validate() const;
};

// One JSON document drives every command.  Blocks a command does not use
// are still parsed and validated, so a config is either wholly good or
// rejected with the offending field named.  Field units match the structs
// they fill (documented in the README schema), which keeps the JSON
// round-trip exact.
struct RunConfig {
    Protocol protocol = Protocol::spin_echo;
    GateParams gate;
    ThermalModel thermal;
    DecayModel decay = DecayModel::uniform(1200.0);
    ManybodySettings manybody;
    SweepSettings sweep;
    std::string output_csv;  // empty: write to stdout

    void validate() const;
};

// Fills defaults, applies the document's fields, validates.  Unknown keys
// and type mismatches are errors (they are how typos die).
RunConfig parse_config(const nlohmann::json& document);

// Same, with "dotted.path=value" overrides applied onto the document first.
RunConfig parse_config(nlohmann::json document, const std::vector<std::string>& overrides);

// File + inline overrides, applied in that order.  An empty path yields the
// defaults.  Each override is "dotted.path=value"; the value is parsed as
// JSON when possible and taken as a string otherwise.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Inverse of parse_config: emits every field, so re-parsing the result
// reproduces the config exactly.
nlohmann::json to_json(const RunConfig& config);

// String names used in configs and on the command line.
Protocol protocol_from_name(const std::string& name);
Regime regime_from_name(const std::string& name);
std::string to_name(Protocol protocol);
std::string to_name(Regime regime);

// Rectangular numeric table with one header row; units are embedded in the
// column names (e.g. "Ta_uK").  Cells render in scientific notation with
// 12 significant digits, so equal doubles give byte-identical files.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);  // throws if the width is wrong
    std::string to_csv() const;             // '\n' line endings
};

// To the named file, or to stdout when the path is empty.
void write_csv(const CsvTable& table, const std::string& path);

}  // namespace echogate
