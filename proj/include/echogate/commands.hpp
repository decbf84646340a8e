#pragma once

#include <string>

#include "echogate/config.hpp"

namespace echogate {

// Each command turns a validated config into one table; the CLI writes the
// table to config.output_csv.  Everything here is deterministic for a fixed
// config (seeds included), so repeated runs give byte-identical CSV.

// Closed-form frequencies, durations, and blockade diagnostics of the pulse
// sequence; one row.
CsvTable run_derive(const RunConfig& config);

// Time-resolved populations and phase of the |control=rc, target=0> channel
// through the target-atom pulses (the control parked in Rydberg), starting
// from |rc,0>.  Log columns are floored at 1e-300.
CsvTable run_trace(const RunConfig& config);

// Error budget at the thermal block's temperature; one row.
CsvTable run_gate_error(const RunConfig& config);

// Error budget across the sweep block's temperature grid.
CsvTable run_sweep(const RunConfig& config);

// Observable series of the many-body echo run for the configured regime
// (dressing starts from all atoms in (|0>+|1>)/sqrt(2), near-resonant from
// all atoms in |1>).
CsvTable run_manybody(const RunConfig& config);

// Spin-echo and traditional budgets on the same temperature grid, plus
// their total-error ratio.
CsvTable run_compare(const RunConfig& config);

// Dispatch by CLI name: derive, trace, gate-error, sweep-temp, manybody,
// compare.  Unknown names throw ConfigError.
CsvTable run_command(const std::string& command, const RunConfig& config);

}  // namespace echogate
