#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "echogate/commands.hpp"

namespace py = pybind11;
using namespace echogate;

namespace {

RunConfig config_from(const std::string& config_json,
                      const std::vector<std::string>& overrides) {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_json.empty()) {
        doc = nlohmann::json::parse(config_json, nullptr, false);
        if (doc.is_discarded()) throw ConfigError("config string is not valid JSON");
    }
    return parse_config(std::move(doc), overrides);
}

py::dict table_to_dict(const CsvTable& table) {
    py::list columns;
    for (const std::string& name : table.columns) columns.append(name);
    py::list rows;
    for (const auto& row : table.rows) {
        py::list cells;
        for (double v : row) cells.append(v);
        rows.append(cells);
    }
    py::dict out;
    out["columns"] = columns;
    out["rows"] = rows;
    out["csv"] = table.to_csv();
    return out;
}

}  // namespace

PYBIND11_MODULE(_echogate, m) {
    m.doc() = "Spin-echo Rydberg controlled-phase gate toolkit: closed-form pulse "
              "derivation, state-vector gate simulation, thermal error budgets, and "
              "many-body echo runs.  Commands mirror the echogate CLI and return "
              "{'columns', 'rows', 'csv'}.";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "run",
        [](const std::string& command, const std::string& config,
           const std::vector<std::string>& overrides) {
            return table_to_dict(run_command(command, config_from(config, overrides)));
        },
        py::arg("command"), py::arg("config") = "{}",
        py::arg("overrides") = std::vector<std::string>{},
        "Run one command (derive, trace, gate-error, sweep-temp, manybody, compare) "
        "in-process.  `config` is the JSON document text; `overrides` are repeated "
        "dotted.path=value strings, applied after it.");

    m.def(
        "default_config", [] { return to_json(RunConfig{}).dump(2); },
        "The full JSON config with every field at its default, as text.");

    m.def(
        "derive",
        [](const std::string& config, const std::vector<std::string>& overrides) {
            const CsvTable table = run_derive(config_from(config, overrides));
            py::dict out;
            for (std::size_t i = 0; i < table.columns.size(); ++i)
                out[py::str(table.columns[i])] = table.rows.at(0).at(i);
            return out;
        },
        py::arg("config") = "{}", py::arg("overrides") = std::vector<std::string>{},
        "Closed-form pulse frequencies, durations, and blockade diagnostics as a "
        "column -> value dict.");

    m.def(
        "gate_matrix",
        [](const std::string& config, const std::vector<std::string>& overrides) {
            const RunConfig cfg = config_from(config, overrides);
            const auto d = derive_frequencies(cfg.gate);
            const Sequence seq = cfg.protocol == Protocol::spin_echo
                                     ? build_spin_echo_sequence(cfg.gate, d)
                                     : build_traditional_sequence(cfg.gate, d);
            const GateMatrix g = simulate_gate(seq, cfg.gate.phi);
            py::list matrix;
            for (int r = 0; r < 4; ++r) {
                py::list row;
                for (int c = 0; c < 4; ++c) row.append(std::complex<double>(g.matrix(r, c)));
                matrix.append(row);
            }
            py::dict out;
            out["matrix"] = matrix;
            out["fidelity_00"] = g.fidelity_00;
            out["frobenius_distance"] = g.frobenius_distance;
            return out;
        },
        py::arg("config") = "{}", py::arg("overrides") = std::vector<std::string>{},
        "Simulated gate on the computational basis {00,01,10,11} for the configured "
        "protocol at frozen geometry, with its distance from the ideal gate.");
}
