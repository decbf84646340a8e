#include "echogate/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <utility>

namespace echogate {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
    fail("config field '" + path + "': " + why);
}

// Blocks are optional (missing means all defaults) but must be objects.
const json* find_block(const json& doc, const char* key) {
    if (!doc.contains(key)) return nullptr;
    const json& block = doc.at(key);
    if (!block.is_object()) fail_field(key, "must be an object");
    return &block;
}

// The read_* helpers overwrite `out` only when the key is present, so the
// caller's defaults survive sparse configs.
void read_number(const json* block, const std::string& prefix, const char* key, double& out) {
    if (!block || !block->contains(key)) return;
    const json& value = block->at(key);
    if (!value.is_number()) fail_field(prefix + key, "must be a number");
    out = value.get<double>();
}

void read_int(const json* block, const std::string& prefix, const char* key, int& out) {
    if (!block || !block->contains(key)) return;
    const json& value = block->at(key);
    if (!value.is_number_integer()) fail_field(prefix + key, "must be an integer");
    out = value.get<int>();
}

void read_seed(const json* block, const std::string& prefix, const char* key,
               std::uint64_t& out) {
    if (!block || !block->contains(key)) return;
    const json& value = block->at(key);
    if (!value.is_number_integer() ||
        (!value.is_number_unsigned() && value.get<std::int64_t>() < 0))
        fail_field(prefix + key, "must be a non-negative integer");
    out = value.get<std::uint64_t>();
}

void read_string(const json* block, const std::string& prefix, const char* key,
                 std::string& out) {
    if (!block || !block->contains(key)) return;
    const json& value = block->at(key);
    if (!value.is_string()) fail_field(prefix + key, "must be a string");
    out = value.get<std::string>();
}

SamplingMethod method_from_name(const std::string& name) {
    if (name == "monte_carlo") return SamplingMethod::monte_carlo;
    if (name == "gauss_hermite") return SamplingMethod::gauss_hermite;
    fail_field("sweep.method", "unknown value '" + name + "' (use monte_carlo or gauss_hermite)");
}

std::string to_name(SamplingMethod method) {
    return method == SamplingMethod::monte_carlo ? "monte_carlo" : "gauss_hermite";
}

SwapMode swap_from_name(const std::string& name) {
    if (name == "ideal") return SwapMode::ideal;
    if (name == "finite") return SwapMode::finite;
    fail_field("manybody.swap", "unknown value '" + name + "' (use ideal or finite)");
}

std::string to_name(SwapMode mode) { return mode == SwapMode::ideal ? "ideal" : "finite"; }

// Reject any key the documented schema does not contain; typos in --set
// overrides would otherwise silently change nothing.  decay.lifetimes_us is
// an open map keyed by level label, so its contents are exempt.
void check_keys(const json& doc, const json& schema, const std::string& prefix) {
    for (const auto& item : doc.items()) {
        if (!schema.contains(item.key())) fail("unknown config field '" + prefix + item.key() + "'");
        const std::string path = prefix + item.key();
        const json& sub = schema.at(item.key());
        if (sub.is_object() && item.value().is_object() && path != "decay.lifetimes_us")
            check_keys(item.value(), sub, path + ".");
    }
}

// "dotted.path=value" applied onto the document; the value is JSON when it
// parses as JSON (numbers, arrays, booleans) and a plain string otherwise.
void apply_override(json& doc, const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
        fail("override '" + item + "' is not of the form key=value");
    std::string pointer = "/" + item.substr(0, eq);
    for (char& c : pointer)
        if (c == '.') c = '/';
    json value = json::parse(item.substr(eq + 1), nullptr, false);
    if (value.is_discarded()) value = item.substr(eq + 1);
    try {
        doc[json::json_pointer(pointer)] = std::move(value);
    } catch (const json::exception& e) {
        fail("override '" + item + "': " + e.what());
    }
}

}  // namespace

void ManybodySettings::validate() const {
    lattice.validate();
    dressing.validate();
    schedule.validate();
    if (points_per_phase < 1)
        throw std::invalid_argument("manybody.points_per_phase must be >= 1");
}

void SweepSettings::validate() const {
    if (temperatures_uk.empty())
        throw std::invalid_argument("sweep.temperatures_uk must not be empty");
    for (double t : temperatures_uk)
        if (!(t >= 0.0)) throw std::invalid_argument("sweep.temperatures_uk must be >= 0");
    if (sampling.samples < 1) throw std::invalid_argument("sweep.samples must be >= 1");
    if (sampling.nodes < 1) throw std::invalid_argument("sweep.nodes must be >= 1");
    if (sampling.threads < 0) throw std::invalid_argument("sweep.threads must be >= 0");
    if (k_eff_rad_um < 0.0) throw std::invalid_argument("sweep.k_eff_rad_um must be >= 0");
}

void RunConfig::validate() const {
    try {
        gate.validate();
        thermal.validate();
        if (decay.lifetimes_us.empty())
            throw std::invalid_argument("decay.lifetimes_us must not be empty");
        for (const auto& [label, tau] : decay.lifetimes_us)
            if (!(tau > 0.0))
                throw std::invalid_argument("decay.lifetimes_us." + label + " must be > 0");
        manybody.validate();
        sweep.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "spin_echo") return Protocol::spin_echo;
    if (name == "traditional") return Protocol::traditional;
    fail_field("protocol", "unknown value '" + name + "' (use spin_echo or traditional)");
}

Regime regime_from_name(const std::string& name) {
    if (name == "dressing") return Regime::dressing;
    if (name == "near_resonant") return Regime::near_resonant;
    fail_field("manybody.regime",
               "unknown value '" + name + "' (use dressing or near_resonant)");
}

std::string to_name(Protocol protocol) {
    return protocol == Protocol::spin_echo ? "spin_echo" : "traditional";
}

std::string to_name(Regime regime) {
    return regime == Regime::dressing ? "dressing" : "near_resonant";
}

nlohmann::json to_json(const RunConfig& c) {
    json lifetimes = json::object();
    for (const auto& [label, tau] : c.decay.lifetimes_us) lifetimes[label] = tau;
    return json{
        {"protocol", to_name(c.protocol)},
        {"gate",
         {{"c6_rc_r0", c.gate.c6_rc_r0},
          {"c6_rc_r1", c.gate.c6_rc_r1},
          {"spacing_um", c.gate.spacing_um},
          {"eta", c.gate.eta},
          {"omega_c_mhz", c.gate.omega_c_mhz},
          {"phi", c.gate.phi},
          {"t_gap", c.gate.t_gap},
          {"phi2", c.gate.phi2},
          {"phi3", c.gate.phi3},
          {"wait_branch", c.gate.wait_branch}}},
        {"thermal",
         {{"temperature_k", c.thermal.temperature_k},
          {"trap_depth_k", c.thermal.trap_depth_k},
          {"waist_um", c.thermal.waist_um},
          {"mass_kg", c.thermal.mass_kg}}},
        {"decay", {{"lifetimes_us", lifetimes}}},
        {"manybody",
         {{"regime", to_name(c.manybody.regime)},
          {"num_atoms", c.manybody.lattice.num_atoms},
          {"lattice_constant_um", c.manybody.lattice.lattice_constant_um},
          {"omega_mhz", c.manybody.dressing.omega_mhz},
          {"delta_mhz", c.manybody.dressing.delta_mhz},
          {"c6_00", c.manybody.dressing.c6_00},
          {"c6_11", c.manybody.dressing.c6_11},
          {"t0_us", c.manybody.schedule.t0_us},
          {"swap", to_name(c.manybody.schedule.swap)},
          {"swap_rabi_mhz", c.manybody.schedule.swap_rabi_mhz},
          {"points_per_phase", c.manybody.points_per_phase}}},
        {"sweep",
         {{"temperatures_uk", c.sweep.temperatures_uk},
          {"samples", c.sweep.sampling.samples},
          {"seed", c.sweep.sampling.seed},
          {"method", to_name(c.sweep.sampling.method)},
          {"nodes", c.sweep.sampling.nodes},
          {"threads", c.sweep.sampling.threads},
          {"k_eff_rad_um", c.sweep.k_eff_rad_um}}},
        {"output", {{"csv", c.output_csv}}}};
}

RunConfig parse_config(const nlohmann::json& document) {
    if (!document.is_object() && !document.is_null())
        fail("config root must be a JSON object");
    const json doc = document.is_null() ? json::object() : document;
    check_keys(doc, to_json(RunConfig{}), "");

    RunConfig cfg;

    // Regime first: it sets the many-body defaults that explicit fields
    // (read below) then override.
    const json* manybody = find_block(doc, "manybody");
    std::string regime_name = to_name(cfg.manybody.regime);
    read_string(manybody, "manybody.", "regime", regime_name);
    cfg.manybody.regime = regime_from_name(regime_name);
    if (cfg.manybody.regime == Regime::near_resonant) {
        cfg.manybody.lattice.lattice_constant_um = 16.0;
        cfg.manybody.dressing.delta_mhz = 2.5;
    }

    std::string protocol_name = to_name(cfg.protocol);
    read_string(&doc, "", "protocol", protocol_name);
    cfg.protocol = protocol_from_name(protocol_name);

    const json* gate = find_block(doc, "gate");
    read_number(gate, "gate.", "c6_rc_r0", cfg.gate.c6_rc_r0);
    read_number(gate, "gate.", "c6_rc_r1", cfg.gate.c6_rc_r1);
    read_number(gate, "gate.", "spacing_um", cfg.gate.spacing_um);
    read_number(gate, "gate.", "eta", cfg.gate.eta);
    read_number(gate, "gate.", "omega_c_mhz", cfg.gate.omega_c_mhz);
    read_number(gate, "gate.", "phi", cfg.gate.phi);
    read_number(gate, "gate.", "t_gap", cfg.gate.t_gap);
    read_number(gate, "gate.", "phi2", cfg.gate.phi2);
    read_number(gate, "gate.", "phi3", cfg.gate.phi3);
    read_int(gate, "gate.", "wait_branch", cfg.gate.wait_branch);

    const json* thermal = find_block(doc, "thermal");
    read_number(thermal, "thermal.", "temperature_k", cfg.thermal.temperature_k);
    read_number(thermal, "thermal.", "trap_depth_k", cfg.thermal.trap_depth_k);
    read_number(thermal, "thermal.", "waist_um", cfg.thermal.waist_um);
    read_number(thermal, "thermal.", "mass_kg", cfg.thermal.mass_kg);

    const json* decay = find_block(doc, "decay");
    if (decay && decay->contains("lifetimes_us")) {
        const json& map = decay->at("lifetimes_us");
        if (!map.is_object()) fail_field("decay.lifetimes_us", "must be an object");
        for (const auto& item : map.items()) {
            if (!item.value().is_number())
                fail_field("decay.lifetimes_us." + item.key(), "must be a number");
            cfg.decay.lifetimes_us[item.key()] = item.value().get<double>();
        }
    }

    read_int(manybody, "manybody.", "num_atoms", cfg.manybody.lattice.num_atoms);
    read_number(manybody, "manybody.", "lattice_constant_um",
                cfg.manybody.lattice.lattice_constant_um);
    read_number(manybody, "manybody.", "omega_mhz", cfg.manybody.dressing.omega_mhz);
    read_number(manybody, "manybody.", "delta_mhz", cfg.manybody.dressing.delta_mhz);
    read_number(manybody, "manybody.", "c6_00", cfg.manybody.dressing.c6_00);
    read_number(manybody, "manybody.", "c6_11", cfg.manybody.dressing.c6_11);
    read_number(manybody, "manybody.", "t0_us", cfg.manybody.schedule.t0_us);
    std::string swap_name = to_name(cfg.manybody.schedule.swap);
    read_string(manybody, "manybody.", "swap", swap_name);
    cfg.manybody.schedule.swap = swap_from_name(swap_name);
    read_number(manybody, "manybody.", "swap_rabi_mhz", cfg.manybody.schedule.swap_rabi_mhz);
    read_int(manybody, "manybody.", "points_per_phase", cfg.manybody.points_per_phase);

    const json* sweep = find_block(doc, "sweep");
    if (sweep && sweep->contains("temperatures_uk")) {
        const json& grid = sweep->at("temperatures_uk");
        if (!grid.is_array()) fail_field("sweep.temperatures_uk", "must be an array of numbers");
        cfg.sweep.temperatures_uk.clear();
        for (const json& t : grid) {
            if (!t.is_number()) fail_field("sweep.temperatures_uk", "must be an array of numbers");
            cfg.sweep.temperatures_uk.push_back(t.get<double>());
        }
    }
    read_int(sweep, "sweep.", "samples", cfg.sweep.sampling.samples);
    read_seed(sweep, "sweep.", "seed", cfg.sweep.sampling.seed);
    std::string method_name = to_name(cfg.sweep.sampling.method);
    read_string(sweep, "sweep.", "method", method_name);
    cfg.sweep.sampling.method = method_from_name(method_name);
    read_int(sweep, "sweep.", "nodes", cfg.sweep.sampling.nodes);
    read_int(sweep, "sweep.", "threads", cfg.sweep.sampling.threads);
    read_number(sweep, "sweep.", "k_eff_rad_um", cfg.sweep.k_eff_rad_um);

    const json* output = find_block(doc, "output");
    read_string(output, "output.", "csv", cfg.output_csv);

    cfg.validate();
    return cfg;
}

RunConfig parse_config(nlohmann::json document, const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) apply_override(document, item);
    const json& fixed = document;
    return parse_config(fixed);
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    json doc = json::object();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) fail("cannot open config file '" + path + "'");
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            fail("config file '" + path + "': " + e.what());
        }
    }
    return parse_config(std::move(doc), overrides);
}

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::runtime_error("csv row has " + std::to_string(row.size()) +
                                 " cells for " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    char cell[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::snprintf(cell, sizeof cell, "%.11e", row[i]);
            out += cell;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const CsvTable& table, const std::string& path) {
    if (path.empty()) {
        std::cout << table.to_csv();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot open output file '" + path + "'");
    out << table.to_csv();
    if (!out) fail("failed writing output file '" + path + "'");
}

}  // namespace echogate
