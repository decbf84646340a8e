#include "echogate/commands.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace echogate {

namespace {

// Trace resolution (substeps per stage).  The trace is presentation-only;
// stage endpoints are exact regardless of this value.
constexpr int kTraceSubsteps = 400;

double log10_floored(double p) { return std::log10(std::max(p, 1e-300)); }

double dwell_ns(const ErrorReport& report, const std::string& label) {
    const auto it = report.dwell_us.find(label);
    return it == report.dwell_us.end() ? 0.0 : it->second * 1e3;
}

std::vector<double> kelvin_grid(const std::vector<double>& temperatures_uk) {
    std::vector<double> kelvin;
    kelvin.reserve(temperatures_uk.size());
    for (double t : temperatures_uk) kelvin.push_back(t * 1e-6);
    return kelvin;
}

}  // namespace

CsvTable run_derive(const RunConfig& config) {
    const DerivedFrequencies d = derive_frequencies(config.gate);
    const AnalyticBlockade b = analytic_blockade(d);
    const double phi4 = pulse4_phase(config.gate.phi, config.gate.phi2, config.gate.phi3, d.v0,
                                     config.gate.t_gap);
    CsvTable table;
    table.columns = {"V0_MHz",          "V1_MHz",
                     "Vplus_MHz",       "kappa",
                     "Omega_c_MHz",     "Omega_t2_MHz",
                     "Omega_t3_MHz",    "Omega_t4_MHz",
                     "t1_ns",           "t2_ns",
                     "t3_ns",           "T_wait_ns",
                     "t4_ns",           "t5_ns",
                     "rydberg_window_ns", "phi4_rad",
                     "blockade_ratio_t2", "blockade_ratio_t3",
                     "omega_bar_t2_MHz", "omega_bar_t3_MHz",
                     "kappa2",          "kappa3",
                     "eps1",            "eps2",
                     "alpha_rad",       "eps_plus_MHz",
                     "eps_minus_MHz"};
    table.add_row({mhz_from_angular(d.v0), mhz_from_angular(d.v1), mhz_from_angular(d.v_plus),
                   d.kappa_ratio, mhz_from_angular(d.omega_c), mhz_from_angular(d.omega_t2),
                   mhz_from_angular(d.omega_t3), mhz_from_angular(d.omega_t4), d.t1 * 1e3,
                   d.t2 * 1e3, d.t3 * 1e3, d.t_wait * 1e3, d.t4 * 1e3, d.t5 * 1e3,
                   d.rydberg_window() * 1e3, phi4, d.blockade_ratio_t2, d.blockade_ratio_t3,
                   mhz_from_angular(b.omega_bar_t2), mhz_from_angular(b.omega_bar_t3), b.kappa2,
                   b.kappa3, b.eps1, b.eps2, b.alpha, mhz_from_angular(b.eps_plus),
                   mhz_from_angular(b.eps_minus)});
    return table;
}

CsvTable run_trace(const RunConfig& config) {
    const DerivedFrequencies d = derive_frequencies(config.gate);
    const Sequence seq = config.protocol == Protocol::spin_echo
                             ? build_spin_echo_sequence(config.gate, d)
                             : build_traditional_sequence(config.gate, d);
    // Watch the target-atom dynamics between the two control pulses, with
    // the control already parked in |rc>.
    Sequence mid;
    mid.interactions = seq.interactions;
    mid.stages.assign(seq.stages.begin() + 1, seq.stages.end() - 1);
    const StateVector initial = StateVector::basis_state(gate_basis(), {"rc", "0"});
    const Trajectory traj = run_sequence_traced(mid, initial, kTraceSubsteps);

    const auto pop_rc0 = traj.population_series({"rc", "0"});
    const auto pop_rcr0 = traj.population_series({"rc", "r0"});
    const auto pop_rcr1 = traj.population_series({"rc", "r1"});
    const auto arg_rc0 = traj.argument_series({"rc", "0"});

    CsvTable table;
    table.columns = {"t_us",          "pop_rc0",       "pop_rcr0",      "pop_rcr1",
                     "arg_rc0_rad",   "log10_pop_rc0", "log10_pop_rcr0", "log10_pop_rcr1"};
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        table.add_row({traj.times[i], pop_rc0[i], pop_rcr0[i], pop_rcr1[i], arg_rc0[i],
                       log10_floored(pop_rc0[i]), log10_floored(pop_rcr0[i]),
                       log10_floored(pop_rcr1[i])});
    return table;
}

CsvTable run_gate_error(const RunConfig& config) {
    const auto reports =
        sweep_temperature(config.gate, {config.thermal.temperature_k}, config.thermal,
                          config.decay, config.sweep.sampling, config.protocol,
                          config.sweep.k_eff_rad_um);
    const ErrorReport& r = reports.front();
    CsvTable table;
    table.columns = {"Ta_uK", "E_de", "E_ro", "E_Do", "E_total",
                     "dwell_rc_ns", "dwell_r0_ns", "dwell_r1_ns"};
    table.add_row({r.temperature_k * 1e6, r.e_de, r.e_ro, r.e_do, r.total, dwell_ns(r, "rc"),
                   dwell_ns(r, "r0"), dwell_ns(r, "r1")});
    return table;
}

CsvTable run_sweep(const RunConfig& config) {
    const auto reports = sweep_temperature(config.gate, kelvin_grid(config.sweep.temperatures_uk),
                                           config.thermal, config.decay, config.sweep.sampling,
                                           config.protocol, config.sweep.k_eff_rad_um);
    CsvTable table;
    table.columns = {"Ta_uK", "E_de", "E_ro", "E_Do", "E_total"};
    for (std::size_t i = 0; i < reports.size(); ++i)
        table.add_row({config.sweep.temperatures_uk[i], reports[i].e_de, reports[i].e_ro,
                       reports[i].e_do, reports[i].total});
    return table;
}

CsvTable run_manybody(const RunConfig& config) {
    const ManybodySettings& mb = config.manybody;
    const BasisPtr basis = manybody_basis(mb.lattice.num_atoms);
    // Dressing regime starts from all atoms in |up> = (|0>+|1>)/sqrt(2) and
    // watches the transverse magnetization; near-resonant starts from all
    // atoms in |1> and watches the |1> population.
    Eigen::VectorXcd local = Eigen::VectorXcd::Zero(basis->scheme(0).levels.size());
    if (mb.regime == Regime::dressing) {
        const double a = 1.0 / std::sqrt(2.0);
        local(basis->level_index(0, "0")) = a;
        local(basis->level_index(0, "1")) = a;
    } else {
        local(basis->level_index(0, "1")) = 1.0;
    }
    const std::vector<Eigen::VectorXcd> locals(mb.lattice.num_atoms, local);
    const StateVector initial = StateVector::product_state(basis, locals);

    const EchoRun run = run_echo(mb.lattice, mb.dressing, initial, mb.schedule,
                                 mb.points_per_phase);
    CsvTable table;
    table.columns = {"t_us", "magnetization", "population_one"};
    for (std::size_t i = 0; i < run.series.times_us.size(); ++i)
        table.add_row({run.series.times_us[i], run.series.magnetization[i],
                       run.series.population_one[i]});
    return table;
}

CsvTable run_compare(const RunConfig& config) {
    const auto grid = kelvin_grid(config.sweep.temperatures_uk);
    const auto echo =
        sweep_temperature(config.gate, grid, config.thermal, config.decay,
                          config.sweep.sampling, Protocol::spin_echo, config.sweep.k_eff_rad_um);
    const auto trad =
        sweep_temperature(config.gate, grid, config.thermal, config.decay,
                          config.sweep.sampling, Protocol::traditional, config.sweep.k_eff_rad_um);
    CsvTable table;
    table.columns = {"Ta_uK",     "echo_E_de", "echo_E_ro", "echo_E_Do", "echo_E_total",
                     "trad_E_de", "trad_E_ro", "trad_E_Do", "trad_E_total", "error_ratio"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ErrorReport& e = echo[i];
        const ErrorReport& t = trad[i];
        table.add_row({config.sweep.temperatures_uk[i], e.e_de, e.e_ro, e.e_do, e.total, t.e_de,
                       t.e_ro, t.e_do, t.total, t.total / e.total});
    }
    return table;
}

CsvTable run_command(const std::string& command, const RunConfig& config) {
    if (command == "derive") return run_derive(config);
    if (command == "trace") return run_trace(config);
    if (command == "gate-error") return run_gate_error(config);
    if (command == "sweep-temp") return run_sweep(config);
    if (command == "manybody") return run_manybody(config);
    if (command == "compare") return run_compare(config);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace echogate
