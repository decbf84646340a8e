#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "echogate/commands.hpp"
#include "echogate/config.hpp"
#include "echogate/constants.hpp"

using namespace echogate;
using nlohmann::json;

namespace {

// Column lookup by name so the tests read like the CSV schema.
double cell(const CsvTable& table, std::size_t row, const std::string& column) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == column) return table.rows.at(row).at(i);
    FAIL("no column '" << column << "'");
    return 0.0;
}

// Small, fast settings for the command smoke tests.
json quick_sweep() {
    return json{{"sweep", {{"temperatures_uk", {0.0, 100.0}}, {"samples", 40}}}};
}

}  // namespace

TEST_CASE("empty config yields the reference parameter set") {
    const RunConfig cfg = parse_config(json::object());
    CHECK(cfg.protocol == Protocol::spin_echo);
    CHECK(cfg.gate.c6_rc_r0 == 56.2);
    CHECK(cfg.gate.c6_rc_r1 == -25.6);
    CHECK(cfg.gate.spacing_um == 8.0);
    CHECK(cfg.gate.eta == 18.0);
    CHECK(cfg.gate.omega_c_mhz == 10.0);
    CHECK(cfg.gate.phi == kPi);
    CHECK(cfg.thermal.temperature_k == 0.0);
    CHECK(cfg.thermal.trap_depth_k == 20.0e-3);
    CHECK(cfg.thermal.waist_um == 1.0);
    CHECK(cfg.decay.lifetimes_us.at("rc") == 1200.0);
    CHECK(cfg.decay.lifetimes_us.at("r0") == 1200.0);
    CHECK(cfg.decay.lifetimes_us.at("r1") == 1200.0);
    CHECK(cfg.manybody.regime == Regime::dressing);
    CHECK(cfg.manybody.lattice.num_atoms == 4);
    CHECK(cfg.manybody.lattice.lattice_constant_um == 10.0);
    CHECK(cfg.manybody.dressing.delta_mhz == 50.0);
    CHECK(cfg.manybody.schedule.swap == SwapMode::ideal);
    CHECK(cfg.sweep.sampling.samples == 2000);
    CHECK(cfg.sweep.sampling.seed == 12345);
    CHECK(cfg.sweep.sampling.method == SamplingMethod::monte_carlo);
    CHECK(cfg.sweep.k_eff_rad_um == 0.0);
    CHECK(cfg.output_csv.empty());

    // An empty (all-defaults) file behaves the same.
    const RunConfig parsed = parse_config(std::string{});
    CHECK(to_json(parsed) == to_json(cfg));
}

TEST_CASE("config round-trips through its JSON form") {
    RunConfig cfg;
    cfg.protocol = Protocol::traditional;
    cfg.gate.spacing_um = 9.5;
    cfg.gate.eta = 21.0;
    cfg.gate.phi = 2.0;
    cfg.gate.wait_branch = 1;
    cfg.thermal.temperature_k = 137e-6;
    cfg.thermal.waist_um = 1.3;
    cfg.decay.lifetimes_us = {{"rc", 900.0}, {"r0", 1200.0}, {"r1", 850.0}};
    cfg.manybody.regime = Regime::near_resonant;
    cfg.manybody.lattice.num_atoms = 3;
    cfg.manybody.lattice.lattice_constant_um = 16.0;
    cfg.manybody.dressing.delta_mhz = 2.5;
    cfg.manybody.schedule.swap = SwapMode::finite;
    cfg.manybody.schedule.swap_rabi_mhz = 333.0;
    cfg.manybody.points_per_phase = 77;
    cfg.sweep.temperatures_uk = {0.0, 13.0, 480.0};
    cfg.sweep.sampling.samples = 123;
    cfg.sweep.sampling.seed = 987654321;
    cfg.sweep.sampling.method = SamplingMethod::gauss_hermite;
    cfg.sweep.sampling.nodes = 17;
    cfg.sweep.k_eff_rad_um = 20.0;
    cfg.output_csv = "out.csv";

    const json emitted = to_json(cfg);
    const RunConfig reparsed = parse_config(emitted);
    CHECK(to_json(reparsed) == emitted);
    CHECK(reparsed.protocol == Protocol::traditional);
    CHECK(reparsed.manybody.schedule.swap == SwapMode::finite);
    CHECK(reparsed.sweep.sampling.method == SamplingMethod::gauss_hermite);
    CHECK(reparsed.thermal.temperature_k == 137e-6);
    CHECK(reparsed.output_csv == "out.csv");
}

TEST_CASE("spacing override rescales the pair energies by the sixth power") {
    const RunConfig base = parse_config(json::object());
    const RunConfig wide = parse_config(json{{"gate", {{"spacing_um", 16.0}}}});
    const double v0_base = derive_frequencies(base.gate).v0;
    const double v0_wide = derive_frequencies(wide.gate).v0;
    CHECK(v0_wide == doctest::Approx(v0_base / 64.0).epsilon(1e-12));
}

TEST_CASE("invalid values are rejected with the field named") {
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", {{"eta", -3.0}}}}),
                         doctest::Contains("eta"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", {{"spacing_um", 0.0}}}}),
                         doctest::Contains("gate.spacing_um"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"thermal", {{"temperature_k", -1.0}}}}),
                         doctest::Contains("thermal.temperature_k"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"decay", {{"lifetimes_us", {{"rc", 0.0}}}}}}),
                         doctest::Contains("decay.lifetimes_us.rc"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"manybody", {{"num_atoms", 9}}}}),
                         doctest::Contains("num_atoms"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"sweep", {{"samples", 0}}}}),
                         doctest::Contains("sweep.samples"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"sweep", {{"temperatures_uk", json::array()}}}}),
                         doctest::Contains("sweep.temperatures_uk"), ConfigError);
}

TEST_CASE("unknown keys and wrong types are rejected") {
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", {{"etaa", 2.0}}}}),
                         doctest::Contains("unknown config field 'gate.etaa'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"gait", json::object()}}),
                         doctest::Contains("unknown config field 'gait'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", {{"eta", "wide"}}}}),
                         doctest::Contains("must be a number"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", {{"wait_branch", 0.5}}}}),
                         doctest::Contains("must be an integer"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"protocol", "smooth"}}),
                         doctest::Contains("spin_echo or traditional"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"sweep", {{"seed", -4}}}}),
                         doctest::Contains("non-negative integer"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json{{"gate", 7.0}}),
                         doctest::Contains("must be an object"), ConfigError);

    // Extra lifetime labels are fine: the map is keyed by level label.
    const RunConfig cfg =
        parse_config(json{{"decay", {{"lifetimes_us", {{"rd", 700.0}}}}}});
    CHECK(cfg.decay.lifetimes_us.at("rd") == 700.0);
    CHECK(cfg.decay.lifetimes_us.at("rc") == 1200.0);  // defaults kept
}

TEST_CASE("regime presets fill defaults that explicit fields still override") {
    const RunConfig near = parse_config(json{{"manybody", {{"regime", "near_resonant"}}}});
    CHECK(near.manybody.regime == Regime::near_resonant);
    CHECK(near.manybody.lattice.lattice_constant_um == 16.0);
    CHECK(near.manybody.dressing.delta_mhz == 2.5);

    const RunConfig mixed = parse_config(
        json{{"manybody", {{"regime", "near_resonant"}, {"lattice_constant_um", 12.0}}}});
    CHECK(mixed.manybody.lattice.lattice_constant_um == 12.0);
    CHECK(mixed.manybody.dressing.delta_mhz == 2.5);

    CHECK_THROWS_WITH_AS(parse_config(json{{"manybody", {{"regime", "nearby"}}}}),
                         doctest::Contains("dressing or near_resonant"), ConfigError);
}

TEST_CASE("config files and inline overrides compose in order") {
    const std::string path = "test_config_roundtrip.json";
    {
        std::ofstream out(path);
        out << json{{"gate", {{"eta", 20.0}}}, {"sweep", {{"samples", 64}}}}.dump();
    }
    const RunConfig cfg = parse_config(
        path, {"gate.eta=24", "protocol=traditional", "sweep.temperatures_uk=[0,50]",
               "output.csv=runs/out.csv", "manybody.swap=finite"});
    std::remove(path.c_str());
    CHECK(cfg.gate.eta == 24.0);                  // override beats the file
    CHECK(cfg.sweep.sampling.samples == 64);      // file beats the default
    CHECK(cfg.protocol == Protocol::traditional);
    CHECK(cfg.sweep.temperatures_uk == std::vector<double>{0.0, 50.0});
    CHECK(cfg.output_csv == "runs/out.csv");
    CHECK(cfg.manybody.schedule.swap == SwapMode::finite);

    CHECK_THROWS_WITH_AS(parse_config(std::string{}, {"gate.eta"}),
                         doctest::Contains("not of the form key=value"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(std::string("no_such_file.json")),
                         doctest::Contains("cannot open config file"), ConfigError);

    const std::string broken = "test_config_broken.json";
    {
        std::ofstream out(broken);
        out << "{ not json";
    }
    CHECK_THROWS_AS(parse_config(broken), ConfigError);
    std::remove(broken.c_str());
}

TEST_CASE("csv cells carry 12 significant digits and unix line endings") {
    CsvTable table;
    table.columns = {"a", "b_us"};
    table.add_row({1.0, -0.5});
    table.add_row({2.0 / 3.0, 1.23456789012345e-7});
    CHECK(table.to_csv() ==
          "a,b_us\n"
          "1.00000000000e+00,-5.00000000000e-01\n"
          "6.66666666667e-01,1.23456789012e-07\n");
    CHECK_THROWS_AS(table.add_row({1.0}), std::runtime_error);

    const std::string path = "test_config_table.csv";
    write_csv(table, path);
    std::ifstream in(path, std::ios::binary);
    const std::string on_disk((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    std::remove(path.c_str());
    CHECK(on_disk == table.to_csv());
}

TEST_CASE("derive emits the closed-form frequency table") {
    const RunConfig cfg = parse_config(json::object());
    const CsvTable table = run_derive(cfg);
    REQUIRE(table.rows.size() == 1);
    const DerivedFrequencies d = derive_frequencies(cfg.gate);
    CHECK(cell(table, 0, "V0_MHz") == mhz_from_angular(d.v0));
    CHECK(cell(table, 0, "V0_MHz") == doctest::Approx(214.4).epsilon(1e-3));
    CHECK(cell(table, 0, "T_wait_ns") == doctest::Approx(5.12).epsilon(1e-2));
    CHECK(cell(table, 0, "Omega_c_MHz") == 10.0);
    CHECK(cell(table, 0, "kappa") == d.kappa_ratio);
    CHECK(cell(table, 0, "t2_ns") == d.t2 * 1e3);
    CHECK(cell(table, 0, "eps1") == analytic_blockade(d).eps1);
}

TEST_CASE("trace follows the target pulses and ends refocused") {
    const RunConfig cfg = parse_config(json::object());
    const CsvTable table = run_trace(cfg);
    REQUIRE(table.rows.size() > 100);
    const DerivedFrequencies d = derive_frequencies(cfg.gate);
    CHECK(cell(table, 0, "t_us") == 0.0);
    CHECK(cell(table, 0, "pop_rc0") == doctest::Approx(1.0).epsilon(1e-12));
    const std::size_t last = table.rows.size() - 1;
    CHECK(cell(table, last, "t_us") == doctest::Approx(d.rydberg_window()).epsilon(1e-12));
    CHECK(1.0 - cell(table, last, "pop_rc0") <= 2e-5);  // echo closes the leak
    CHECK(cell(table, last, "pop_rcr1") <= 2e-5);
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        CHECK(cell(table, i, "t_us") >= cell(table, i - 1, "t_us"));
    CHECK(cell(table, last, "log10_pop_rcr1") <= std::log10(2e-5));

    // The traditional protocol traces its single 2pi pulse instead.  Its
    // blockade-shifted rotation misses a full return by a few 1e-3 — the
    // deficit the echo exists to cancel.
    RunConfig trad = cfg;
    trad.protocol = Protocol::traditional;
    const CsvTable t2 = run_trace(trad);
    CHECK(t2.columns == table.columns);
    const std::size_t l2 = t2.rows.size() - 1;
    CHECK(cell(t2, l2, "t_us") ==
          doctest::Approx(kTwoPi / derive_frequencies(trad.gate).omega_t2).epsilon(1e-12));
    CHECK(1.0 - cell(t2, l2, "pop_rc0") >= 1e-3);
    CHECK(1.0 - cell(t2, l2, "pop_rc0") <= 1e-2);
    CHECK(cell(t2, l2, "pop_rcr1") == 0.0);  // that level is never driven
}

TEST_CASE("gate-error reports one budget row at the thermal temperature") {
    const RunConfig cfg = parse_config(json{{"thermal", {{"temperature_k", 100e-6}}},
                                            {"sweep", {{"samples", 40}}}});
    const CsvTable table = run_gate_error(cfg);
    REQUIRE(table.rows.size() == 1);
    CHECK(cell(table, 0, "Ta_uK") == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(cell(table, 0, "E_total") ==
          doctest::Approx(cell(table, 0, "E_de") + cell(table, 0, "E_ro")).epsilon(1e-12));
    CHECK(cell(table, 0, "E_de") > 0.0);
    CHECK(cell(table, 0, "E_Do") > 0.0);
    CHECK(cell(table, 0, "dwell_rc_ns") > cell(table, 0, "dwell_r0_ns"));
    CHECK(cell(table, 0, "dwell_r1_ns") > 0.0);
}

TEST_CASE("sweep covers the configured grid deterministically") {
    const RunConfig cfg = parse_config(quick_sweep());
    const CsvTable a = run_sweep(cfg);
    const CsvTable b = run_sweep(cfg);
    CHECK(a.to_csv() == b.to_csv());  // same config + seed, byte-identical
    REQUIRE(a.rows.size() == 2);
    CHECK(cell(a, 0, "Ta_uK") == 0.0);
    CHECK(cell(a, 1, "Ta_uK") == 100.0);
    CHECK(cell(a, 1, "E_total") > cell(a, 0, "E_total"));

    json reseeded = quick_sweep();
    reseeded["sweep"]["seed"] = 777;
    const CsvTable c = run_sweep(parse_config(reseeded));
    CHECK(c.to_csv() != a.to_csv());  // the seed is live
    CHECK(cell(c, 1, "E_total") == doctest::Approx(cell(a, 1, "E_total")).epsilon(0.5));
}

TEST_CASE("manybody emits the observable series for both regimes") {
    const json fast{{"manybody", {{"num_atoms", 2}, {"points_per_phase", 25}}}};
    const RunConfig cfg = parse_config(fast);
    const CsvTable table = run_manybody(cfg);
    REQUIRE(table.rows.size() == 51);  // 2 * points + initial point
    CHECK(cell(table, 0, "t_us") == 0.0);
    CHECK(cell(table, 0, "magnetization") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cell(table, 0, "population_one") == doctest::Approx(0.5).epsilon(1e-12));
    const std::size_t last = table.rows.size() - 1;
    CHECK(cell(table, last, "magnetization") == doctest::Approx(1.0).epsilon(1e-3));

    json near = fast;
    near["manybody"]["regime"] = "near_resonant";
    const CsvTable nr = run_manybody(parse_config(near));
    CHECK(cell(nr, 0, "population_one") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cell(nr, nr.rows.size() - 1, "population_one") == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("compare puts both protocols on the same grid") {
    const RunConfig cfg = parse_config(quick_sweep());
    const CsvTable table = run_compare(cfg);
    REQUIRE(table.rows.size() == 2);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(cell(table, i, "error_ratio") ==
              doctest::Approx(cell(table, i, "trad_E_total") / cell(table, i, "echo_E_total"))
                  .epsilon(1e-12));
        CHECK(cell(table, i, "error_ratio") > 1.0);  // the echo wins everywhere
    }
    // Matches the single-protocol sweeps cell for cell.
    const CsvTable echo = run_sweep(cfg);
    CHECK(cell(table, 1, "echo_E_total") == cell(echo, 1, "E_total"));
}

TEST_CASE("commands dispatch by their CLI names") {
    const RunConfig cfg = parse_config(json::object());
    CHECK(run_command("derive", cfg).columns == run_derive(cfg).columns);
    CHECK(run_command("trace", cfg).columns.front() == "t_us");
    CHECK_THROWS_WITH_AS(run_command("sweep", cfg), doctest::Contains("unknown command"),
                         ConfigError);
}
