#include <doctest.h>

#include <cmath>

#include "echogate/constants.hpp"
#include "echogate/errorbudget.hpp"

using namespace echogate;

TEST_CASE("thermal model: spreads and speeds") {
    ThermalModel t;
    t.temperature_k = 20e-6;  // 20 uK in the 20 mK reference trap
    CHECK(t.axial_sigma() == doctest::Approx(0.015811388300841896).epsilon(1e-14));
    CHECK(t.spacing_sigma() == doctest::Approx(0.022360679774997897).epsilon(1e-14));

    t.temperature_k = 10e-6;
    CHECK(t.axial_speed() == doctest::Approx(0.03093030945712734).epsilon(1e-12));
    t.temperature_k = 50e-6;
    CHECK(t.axial_speed() == doctest::Approx(0.06916227451124134).epsilon(1e-12));

    // Harmonic approximation holds up to U/10.
    t.temperature_k = 2.0e-3;
    CHECK(t.harmonic_valid());
    t.temperature_k = 2.1e-3;
    CHECK_FALSE(t.harmonic_valid());

    t.trap_depth_k = -1.0;
    CHECK_THROWS_AS(t.axial_sigma(), std::invalid_argument);
}

TEST_CASE("drift scenario bookkeeping") {
    const auto d = derive_frequencies(GateParams{});
    const auto s = DriftScenario::make(d, 8.0, 0.1, +1);

    // Representative drift times: middle of the wait and middle of pulse 4,
    // measured with the pulse-2..4 weighting.
    CHECK(s.t_mid_wait == doctest::Approx(0.01707014398261342).epsilon(1e-13));
    CHECK(s.t_pulse4 == doctest::Approx(0.05128901928823689).epsilon(1e-13));
    CHECK(s.spacing_early == 8.0);
    CHECK(s.spacing_wait == doctest::Approx(8.0 + 2 * 0.1 * s.t_mid_wait).epsilon(1e-14));
    CHECK(s.spacing_late == doctest::Approx(8.0 + 2 * 0.1 * s.t_pulse4).epsilon(1e-14));

    // Approaching atoms shrink the spacing by the same amounts.
    const auto sm = DriftScenario::make(d, 8.0, 0.1, -1);
    CHECK(sm.spacing_wait == doctest::Approx(16.0 - s.spacing_wait).epsilon(1e-14));
    CHECK(sm.spacing_late == doctest::Approx(16.0 - s.spacing_late).epsilon(1e-14));

    CHECK_THROWS_AS(DriftScenario::make(d, 8.0, 0.1, 0), std::invalid_argument);
    // Unphysically fast approach collapses the pair.
    CHECK_THROWS_AS(DriftScenario::make(d, 8.0, 1e4, -1), std::invalid_argument);

    // Stage mapping: early spacings through pulse 3, then wait, then late.
    const auto seq = build_spin_echo_sequence(GateParams{}, d);
    const auto spacings = drift_spacings(seq, s);
    REQUIRE(spacings.size() == 6);
    CHECK(spacings[0] == s.spacing_early);
    CHECK(spacings[2] == s.spacing_early);
    CHECK(spacings[3] == s.spacing_wait);
    CHECK(spacings[4] == s.spacing_late);
    CHECK(spacings[5] == s.spacing_late);

    // The traditional sequence has no wait stage: frozen at the start value.
    const auto trad = build_traditional_sequence(GateParams{}, d);
    for (double x : drift_spacings(trad, s)) CHECK(x == s.spacing_early);
}

TEST_CASE("rydberg dwell times") {
    const GateParams p;
    const auto d = derive_frequencies(p);
    const auto seq = build_spin_echo_sequence(p, d);
    const auto basis = gate_basis();

    SUBCASE("input |11> never excites anything") {
        const auto traj = run_sequence_traced(seq, StateVector::basis_state(basis, {"1", "1"}));
        const auto dwell = rydberg_dwell({traj});
        for (const auto& [label, value] : dwell) CHECK(value == doctest::Approx(0.0));
    }

    SUBCASE("input |00>: control sits in rc through the target pulses") {
        const auto traj = run_sequence_traced(seq, StateVector::basis_state(basis, {"0", "0"}));
        // Dwell restricted to pulses 2..4: the advertised Rydberg window.
        const double t_lo = d.t1;
        const double t_hi = d.t1 + d.rydberg_window();
        const double dwell_rc = integrated_population(traj, 0, "rc", t_lo, t_hi);
        CHECK(dwell_rc == doctest::Approx(d.rydberg_window()).epsilon(0.03));
        // Full-sequence dwell adds the two pi-pulse ramps, t1/2 each.
        const double full = integrated_population(traj, 0, "rc", 0.0, traj.times.back());
        CHECK(full == doctest::Approx(d.rydberg_window() + d.t1).epsilon(0.03));
    }

    SUBCASE("four-input average and decay error") {
        const auto dwell = gate_dwell(seq);
        // Control is excited for inputs |00> and |01> only: mean is half of
        // (window + ramps); target levels pick up pulse-2/3/4 fractions.
        CHECK(dwell.at("rc") ==
              doctest::Approx((d.rydberg_window() + d.t1) / 2.0).epsilon(0.05));
        CHECK(dwell.at("r0") > 0.002);
        CHECK(dwell.at("r0") < 0.006);
        CHECK(dwell.at("r1") > 0.006);
        CHECK(dwell.at("r1") < 0.012);

        const double e_de = decay_error(dwell, DecayModel::uniform(1200.0));
        CHECK(e_de >= 5e-5);
        CHECK(e_de <= 1e-4);

        // Linearity: doubling every lifetime halves the estimate.
        const double e_half = decay_error(dwell, DecayModel::uniform(2400.0));
        CHECK(e_half == doctest::Approx(e_de / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("decay error guards") {
    CHECK(decay_error({}, DecayModel::uniform(1200.0)) == 0.0);
    CHECK(decay_error({{"rc", 0.0}}, DecayModel{}) == 0.0);  // unpopulated, no lifetime needed
    CHECK_THROWS_AS(decay_error({{"rc", 0.05}}, DecayModel{}), std::invalid_argument);
    CHECK_THROWS_AS(DecayModel::uniform(-1.0), std::invalid_argument);
}

TEST_CASE("doppler dephasing formula") {
    const double k = k_eff_two_photon();
    CHECK(k == doctest::Approx(5.034603611522106).epsilon(1e-14));

    CHECK(doppler_error(0.0, k, 0.097369, kMassRb87Kg) == 0.0);
    CHECK(doppler_error(10e-6, k, 0.09736901928823691, kMassRb87Kg) ==
          doctest::Approx(5.747192389532474e-05).epsilon(1e-12));

    // Monotone in temperature; saturates at 1/2.
    double previous = -1.0;
    for (int i = 0; i <= 10; ++i) {
        const double e = doppler_error(i * 20e-6, k, 0.0974, kMassRb87Kg);
        CHECK(e >= previous);
        previous = e;
    }
    CHECK(doppler_error(10.0, k, 0.0974, kMassRb87Kg) == doctest::Approx(0.5).epsilon(1e-9));
    // Monotone in exposure time and wavevector too.
    CHECK(doppler_error(10e-6, k, 0.2, kMassRb87Kg) >
          doppler_error(10e-6, k, 0.1, kMassRb87Kg));
    CHECK(doppler_error(10e-6, 2 * k, 0.1, kMassRb87Kg) >
          doppler_error(10e-6, k, 0.1, kMassRb87Kg));
}

TEST_CASE("rotation error at zero temperature equals the frozen-geometry floor") {
    const GateParams p;
    const auto d = derive_frequencies(p);
    ThermalModel cold;
    cold.temperature_k = 0.0;
    const SamplingSpec sampling;

    const double e_ro = rotation_error(p, cold, sampling, Protocol::spin_echo);
    const double floor =
        (1.0 - channel00_fidelity(build_spin_echo_sequence(p, d))) / 4.0;
    CHECK(e_ro == doctest::Approx(floor).epsilon(1e-12));
    CHECK(e_ro <= 3e-6);
}

TEST_CASE("beta average is symmetric under reversing the drift direction") {
    const GateParams p;
    const auto d = derive_frequencies(p);
    for (double v : {0.03, 0.07, 0.2}) {
        const double forward = rotation_error_for_spacing(p, d, 7.98, v, Protocol::spin_echo);
        const double reversed = rotation_error_for_spacing(p, d, 7.98, -v, Protocol::spin_echo);
        CHECK(forward == reversed);  // exact: the beta sum swaps terms
    }
}

TEST_CASE("rotation error is deterministic and thread-count independent") {
    GateParams p;
    SamplingSpec a;
    a.samples = 64;
    a.seed = 99;
    a.threads = 1;
    SamplingSpec b = a;
    b.threads = 4;

    MotionModel motion{0.02, 0.05};
    const double ea = rotation_error(p, motion, a, Protocol::spin_echo);
    const double eb = rotation_error(p, motion, b, Protocol::spin_echo);
    CHECK(ea == eb);  // bit-identical regardless of parallelism

    const double again = rotation_error(p, motion, a, Protocol::spin_echo);
    CHECK(ea == again);
}

TEST_CASE("rotation error grows with spread and with drift speed") {
    const GateParams p;
    SamplingSpec sampling;
    sampling.samples = 200;

    // Fixed drift, increasing position spread.
    double prev = -1.0;
    for (double sigma : {0.0, 0.015, 0.03}) {
        const double e = rotation_error(p, MotionModel{sigma, 0.05}, sampling,
                                        Protocol::spin_echo);
        CHECK(e >= prev);
        prev = e;
    }
    // Fixed spread, increasing drift speed.
    prev = -1.0;
    for (double v : {0.0, 0.035, 0.07}) {
        const double e = rotation_error(p, MotionModel{0.015, v}, sampling,
                                        Protocol::spin_echo);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("quadrature cross-check agrees with Monte Carlo") {
    std::vector<double> nodes, weights;
    gauss_hermite(40, nodes, weights);
    REQUIRE(nodes.size() == 40);
    // Zeroth and second moments of exp(-x^2).
    double m0 = 0.0, m2 = 0.0;
    for (int i = 0; i < 40; ++i) {
        m0 += weights[i];
        m2 += weights[i] * nodes[i] * nodes[i];
    }
    CHECK(m0 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-12));

    const GateParams p;
    SamplingSpec mc;
    mc.samples = 2000;
    SamplingSpec gh;
    gh.method = SamplingMethod::gauss_hermite;
    gh.nodes = 40;
    const MotionModel motion{0.0224, 0.069};  // ~50 uK in the reference trap
    const double e_mc = rotation_error(p, motion, mc, Protocol::spin_echo);
    const double e_gh = rotation_error(p, motion, gh, Protocol::spin_echo);
    CHECK(e_mc == doctest::Approx(e_gh).epsilon(0.05));
}

TEST_CASE("temperature sweep structure") {
    const GateParams p;
    const ThermalModel trap;
    const auto decay = DecayModel::uniform(1200.0);
    SamplingSpec sampling;
    sampling.samples = 200;

    const std::vector<double> grid = {0.0, 50e-6};
    const auto echo = sweep_temperature(p, grid, trap, decay, sampling, Protocol::spin_echo);
    REQUIRE(echo.size() == 2);
    CHECK(echo[0].temperature_k == 0.0);
    CHECK(echo[0].e_do == 0.0);
    CHECK(echo[0].e_de == echo[1].e_de);  // dwell-based, temperature-independent
    CHECK(echo[0].total == echo[0].e_de + echo[0].e_ro);
    CHECK(echo[1].e_ro >= echo[0].e_ro);
    CHECK(echo[1].e_do > 0.0);

    // Reproducibility: bit-identical rows for the same seed.
    const auto rerun = sweep_temperature(p, grid, trap, decay, sampling, Protocol::spin_echo);
    for (std::size_t i = 0; i < echo.size(); ++i) {
        CHECK(echo[i].e_ro == rerun[i].e_ro);
        CHECK(echo[i].total == rerun[i].total);
    }

    // The echo gate beats the traditional gate across the grid.
    const auto trad = sweep_temperature(p, grid, trap, decay, sampling, Protocol::traditional);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(echo[i].total < trad[i].total);
    CHECK(1.0 - channel00_fidelity(build_traditional_sequence(p, derive_frequencies(p))) >=
          1e-3);
}
