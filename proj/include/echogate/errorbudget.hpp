#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "echogate/gate.hpp"

namespace echogate {

enum class Protocol { spin_echo, traditional };

// Radiative lifetimes per Rydberg label (us).  Decay is budgeted as
// dwell-time / lifetime, not as a stochastic process.
struct DecayModel {
    std::map<std::string, double> lifetimes_us;

    static DecayModel uniform(double tau_us,
                              const std::vector<std::string>& labels = {"rc", "r0", "r1"});
};

// Thermal motion of trapped atoms in a harmonic (Gaussian-beam) dipole trap.
// The trap depth is quoted as a temperature; position spread along the
// interatomic axis is sigma_axis = (w/2) sqrt(Ta/U) per atom, so the spacing
// spreads by sqrt(2) of that.  Free flight during the gate (traps off) adds
// a drift at the r.m.s. axial speed v_z = sqrt(kB Ta / m).
struct ThermalModel {
    double temperature_k = 0.0;    // Ta
    double trap_depth_k = 20.0e-3; // U (20 mK reference trap)
    double waist_um = 1.0;         // w
    double mass_kg = kMassRb87Kg;

    double axial_sigma() const;    // um, per atom
    double spacing_sigma() const;  // um, two independent atoms
    double axial_speed() const;    // um/us
    // Harmonic approximation is trusted for Ta <= U/10.
    bool harmonic_valid() const { return temperature_k <= trap_depth_k / 10.0; }

    void validate() const;
};

// Spacing fluctuation and drift decoupled from any temperature model, so
// each knob can be exercised independently.
struct MotionModel {
    double spacing_sigma_um = 0.0;  // r.m.s. initial spacing deviation
    double axial_speed = 0.0;       // um/us, drift speed during the sequence
};

// Worst-case relative motion along the interatomic axis: beta = +1 atoms
// approach, beta = -1 they separate.  Spacings are evaluated once per stage
// group: L' up to pulse 3, L' + 2 beta v_z t_T during the wait, and
// L' + 2 beta v_z t_p4 from pulse 4 on.
struct DriftScenario {
    int beta = 1;
    double t_mid_wait = 0.0;   // us, drift time entering the wait spacing
    double t_pulse4 = 0.0;     // us, drift time entering the pulse-4 spacing
    double spacing_early = 0.0, spacing_wait = 0.0, spacing_late = 0.0;  // um

    static DriftScenario make(const DerivedFrequencies& d, double spacing_start_um,
                              double axial_speed, int beta);
};

// Per-stage spacing list implementing a drift scenario for a sequence built
// by build_spin_echo_sequence (keys on its "wait" stage; sequences without
// one, like the traditional gate, keep spacing_early throughout).
std::vector<double> drift_spacings(const Sequence& seq, const DriftScenario& scenario);

enum class SamplingMethod { monte_carlo, gauss_hermite };

struct SamplingSpec {
    int samples = 2000;           // Monte Carlo sample count
    std::uint64_t seed = 12345;
    SamplingMethod method = SamplingMethod::monte_carlo;
    int nodes = 40;               // Gauss-Hermite order
    int threads = 0;              // 0: all cores (capped by ECHOGATE_THREADS)
};

struct ErrorReport {
    double temperature_k = 0.0;
    double e_de = 0.0;   // decay
    double e_ro = 0.0;   // rotation (thermal position + drift)
    double e_do = 0.0;   // Doppler dephasing, reported separately
    double total = 0.0;  // e_de + e_ro
    std::map<std::string, double> dwell_us;  // time-integrated Rydberg populations
};

// Time integral of one atom's level population over [t_lo, t_hi]
// (trapezoidal on the trace grid, clipped to the window).
double integrated_population(const Trajectory& traj, int atom, const std::string& level,
                             double t_lo, double t_hi);

// Mean over the given trajectories of the full-sequence dwell time in each
// Rydberg label (summed over atoms carrying that label).
std::map<std::string, double> rydberg_dwell(
    const std::vector<Trajectory>& trajectories,
    const std::vector<std::string>& rydberg_labels = {"rc", "r0", "r1"});

// Dwell map for the four computational inputs of a gate sequence.
std::map<std::string, double> gate_dwell(const Sequence& seq, int substeps_per_stage = 200);

// E_de = sum_alpha T_alpha / tau_alpha.
double decay_error(const std::map<std::string, double>& dwell_us, const DecayModel& decay);

// |<00| U |00>|^2 for one concrete geometry-resolved sequence.
double channel00_fidelity(const Sequence& seq);

// Rotation error for one sampled starting spacing: sum over beta = +/-1 of
// (1 - F00)/8 with the drifted stage spacings.
double rotation_error_for_spacing(const GateParams& params, const DerivedFrequencies& d,
                                  double spacing_start_um, double axial_speed,
                                  Protocol protocol);

// E_ro averaged over the thermal spacing distribution (truncated at 4 sigma).
double rotation_error(const GateParams& params, const MotionModel& motion,
                      const SamplingSpec& sampling, Protocol protocol);
double rotation_error(const GateParams& params, const ThermalModel& thermal,
                      const SamplingSpec& sampling, Protocol protocol);

// Doppler dephasing between excitation and de-excitation separated by t:
// E_Do = [1 - exp(-(k v_z t)^2 / 2)] / 2 with v_z^2 = kB Ta / m.
double doppler_error(double temperature_k, double k_eff_rad_um, double t_us, double mass_kg);

// One ErrorReport per temperature; E_de from the frozen-geometry dwell,
// E_Do evaluated over the protocol's Rydberg window (never added to total).
std::vector<ErrorReport> sweep_temperature(const GateParams& params,
                                           const std::vector<double>& temperatures_k,
                                           const ThermalModel& trap, const DecayModel& decay,
                                           const SamplingSpec& sampling, Protocol protocol,
                                           double k_eff_rad_um = 0.0);

// Effective thread count: spec.threads (or hardware) capped by ECHOGATE_THREADS.
int effective_threads(const SamplingSpec& sampling);

// Gauss-Hermite nodes/weights for weight exp(-x^2) (Golub-Welsch); exposed
// for the quadrature cross-check tests.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace echogate
