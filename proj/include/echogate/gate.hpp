#pragma once

#include "echogate/constants.hpp"
#include "echogate/pulses.hpp"

namespace echogate {

// Control/target atom ids used by every gate sequence.
inline constexpr int kControlAtom = 0;
inline constexpr int kTargetAtom = 1;

// Physical inputs for the two-atom controlled-phase gate.  C6 values are
// quoted as C6/2pi in THz*um^6; with c6_rc_r0 > 0 and c6_rc_r1 < 0 the pair
// energies V0 = C6(rc,r0)/L^6 and V1 = -C6(rc,r1)/L^6 are both positive and
// of opposite sign in the Hamiltonian, which is what makes the echo work.
struct GateParams {
    double c6_rc_r0 = 56.2;
    double c6_rc_r1 = -25.6;
    double spacing_um = 8.0;   // interatomic distance L
    double eta = 18.0;         // pulse-hierarchy parameter (Omega_t3/Omega_t2 = eta^2)
    double omega_c_mhz = 10.0; // control Rabi Omega_c/2pi
    double phi = kPi;          // conditional phase (rad); pi gives a CZ gate
    double t_gap = 0.0;        // us, optional idle inserted between pulses 2 and 3
    double phi2 = 0.0;         // laser phase of pulse 2 (rad)
    double phi3 = 0.0;         // laser phase of pulse 3 (rad)
    int wait_branch = 0;       // selects T = (phi + 2*pi*branch)/V1

    void validate() const;  // throws std::invalid_argument naming the field
};

// Closed-form frequencies and durations of the five-pulse echo sequence:
// (Omega_t2, Omega_t3, Omega_t4) = V_plus * (1/eta, eta, |kappa|/eta), each
// pulse a pi pulse, and a wait T = phi/V1 between pulses 3 and 4.
struct DerivedFrequencies {
    double v0 = 0.0, v1 = 0.0, v_plus = 0.0;  // rad/us, all positive
    double omega_c = 0.0;                     // rad/us
    double omega_t2 = 0.0, omega_t3 = 0.0, omega_t4 = 0.0;  // rad/us
    double kappa_ratio = 0.0;                 // c6_rc_r1 / c6_rc_r0, negative
    double t_wait = 0.0;                      // us
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0;  // us
    // Blockade-condition diagnostics; both must be << 1 for the analytics
    // to apply (drive weak against the blockade, swap fast against V_plus).
    double blockade_ratio_t2 = 0.0;  // Omega_t2 / min(V0, V1)
    double blockade_ratio_t3 = 0.0;  // V_plus / Omega_t3

    // Total time the target spends Rydberg-coupled: t2 + t3 + T + t4.
    double rydberg_window() const { return t2 + t3 + t_wait + t4; }
};

// Eigen-system of the blockaded two-state blocks and the closed-form
// leakage probabilities of pulses 2 and 3.
struct AnalyticBlockade {
    double omega_bar_t2 = 0.0;  // sqrt(Omega_t2^2 + V0^2), rad/us
    double omega_bar_t3 = 0.0;  // sqrt(Omega_t3^2 + V_plus^2), rad/us
    double eps_plus = 0.0, eps_minus = 0.0;  // (V0 +/- omega_bar_t2)/2, rad/us
    Eigen::Vector2cd v_plus, v_minus;        // eigenvectors on {|rc,0>, |rc,r0>}
    double kappa2 = 0.0;  // Omega_t2 / omega_bar_t2
    double kappa3 = 0.0;  // Omega_t3 / omega_bar_t3
    double eps1 = 0.0;    // kappa2^2 sin^2(pi/2kappa2): pulse-2 population deficit
    double eps2 = 0.0;    // 1 - kappa3^2 sin^2(pi/2kappa3): pulse-3 failure probability
    double alpha = 0.0;   // mixing angle of |rc,0> in the (|v+>,|v->) pair
};

// Simulated gate restricted to the computational basis {|00>,|01>,|10>,|11>}.
struct GateMatrix {
    Eigen::Matrix4cd matrix;            // raw columns: final states per input
    double fidelity_00 = 0.0;           // |<00|U_ideal^dag U|00>|^2
    double frobenius_distance = 0.0;    // ||U - U_ideal||_F, raw frame

    // Same gate after composing a pi phase shift on the control |0> state;
    // at phi = pi this is the standard CZ form diag{1,1,-1,1}.
    Eigen::Matrix4cd controlled_phase_frame() const;
};

// Basis for gate simulations: control {0,1,rc} x target {0,1,r0,r1}, dim 12.
BasisPtr gate_basis();

DerivedFrequencies derive_frequencies(const GateParams& p);
AnalyticBlockade analytic_blockade(const DerivedFrequencies& d);

// Laser phase of pulse 4 that closes the echo: phi' = phi + phi2 + phi3
// - V0 * t_gap, reduced to (-pi, pi].
double pulse4_phase(double phi, double phi2, double phi3, double v0, double t_gap);

// Five pi pulses with the wait between pulses 3 and 4 (and the optional
// t_gap idle between pulses 2 and 3); frozen geometry at p.spacing_um.
Sequence build_spin_echo_sequence(const GateParams& p, const DerivedFrequencies& d);

// Reference protocol: pulses 1 and 5 unchanged, the middle replaced by a
// single 2pi pulse on |0>_t <-> |r0>_t at Omega_t2.
Sequence build_traditional_sequence(const GateParams& p, const DerivedFrequencies& d);

// diag{-1, -1, e^{-i phi}, 1}.
Eigen::Matrix4cd ideal_gate(double phi);

// Run all four computational inputs through the sequence and compare with
// ideal_gate(phi).  Geometry (including drifted spacings) comes from the
// sequence's per-stage snapshots.
GateMatrix simulate_gate(const Sequence& seq, double phi);

}  // namespace echogate
