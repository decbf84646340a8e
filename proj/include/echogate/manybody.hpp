#pragma once

#include <string>
#include <vector>

#include "echogate/hilbert.hpp"
#include "echogate/pulses.hpp"

namespace echogate {

// Chain of atoms on a one-dimensional lattice, open boundaries, all pairs
// interacting (no nearest-neighbor truncation).
struct LatticeConfig {
    int num_atoms = 4;
    double lattice_constant_um = 10.0;

    // The default cap keeps the dense 4^N simulation cheap.
    void validate(int max_atoms = 4) const;
    double separation_um(int site_a, int site_b) const;
};

// Off-resonant dressing of |1> with a Rydberg state, plus pairwise vdW
// interactions between dressed atoms.  kappa = c6_11/c6_00 must be negative:
// switching the dressed state from r0 to r1 then flips the sign of every
// matrix element (drive, detuning, interaction alike), which is what turns
// the second half of the schedule into time-reversed evolution.
struct DressingParams {
    double omega_mhz = 5.0;   // drive Omega/2pi on |1> <-> |r>
    double delta_mhz = 50.0;  // detuning/2pi on the dressed Rydberg level
    double c6_00 = 56.2;      // C6(r0,r0)/2pi, THz um^6
    double c6_11 = -52.6;     // C6(r1,r1)/2pi, THz um^6

    double kappa() const { return c6_11 / c6_00; }
    void validate() const;
};

enum class SwapMode { ideal, finite };

// Dress r0 for t0, swap r0 -> r1, dress r1 (with parameters scaled by kappa)
// for t0/|kappa|.  The backward leg is stretched by exactly the factor the
// generator shrank by, so the echo closes at t0 + t0/|kappa|.
struct EchoSchedule {
    double t0_us = 0.4;
    SwapMode swap = SwapMode::ideal;
    double swap_rabi_mhz = 500.0;  // Omega_mu/2pi, finite mode only

    double backward_duration_us(double kappa) const;
    void validate() const;
};

// Per-point record of the echo run; the swap happens at t0 and its duration
// is not shown on the time axis (the finite pulse lasts pi/Omega_mu ~ 1 ns).
struct ObservableSeries {
    std::vector<double> times_us;
    std::vector<double> magnetization;    // mean prob. of |up> = (|0>+|1>)/sqrt2
    std::vector<double> population_one;   // mean prob. of |1>
};

struct EchoRun {
    ObservableSeries series;
    StateVector initial;
    StateVector final_state;
    // Omega_mu over the largest pair interaction: the swap treats the vdW
    // terms as frozen, which is only as good as this ratio is large.
    double swap_blockade_ratio = 0.0;
};

// Per-atom levels {0, 1, r0, r1}; dim 4^N.
BasisPtr manybody_basis(int num_atoms);

// All-pairs vdW terms for one Rydberg level and the matching pair spacings.
std::vector<InteractionSpec> lattice_interactions(const LatticeConfig& lattice, double c6,
                                                  const std::string& level);
GeometryState lattice_geometry(const LatticeConfig& lattice);

// Sum over atoms of drive + detuning on the chosen Rydberg label ("r0" or
// "r1"), plus the all-pairs interaction for that label.  The r1 variant uses
// (omega, delta) * kappa and c6_11, so it equals -|kappa| times the relabeled
// r0 Hamiltonian.
HermitianOperator dressing_hamiltonian(const BasisPtr& basis, const LatticeConfig& lattice,
                                       const DressingParams& dressing,
                                       const std::string& rydberg_label);

// Unitary that relabels r0 <-> r1 on every atom: the ideal swap, and the
// conjugation relating the forward and backward generators.
Eigen::MatrixXcd swap_rydberg_matrix(const BasisPtr& basis);
StateVector swap_rydberg_labels(const StateVector& state);

// Ideal mode relabels amplitudes with unit phase; finite mode evolves under
// the simultaneous pi pulse sum_k (i Omega_mu |r1><r0|_k + h.c.)/2 with the
// vdW terms kept on, for pi/Omega_mu.
StateVector microwave_swap(const StateVector& state, const LatticeConfig& lattice,
                           const DressingParams& dressing, SwapMode mode,
                           double swap_rabi_mhz);

double swap_blockade_ratio(const LatticeConfig& lattice, const DressingParams& dressing,
                           double swap_rabi_mhz);

// Mean over atoms of the probability of finding the atom in (|0>+|1>)/sqrt2,
// respectively in |1>, with the other atoms summed over.
double magnetization(const StateVector& state);
double population_one(const StateVector& state);

// 1 - |<initial|final>|^2.
double echo_residual(const StateVector& initial, const StateVector& final_state);

// Forward dressing for t0, swap, backward dressing for t0/|kappa|, with both
// observables sampled points_per_phase times per leg (plus the t = 0 point).
EchoRun run_echo(const LatticeConfig& lattice, const DressingParams& dressing,
                 const StateVector& initial, const EchoSchedule& schedule,
                 int points_per_phase = 200);

}  // namespace echogate
