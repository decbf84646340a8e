#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "echogate/hilbert.hpp"

namespace echogate {

// Square drive pulse on one atom's transition.  The complex Rabi amplitude
// carries the laser phase, e.g. i*Omega_t4*exp(i*phi) for the final target
// pulse of the echo gate; detuning adds a diagonal term on the upper level.
struct PulseSpec {
    int actor = 0;             // atom id
    std::string lower, upper;  // transition |upper><lower|
    Complex rabi{0.0, 0.0};    // rad/us
    double detuning = 0.0;     // rad/us
    double duration = 0.0;     // us
};

// Free evolution: interactions (and any accumulated phases) only.
struct WaitSpec {
    double duration = 0.0;  // us
};

// vdW pair term V|ab><ab| with V = 2pi*(c6*1e6)/spacing^6; active only when
// atom_a occupies level_a and atom_b occupies level_b.  The sign convention
// lives entirely in c6 (quoted as C6/2pi in THz*um^6).
struct InteractionSpec {
    int atom_a = 0, atom_b = 1;
    double c6 = 0.0;
    std::string level_a, level_b;
};

// Pair spacings (um), possibly different per stage when atoms drift.
class GeometryState {
  public:
    void set_spacing(int atom_a, int atom_b, double spacing_um);
    double spacing(int atom_a, int atom_b) const;

  private:
    std::map<std::pair<int, int>, double> spacing_um_;
};

struct Stage {
    std::string label;
    std::variant<PulseSpec, WaitSpec> action;
    GeometryState geometry;

    double duration() const;
};

struct Sequence {
    std::vector<Stage> stages;
    std::vector<InteractionSpec> interactions;

    double total_duration() const;
};

// V = C6/L^6 as angular frequency (rad/us); sign follows c6.
double pair_interaction(double c6, double spacing_um);

// Interaction part of a stage Hamiltonian at the given geometry.
HermitianOperator interaction_hamiltonian(const BasisPtr& basis,
                                          const std::vector<InteractionSpec>& interactions,
                                          const GeometryState& geometry);

// Full stage Hamiltonian: drive (+ detuning) for pulses, interactions always.
HermitianOperator stage_hamiltonian(const Stage& stage, const BasisPtr& basis,
                                    const std::vector<InteractionSpec>& interactions);

// Time-resolved record of a sequence run.  Substep states come from the same
// per-stage eigendecomposition as the final state, sampled at absolute
// in-stage times, so the trace is presentation-only: the end state of every
// stage is the single full-duration propagator applied once.
struct Trajectory {
    BasisPtr basis;
    std::vector<std::string> stage_labels;
    std::vector<double> times;    // us, first point is t = 0
    std::vector<int> stage_of;    // stage index per point, -1 for the initial point
    std::vector<Eigen::VectorXcd> states;

    StateVector state_at(std::size_t point) const;
    StateVector final_state() const;
    std::vector<double> population_series(const std::vector<std::string>& configuration) const;
    // arg of the amplitude on one configuration at each point (rad).
    std::vector<double> argument_series(const std::vector<std::string>& configuration) const;
    std::vector<double> level_population_series(int atom, const std::string& level) const;
};

StateVector run_sequence(const Sequence& seq, const StateVector& initial);
Trajectory run_sequence_traced(const Sequence& seq, const StateVector& initial,
                               int substeps_per_stage = 200);

// Copy of a sequence with one pair's spacing replaced stage by stage (drift
// bookkeeping for the thermal error model).
Sequence with_stage_spacings(Sequence seq, int atom_a, int atom_b,
                             const std::vector<double>& spacing_per_stage);

}  // namespace echogate
