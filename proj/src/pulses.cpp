#include "echogate/pulses.hpp"

#include <cmath>
#include <stdexcept>

#include "echogate/constants.hpp"

namespace echogate {

namespace {

std::pair<int, int> ordered_pair(int a, int b) {
    if (a == b) throw std::invalid_argument("GeometryState: pair needs two distinct atoms");
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

void validate_pulse(const PulseSpec& pulse) {
    if (!(pulse.duration > 0.0)) throw std::invalid_argument("PulseSpec: duration must be > 0");
    if (!(std::abs(pulse.rabi) > 0.0)) throw std::invalid_argument("PulseSpec: |rabi| must be > 0");
    if (pulse.lower == pulse.upper)
        throw std::invalid_argument("PulseSpec: transition needs two distinct levels");
}

}  // namespace

void GeometryState::set_spacing(int atom_a, int atom_b, double spacing_um) {
    if (!(spacing_um > 0.0)) throw std::invalid_argument("GeometryState: spacing must be > 0");
    spacing_um_[ordered_pair(atom_a, atom_b)] = spacing_um;
}

double GeometryState::spacing(int atom_a, int atom_b) const {
    const auto it = spacing_um_.find(ordered_pair(atom_a, atom_b));
    if (it == spacing_um_.end())
        throw std::invalid_argument("GeometryState: no spacing for atom pair (" +
                                    std::to_string(atom_a) + "," + std::to_string(atom_b) + ")");
    return it->second;
}

double Stage::duration() const {
    if (const auto* pulse = std::get_if<PulseSpec>(&action)) return pulse->duration;
    return std::get<WaitSpec>(action).duration;
}

double Sequence::total_duration() const {
    double total = 0.0;
    for (const auto& stage : stages) total += stage.duration();
    return total;
}

double pair_interaction(double c6, double spacing_um) {
    if (!(spacing_um > 0.0)) throw std::invalid_argument("pair_interaction: spacing must be > 0");
    // c6 is C6/2pi in THz*um^6; 1 THz = 1e6 MHz, and 1 MHz ordinary = 2pi rad/us.
    const double v_mhz = c6 * 1.0e6 / std::pow(spacing_um, 6);
    return angular_from_mhz(v_mhz);
}

HermitianOperator interaction_hamiltonian(const BasisPtr& basis,
                                          const std::vector<InteractionSpec>& interactions,
                                          const GeometryState& geometry) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
    for (const auto& spec : interactions) {
        if (spec.c6 == 0.0 || !std::isfinite(spec.c6))
            throw std::invalid_argument("InteractionSpec: c6 must be finite and nonzero");
        const double v = pair_interaction(spec.c6, geometry.spacing(spec.atom_a, spec.atom_b));
        const int pos_a = basis->atom_position(spec.atom_a);
        const int pos_b = basis->atom_position(spec.atom_b);
        const int la = basis->level_index(pos_a, spec.level_a);
        const int lb = basis->level_index(pos_b, spec.level_b);
        // |level_a level_b><level_a level_b| summed over all other atoms'
        // configurations: every global index with those two digits fixed.
        for (Eigen::Index i = 0; i < basis->dim(); ++i) {
            const auto digits = basis->unpack(i);
            if (digits[pos_a] == la && digits[pos_b] == lb) h(i, i) += v;
        }
    }
    return HermitianOperator(basis, std::move(h));
}

HermitianOperator stage_hamiltonian(const Stage& stage, const BasisPtr& basis,
                                    const std::vector<InteractionSpec>& interactions) {
    HermitianOperator h = interaction_hamiltonian(basis, interactions, stage.geometry);
    if (const auto* pulse = std::get_if<PulseSpec>(&stage.action)) {
        validate_pulse(*pulse);
        const int pos = basis->atom_position(pulse->actor);
        const auto n = static_cast<Eigen::Index>(basis->scheme(pos).levels.size());
        const int lower = basis->level_index(pos, pulse->lower);
        const int upper = basis->level_index(pos, pulse->upper);
        Eigen::MatrixXcd local = Eigen::MatrixXcd::Zero(n, n);
        local(upper, lower) = pulse->rabi / 2.0;
        h = h + embed_operator(basis, {pos}, local, /*add_adjoint=*/true);
        if (pulse->detuning != 0.0) {
            Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(n, n);
            shift(upper, upper) = pulse->detuning;
            h = h + embed_operator(basis, {pos}, shift);
        }
    }
    return h;
}

StateVector Trajectory::state_at(std::size_t point) const {
    return StateVector(basis, states.at(point));
}

StateVector Trajectory::final_state() const {
    if (states.empty()) throw std::logic_error("Trajectory: empty");
    return StateVector(basis, states.back());
}

std::vector<double> Trajectory::population_series(
    const std::vector<std::string>& configuration) const {
    const Eigen::Index index = basis->state_index(configuration);
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = std::norm(states[i](index));
    return out;
}

std::vector<double> Trajectory::argument_series(
    const std::vector<std::string>& configuration) const {
    const Eigen::Index index = basis->state_index(configuration);
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = std::arg(states[i](index));
    return out;
}

std::vector<double> Trajectory::level_population_series(int atom, const std::string& level) const {
    std::vector<double> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        out[i] = level_population(StateVector(basis, states[i]), atom, level);
    return out;
}

StateVector run_sequence(const Sequence& seq, const StateVector& initial) {
    StateVector state = initial;
    for (const auto& stage : seq.stages) {
        const HermitianOperator h = stage_hamiltonian(stage, state.basis(), seq.interactions);
        state = evolve(state, h, stage.duration());
    }
    return state;
}

Trajectory run_sequence_traced(const Sequence& seq, const StateVector& initial,
                               int substeps_per_stage) {
    if (substeps_per_stage < 1)
        throw std::invalid_argument("run_sequence_traced: need at least 1 substep per stage");
    Trajectory traj;
    traj.basis = initial.basis();
    traj.times.push_back(0.0);
    traj.stage_of.push_back(-1);
    traj.states.push_back(initial.amplitudes());

    double t_start = 0.0;
    Eigen::VectorXcd psi = initial.amplitudes();
    for (std::size_t s = 0; s < seq.stages.size(); ++s) {
        const auto& stage = seq.stages[s];
        traj.stage_labels.push_back(stage.label);
        const HermitianOperator h = stage_hamiltonian(stage, traj.basis, seq.interactions);
        const EigenSystem es = diagonalize(h);
        const double dt = stage.duration() / substeps_per_stage;
        for (int j = 1; j <= substeps_per_stage; ++j) {
            // Sampled at the absolute in-stage time: substep j == full
            // propagator over j*dt, so j == substeps is the exact end state.
            const double tau = (j == substeps_per_stage) ? stage.duration() : j * dt;
            traj.times.push_back(t_start + tau);
            traj.stage_of.push_back(static_cast<int>(s));
            traj.states.push_back(apply_propagator(es, psi, tau));
        }
        psi = traj.states.back();
        if (std::abs(psi.norm() - 1.0) > 1e-10)
            throw std::runtime_error("run_sequence_traced: norm drift exceeds 1e-10 in stage '" +
                                     stage.label + "'");
        t_start += stage.duration();
    }
    return traj;
}

Sequence with_stage_spacings(Sequence seq, int atom_a, int atom_b,
                             const std::vector<double>& spacing_per_stage) {
    if (spacing_per_stage.size() != seq.stages.size())
        throw std::invalid_argument("with_stage_spacings: need one spacing per stage");
    for (std::size_t s = 0; s < seq.stages.size(); ++s)
        seq.stages[s].geometry.set_spacing(atom_a, atom_b, spacing_per_stage[s]);
    return seq;
}

}  // namespace echogate
