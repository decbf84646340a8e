#include "echogate/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "echogate/constants.hpp"

namespace echogate {

void LatticeConfig::validate(int max_atoms) const {
    if (num_atoms < 1) throw std::invalid_argument("lattice.num_atoms must be >= 1");
    if (num_atoms > max_atoms)
        throw std::invalid_argument("lattice.num_atoms exceeds the dense-simulation cap");
    if (!(lattice_constant_um > 0.0))
        throw std::invalid_argument("lattice.lattice_constant_um must be > 0");
}

double LatticeConfig::separation_um(int site_a, int site_b) const {
    return std::abs(site_a - site_b) * lattice_constant_um;
}

void DressingParams::validate() const {
    if (c6_00 == 0.0) throw std::invalid_argument("dressing.c6_00 must be nonzero");
    if (!(kappa() < 0.0))
        throw std::invalid_argument(
            "dressing.c6_11/c6_00 must be negative (the swapped interaction has to flip sign)");
}

double EchoSchedule::backward_duration_us(double kappa) const {
    return t0_us / std::abs(kappa);
}

void EchoSchedule::validate() const {
    if (!(t0_us > 0.0)) throw std::invalid_argument("schedule.t0_us must be > 0");
    if (swap == SwapMode::finite && !(swap_rabi_mhz > 0.0))
        throw std::invalid_argument("schedule.swap_rabi_mhz must be > 0 in finite mode");
}

BasisPtr manybody_basis(int num_atoms) {
    std::vector<LevelScheme> schemes;
    schemes.reserve(static_cast<std::size_t>(num_atoms));
    for (int k = 0; k < num_atoms; ++k)
        schemes.push_back({k, {"0", "1", "r0", "r1"}});
    return build_product_basis(std::move(schemes));
}

std::vector<InteractionSpec> lattice_interactions(const LatticeConfig& lattice, double c6,
                                                  const std::string& level) {
    std::vector<InteractionSpec> terms;
    for (int j = 0; j < lattice.num_atoms - 1; ++j)
        for (int k = j + 1; k < lattice.num_atoms; ++k)
            terms.push_back({j, k, c6, level, level});
    return terms;
}

GeometryState lattice_geometry(const LatticeConfig& lattice) {
    GeometryState geometry;
    for (int j = 0; j < lattice.num_atoms - 1; ++j)
        for (int k = j + 1; k < lattice.num_atoms; ++k)
            geometry.set_spacing(j, k, lattice.separation_um(j, k));
    return geometry;
}

HermitianOperator dressing_hamiltonian(const BasisPtr& basis, const LatticeConfig& lattice,
                                       const DressingParams& dressing,
                                       const std::string& rydberg_label) {
    dressing.validate();
    if (rydberg_label != "r0" && rydberg_label != "r1")
        throw std::invalid_argument("dressing_hamiltonian: rydberg label must be r0 or r1");
    const double scale = rydberg_label == "r0" ? 1.0 : dressing.kappa();
    const double c6 = rydberg_label == "r0" ? dressing.c6_00 : dressing.c6_11;
    const double omega = angular_from_mhz(dressing.omega_mhz) * scale;
    const double delta = angular_from_mhz(dressing.delta_mhz) * scale;

    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
    for (int atom = 0; atom < basis->num_atoms(); ++atom) {
        const auto n_levels =
            static_cast<Eigen::Index>(basis->scheme(atom).levels.size());
        const int i_one = basis->level_index(atom, "1");
        const int i_ryd = basis->level_index(atom, rydberg_label);
        Eigen::MatrixXcd drive = Eigen::MatrixXcd::Zero(n_levels, n_levels);
        drive(i_ryd, i_one) = omega / 2.0;
        total += embed_operator(basis, {atom}, drive, /*add_adjoint=*/true).matrix();
        Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(n_levels, n_levels);
        shift(i_ryd, i_ryd) = delta;
        total += embed_operator(basis, {atom}, shift).matrix();
    }
    total += interaction_hamiltonian(basis, lattice_interactions(lattice, c6, rydberg_label),
                                     lattice_geometry(lattice))
                 .matrix();
    return HermitianOperator(basis, std::move(total));
}

namespace {

Eigen::Index swap_index(const BasisPtr& basis, Eigen::Index index) {
    const auto digits = basis->unpack(index);
    Eigen::Index out = 0;
    for (int atom = 0; atom < basis->num_atoms(); ++atom) {
        int digit = digits[static_cast<std::size_t>(atom)];
        const int i_r0 = basis->level_index(atom, "r0");
        const int i_r1 = basis->level_index(atom, "r1");
        if (digit == i_r0)
            digit = i_r1;
        else if (digit == i_r1)
            digit = i_r0;
        out += digit * basis->stride(atom);
    }
    return out;
}

}  // namespace

Eigen::MatrixXcd swap_rydberg_matrix(const BasisPtr& basis) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
    for (Eigen::Index i = 0; i < basis->dim(); ++i) s(swap_index(basis, i), i) = 1.0;
    return s;
}

StateVector swap_rydberg_labels(const StateVector& state) {
    const auto& basis = state.basis();
    Eigen::VectorXcd out(basis->dim());
    for (Eigen::Index i = 0; i < basis->dim(); ++i)
        out(swap_index(basis, i)) = state.amplitudes()(i);
    return StateVector(basis, std::move(out));
}

StateVector microwave_swap(const StateVector& state, const LatticeConfig& lattice,
                           const DressingParams& dressing, SwapMode mode,
                           double swap_rabi_mhz) {
    if (mode == SwapMode::ideal) return swap_rydberg_labels(state);
    if (!(swap_rabi_mhz > 0.0))
        throw std::invalid_argument("microwave_swap: swap_rabi_mhz must be > 0 in finite mode");
    const auto& basis = state.basis();
    const double omega_mu = angular_from_mhz(swap_rabi_mhz);

    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
    for (int atom = 0; atom < basis->num_atoms(); ++atom) {
        const auto n_levels =
            static_cast<Eigen::Index>(basis->scheme(atom).levels.size());
        Eigen::MatrixXcd drive = Eigen::MatrixXcd::Zero(n_levels, n_levels);
        drive(basis->level_index(atom, "r1"), basis->level_index(atom, "r0")) =
            Complex(0.0, omega_mu / 2.0);
        total += embed_operator(basis, {atom}, drive, /*add_adjoint=*/true).matrix();
    }
    // The vdW terms stay on during the pulse; a large swap_blockade_ratio is
    // what keeps their effect at the 1e-3 level over pi/Omega_mu.
    auto terms = lattice_interactions(lattice, dressing.c6_00, "r0");
    const auto r1_terms = lattice_interactions(lattice, dressing.c6_11, "r1");
    terms.insert(terms.end(), r1_terms.begin(), r1_terms.end());
    total += interaction_hamiltonian(basis, terms, lattice_geometry(lattice)).matrix();

    return evolve(state, HermitianOperator(basis, std::move(total)), kPi / omega_mu);
}

double swap_blockade_ratio(const LatticeConfig& lattice, const DressingParams& dressing,
                           double swap_rabi_mhz) {
    double strongest = 0.0;
    for (int j = 0; j < lattice.num_atoms - 1; ++j)
        for (int k = j + 1; k < lattice.num_atoms; ++k) {
            const double sep = lattice.separation_um(j, k);
            strongest = std::max({strongest, std::abs(pair_interaction(dressing.c6_00, sep)),
                                  std::abs(pair_interaction(dressing.c6_11, sep))});
        }
    if (strongest == 0.0) return std::numeric_limits<double>::infinity();
    return angular_from_mhz(swap_rabi_mhz) / strongest;
}

namespace {

double mean_projection(const StateVector& state, const std::string& level_a,
                       const std::string& level_b) {
    const auto& basis = state.basis();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double sum = 0.0;
    for (int atom = 0; atom < basis->num_atoms(); ++atom) {
        if (level_b.empty()) {
            sum += level_population(state, atom, level_a);
            continue;
        }
        Eigen::VectorXcd local = Eigen::VectorXcd::Zero(
            static_cast<Eigen::Index>(basis->scheme(atom).levels.size()));
        local(basis->level_index(atom, level_a)) = inv_sqrt2;
        local(basis->level_index(atom, level_b)) = inv_sqrt2;
        sum += projection_probability(state, atom, local);
    }
    // A mean of probabilities; rounding can push it a few ulp past 1.
    return std::clamp(sum / basis->num_atoms(), 0.0, 1.0);
}

}  // namespace

double magnetization(const StateVector& state) { return mean_projection(state, "0", "1"); }

double population_one(const StateVector& state) { return mean_projection(state, "1", ""); }

double echo_residual(const StateVector& initial, const StateVector& final_state) {
    return 1.0 - overlap_fidelity(initial, final_state);
}

EchoRun run_echo(const LatticeConfig& lattice, const DressingParams& dressing,
                 const StateVector& initial, const EchoSchedule& schedule,
                 int points_per_phase) {
    lattice.validate();
    dressing.validate();
    schedule.validate();
    if (points_per_phase < 1)
        throw std::invalid_argument("run_echo: points_per_phase must be >= 1");
    const auto& basis = initial.basis();
    if (basis->num_atoms() != lattice.num_atoms)
        throw std::invalid_argument("run_echo: state and lattice atom counts differ");

    const double t_back = schedule.backward_duration_us(dressing.kappa());
    const auto eig_fwd = diagonalize(dressing_hamiltonian(basis, lattice, dressing, "r0"));
    const auto eig_back = diagonalize(dressing_hamiltonian(basis, lattice, dressing, "r1"));

    EchoRun run{ObservableSeries{}, initial, initial,
                schedule.swap == SwapMode::finite
                    ? swap_blockade_ratio(lattice, dressing, schedule.swap_rabi_mhz)
                    : std::numeric_limits<double>::infinity()};
    auto record = [&run](double t, const StateVector& psi) {
        run.series.times_us.push_back(t);
        run.series.magnetization.push_back(magnetization(psi));
        run.series.population_one.push_back(population_one(psi));
    };

    record(0.0, initial);
    for (int j = 1; j <= points_per_phase; ++j) {
        const double t = schedule.t0_us * j / points_per_phase;
        record(t, StateVector(basis, apply_propagator(eig_fwd, initial.amplitudes(), t)));
    }

    // The swap happens at t0; its duration (pi/Omega_mu in finite mode) is
    // left off the time axis.
    const StateVector at_t0(basis,
                            apply_propagator(eig_fwd, initial.amplitudes(), schedule.t0_us));
    const StateVector launched =
        microwave_swap(at_t0, lattice, dressing, schedule.swap, schedule.swap_rabi_mhz);

    for (int j = 1; j <= points_per_phase; ++j) {
        const double s = t_back * j / points_per_phase;
        StateVector psi(basis, apply_propagator(eig_back, launched.amplitudes(), s));
        if (j == points_per_phase) run.final_state = psi;
        record(schedule.t0_us + s, std::move(psi));
    }
    return run;
}

}  // namespace echogate
