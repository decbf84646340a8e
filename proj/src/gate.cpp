#include "echogate/gate.hpp"

#include <cmath>
#include <stdexcept>

#include "echogate/constants.hpp"

namespace echogate {

namespace {

// Reduce an angle to (-pi, pi].
double wrap_angle(double x) {
    double r = std::fmod(x + kPi, kTwoPi);
    if (r <= 0.0) r += kTwoPi;
    return r - kPi;
}

GeometryState frozen_geometry(double spacing_um) {
    GeometryState g;
    g.set_spacing(kControlAtom, kTargetAtom, spacing_um);
    return g;
}

std::vector<InteractionSpec> gate_interactions(const GateParams& p) {
    return {
        {kControlAtom, kTargetAtom, p.c6_rc_r0, "rc", "r0"},
        {kControlAtom, kTargetAtom, p.c6_rc_r1, "rc", "r1"},
    };
}

}  // namespace

void GateParams::validate() const {
    if (!(c6_rc_r0 > 0.0)) throw std::invalid_argument("gate.c6_rc_r0 must be > 0");
    if (!(c6_rc_r1 < 0.0)) throw std::invalid_argument("gate.c6_rc_r1 must be < 0");
    if (!(spacing_um > 0.0)) throw std::invalid_argument("gate.spacing_um must be > 0");
    if (!(eta > 1.0)) throw std::invalid_argument("gate.eta must be > 1");
    if (!(omega_c_mhz > 0.0)) throw std::invalid_argument("gate.omega_c_mhz must be > 0");
    if (!(phi > 0.0)) throw std::invalid_argument("gate.phi must be > 0");
    if (t_gap < 0.0) throw std::invalid_argument("gate.t_gap must be >= 0");
    if (wait_branch < 0) throw std::invalid_argument("gate.wait_branch must be >= 0");
}

BasisPtr gate_basis() {
    return build_product_basis({
        {kControlAtom, {"0", "1", "rc"}},
        {kTargetAtom, {"0", "1", "r0", "r1"}},
    });
}

DerivedFrequencies derive_frequencies(const GateParams& p) {
    p.validate();
    DerivedFrequencies d;
    d.v0 = pair_interaction(p.c6_rc_r0, p.spacing_um);
    d.v1 = -pair_interaction(p.c6_rc_r1, p.spacing_um);  // stored positive
    d.v_plus = d.v0 + d.v1;
    d.kappa_ratio = p.c6_rc_r1 / p.c6_rc_r0;
    d.omega_c = angular_from_mhz(p.omega_c_mhz);
    d.omega_t2 = d.v_plus / p.eta;
    d.omega_t3 = d.v_plus * p.eta;
    // Omega_t4/Omega_t2 = |kappa| = V1/V0 exactly: the echo condition.
    d.omega_t4 = d.v_plus * std::abs(d.kappa_ratio) / p.eta;
    // Smallest positive wait with V1*T = phi (mod 2pi); higher branches add
    // whole Bloch-sphere revolutions of the |rc,r1> phase.
    double phi_red = std::fmod(p.phi, kTwoPi);
    if (phi_red <= 0.0) phi_red += kTwoPi;
    d.t_wait = (phi_red + kTwoPi * p.wait_branch) / d.v1;
    d.t1 = d.t5 = kPi / d.omega_c;
    d.t2 = kPi / d.omega_t2;
    d.t3 = kPi / d.omega_t3;
    d.t4 = kPi / d.omega_t4;
    d.blockade_ratio_t2 = d.omega_t2 / std::min(d.v0, d.v1);
    d.blockade_ratio_t3 = d.v_plus / d.omega_t3;
    return d;
}

AnalyticBlockade analytic_blockade(const DerivedFrequencies& d) {
    if (!(d.omega_t2 > 0.0 && d.omega_t3 > 0.0 && d.v0 > 0.0 && d.v_plus > 0.0))
        throw std::invalid_argument("analytic_blockade: derived frequencies must be positive");
    AnalyticBlockade a;
    a.omega_bar_t2 = std::hypot(d.omega_t2, d.v0);
    a.omega_bar_t3 = std::hypot(d.omega_t3, d.v_plus);
    a.eps_plus = (d.v0 + a.omega_bar_t2) / 2.0;
    a.eps_minus = (d.v0 - a.omega_bar_t2) / 2.0;
    // Eigenvectors of [[0, W/2], [W/2, V0]] on {|rc,0>, |rc,r0>} are
    // proportional to (W/2, eps_pm).
    const double half = d.omega_t2 / 2.0;
    a.v_plus = Eigen::Vector2cd(half, a.eps_plus).normalized();
    a.v_minus = Eigen::Vector2cd(half, a.eps_minus).normalized();
    a.kappa2 = d.omega_t2 / a.omega_bar_t2;
    a.kappa3 = d.omega_t3 / a.omega_bar_t3;
    a.eps1 = a.kappa2 * a.kappa2 * std::pow(std::sin(kPi / (2.0 * a.kappa2)), 2);
    a.eps2 = 1.0 - a.kappa3 * a.kappa3 * std::pow(std::sin(kPi / (2.0 * a.kappa3)), 2);
    // |rc,0> = cos(alpha)|v+> + sin(alpha)|v->, both overlaps positive.
    a.alpha = std::atan2(a.v_minus(0).real(), a.v_plus(0).real());
    return a;
}

double pulse4_phase(double phi, double phi2, double phi3, double v0, double t_gap) {
    return wrap_angle(phi + phi2 + phi3 - v0 * t_gap);
}

Sequence build_spin_echo_sequence(const GateParams& p, const DerivedFrequencies& d) {
    p.validate();
    const GeometryState geometry = frozen_geometry(p.spacing_um);
    const double phi_p4 = pulse4_phase(p.phi, p.phi2, p.phi3, d.v0, p.t_gap);

    Sequence seq;
    seq.interactions = gate_interactions(p);
    auto pulse = [&](std::string label, int actor, std::string lower, std::string upper,
                     Complex rabi, double duration) {
        seq.stages.push_back(
            {std::move(label), PulseSpec{actor, std::move(lower), std::move(upper), rabi, 0.0, duration},
             geometry});
    };
    pulse("pulse1", kControlAtom, "0", "rc", d.omega_c, d.t1);
    pulse("pulse2", kTargetAtom, "0", "r0", d.omega_t2 * std::polar(1.0, p.phi2), d.t2);
    if (p.t_gap > 0.0) seq.stages.push_back({"gap", WaitSpec{p.t_gap}, geometry});
    pulse("pulse3", kTargetAtom, "r0", "r1", d.omega_t3 * std::polar(1.0, p.phi3), d.t3);
    seq.stages.push_back({"wait", WaitSpec{d.t_wait}, geometry});
    pulse("pulse4", kTargetAtom, "0", "r1",
          Complex(0.0, 1.0) * d.omega_t4 * std::polar(1.0, phi_p4), d.t4);
    pulse("pulse5", kControlAtom, "0", "rc", d.omega_c, d.t5);
    return seq;
}

Sequence build_traditional_sequence(const GateParams& p, const DerivedFrequencies& d) {
    p.validate();
    const GeometryState geometry = frozen_geometry(p.spacing_um);
    Sequence seq;
    seq.interactions = gate_interactions(p);
    seq.stages.push_back(
        {"pulse1", PulseSpec{kControlAtom, "0", "rc", d.omega_c, 0.0, d.t1}, geometry});
    seq.stages.push_back({"pulse2pi",
                          PulseSpec{kTargetAtom, "0", "r0", d.omega_t2, 0.0, kTwoPi / d.omega_t2},
                          geometry});
    seq.stages.push_back(
        {"pulse5", PulseSpec{kControlAtom, "0", "rc", d.omega_c, 0.0, d.t5}, geometry});
    return seq;
}

Eigen::Matrix4cd ideal_gate(double phi) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u(0, 0) = -1.0;
    u(1, 1) = -1.0;
    u(2, 2) = std::polar(1.0, -phi);
    u(3, 3) = 1.0;
    return u;
}

Eigen::Matrix4cd GateMatrix::controlled_phase_frame() const {
    Eigen::Matrix4cd frame = Eigen::Matrix4cd::Identity();
    frame(0, 0) = frame(1, 1) = -1.0;  // e^{i pi} on control |0>
    return frame * matrix;
}

GateMatrix simulate_gate(const Sequence& seq, double phi) {
    const BasisPtr basis = gate_basis();
    const std::vector<std::vector<std::string>> inputs = {
        {"0", "0"}, {"0", "1"}, {"1", "0"}, {"1", "1"}};

    GateMatrix out;
    for (int col = 0; col < 4; ++col) {
        const StateVector final_state =
            run_sequence(seq, StateVector::basis_state(basis, inputs[col]));
        for (int row = 0; row < 4; ++row)
            out.matrix(row, col) = final_state.amplitude(inputs[row]);
    }
    const Eigen::Matrix4cd ideal = ideal_gate(phi);
    out.fidelity_00 = std::norm((ideal.adjoint() * out.matrix)(0, 0));
    out.frobenius_distance = (out.matrix - ideal).norm();
    return out;
}

}  // namespace echogate
