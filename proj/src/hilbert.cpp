#include "echogate/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace echogate {

namespace {

// Construction tolerances.  Unitary stages preserve the norm to ~1e-14, so
// 1e-8 at construction catches genuine mistakes without tripping on rounding.
constexpr double kNormTolerance = 1e-8;
constexpr double kEvolveNormDrift = 1e-10;

std::string join_labels(const std::vector<std::string>& labels) {
    std::ostringstream out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out << ',';
        out << labels[i];
    }
    return out.str();
}

}  // namespace

ProductBasis::ProductBasis(std::vector<LevelScheme> schemes, Eigen::Index dim_cap)
    : schemes_(std::move(schemes)) {
    if (schemes_.empty()) throw std::invalid_argument("ProductBasis: no atoms given");
    std::set<int> seen_ids;
    for (const auto& s : schemes_) {
        if (!seen_ids.insert(s.atom_id).second)
            throw std::invalid_argument("ProductBasis: duplicate atom_id " +
                                        std::to_string(s.atom_id));
        if (s.levels.size() < 2)
            throw std::invalid_argument("ProductBasis: atom " + std::to_string(s.atom_id) +
                                        " needs at least 2 levels");
        std::set<std::string> seen_labels(s.levels.begin(), s.levels.end());
        if (seen_labels.size() != s.levels.size())
            throw std::invalid_argument("ProductBasis: duplicate level label on atom " +
                                        std::to_string(s.atom_id));
    }
    strides_.assign(schemes_.size(), 1);
    dim_ = 1;
    for (int k = num_atoms() - 1; k >= 0; --k) {
        strides_[k] = dim_;
        dim_ *= static_cast<Eigen::Index>(schemes_[k].levels.size());
        if (dim_ > dim_cap)
            throw std::invalid_argument("ProductBasis: dimension exceeds cap " +
                                        std::to_string(dim_cap));
    }
}

const LevelScheme& ProductBasis::scheme(int atom) const {
    if (atom < 0 || atom >= num_atoms())
        throw std::out_of_range("ProductBasis: atom position " + std::to_string(atom));
    return schemes_[atom];
}

Eigen::Index ProductBasis::stride(int atom) const {
    scheme(atom);
    return strides_[atom];
}

int ProductBasis::atom_position(int atom_id) const {
    for (int k = 0; k < num_atoms(); ++k)
        if (schemes_[k].atom_id == atom_id) return k;
    throw std::invalid_argument("ProductBasis: unknown atom_id " + std::to_string(atom_id));
}

int ProductBasis::level_index(int atom, const std::string& label) const {
    const auto& levels = scheme(atom).levels;
    const auto it = std::find(levels.begin(), levels.end(), label);
    if (it == levels.end())
        throw std::invalid_argument("ProductBasis: atom " + std::to_string(atom) +
                                    " has no level '" + label + "'");
    return static_cast<int>(it - levels.begin());
}

bool ProductBasis::has_level(int atom, const std::string& label) const {
    const auto& levels = scheme(atom).levels;
    return std::find(levels.begin(), levels.end(), label) != levels.end();
}

Eigen::Index ProductBasis::state_index(const std::vector<std::string>& configuration) const {
    if (static_cast<int>(configuration.size()) != num_atoms())
        throw std::invalid_argument("ProductBasis: configuration '" + join_labels(configuration) +
                                    "' has wrong atom count");
    Eigen::Index index = 0;
    for (int k = 0; k < num_atoms(); ++k)
        index += strides_[k] * level_index(k, configuration[k]);
    return index;
}

std::vector<int> ProductBasis::unpack(Eigen::Index index) const {
    if (index < 0 || index >= dim_)
        throw std::out_of_range("ProductBasis: index " + std::to_string(index));
    std::vector<int> digits(num_atoms());
    for (int k = 0; k < num_atoms(); ++k) {
        digits[k] = static_cast<int>(index / strides_[k]);
        index %= strides_[k];
    }
    return digits;
}

std::string ProductBasis::configuration_label(Eigen::Index index) const {
    const auto digits = unpack(index);
    std::vector<std::string> labels(digits.size());
    for (std::size_t k = 0; k < digits.size(); ++k)
        labels[k] = schemes_[k].levels[digits[k]];
    return join_labels(labels);
}

BasisPtr build_product_basis(std::vector<LevelScheme> schemes, Eigen::Index dim_cap) {
    return std::make_shared<const ProductBasis>(std::move(schemes), dim_cap);
}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (!basis_) throw std::invalid_argument("StateVector: null basis");
    if (amplitudes_.size() != basis_->dim())
        throw std::invalid_argument("StateVector: amplitude length " +
                                    std::to_string(amplitudes_.size()) + " != basis dim " +
                                    std::to_string(basis_->dim()));
    const double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > kNormTolerance)
        throw std::invalid_argument("StateVector: norm " + std::to_string(n) + " is not 1");
}

StateVector StateVector::basis_state(BasisPtr basis,
                                     const std::vector<std::string>& configuration) {
    if (!basis) throw std::invalid_argument("StateVector: null basis");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->dim());
    amps(basis->state_index(configuration)) = 1.0;
    return StateVector(std::move(basis), std::move(amps));
}

StateVector StateVector::product_state(BasisPtr basis,
                                       const std::vector<Eigen::VectorXcd>& locals) {
    if (!basis) throw std::invalid_argument("StateVector: null basis");
    if (static_cast<int>(locals.size()) != basis->num_atoms())
        throw std::invalid_argument("StateVector: need one local state per atom");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (int k = 0; k < basis->num_atoms(); ++k) {
        const auto nk = static_cast<Eigen::Index>(basis->scheme(k).levels.size());
        if (locals[k].size() != nk)
            throw std::invalid_argument("StateVector: local state on atom " + std::to_string(k) +
                                        " has wrong dimension");
        const Eigen::VectorXcd local = locals[k] / locals[k].norm();
        Eigen::VectorXcd next(amps.size() * nk);
        for (Eigen::Index i = 0; i < amps.size(); ++i)
            next.segment(i * nk, nk) = amps(i) * local;
        amps = std::move(next);
    }
    return StateVector(std::move(basis), std::move(amps));
}

Complex StateVector::amplitude(const std::vector<std::string>& configuration) const {
    return amplitudes_(basis_->state_index(configuration));
}

HermitianOperator::HermitianOperator(BasisPtr basis, Eigen::MatrixXcd matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    if (!basis_) throw std::invalid_argument("HermitianOperator: null basis");
    if (matrix_.rows() != basis_->dim() || matrix_.cols() != basis_->dim())
        throw std::invalid_argument("HermitianOperator: matrix shape does not match basis dim " +
                                    std::to_string(basis_->dim()));
    // Scale-aware hermiticity check: absolute 1e-12 for O(1) entries, relative
    // for the large vdW energies (hundreds to thousands of rad/us).
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    const double defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
}

HermitianOperator HermitianOperator::zero(BasisPtr basis) {
    if (!basis) throw std::invalid_argument("HermitianOperator: null basis");
    const Eigen::Index d = basis->dim();
    return HermitianOperator(std::move(basis), Eigen::MatrixXcd::Zero(d, d));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
    if (basis_ != other.basis_)
        throw std::invalid_argument("HermitianOperator: operands live on different bases");
    return HermitianOperator(basis_, matrix_ + other.matrix_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
    return HermitianOperator(basis_, scale * matrix_);
}

EigenSystem diagonalize(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: eigendecomposition failed");
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXcd apply_propagator(const EigenSystem& es, const Eigen::VectorXcd& psi, double t) {
    Eigen::VectorXcd coeffs = es.eigenvectors.adjoint() * psi;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        coeffs(i) *= std::polar(1.0, -es.eigenvalues(i) * t);
    return es.eigenvectors * coeffs;
}

HermitianOperator embed_operator(const BasisPtr& basis, const std::vector<int>& atoms,
                                 const Eigen::MatrixXcd& local, bool add_adjoint) {
    if (!basis) throw std::invalid_argument("embed_operator: null basis");
    if (atoms.empty()) throw std::invalid_argument("embed_operator: no atoms named");
    std::set<int> unique(atoms.begin(), atoms.end());
    if (unique.size() != atoms.size())
        throw std::invalid_argument("embed_operator: repeated atom position");

    Eigen::Index local_dim = 1;
    std::vector<Eigen::Index> local_strides(atoms.size());
    for (int k = static_cast<int>(atoms.size()) - 1; k >= 0; --k) {
        local_strides[k] = local_dim;
        local_dim *= static_cast<Eigen::Index>(basis->scheme(atoms[k]).levels.size());
    }
    if (local.rows() != local_dim || local.cols() != local_dim)
        throw std::invalid_argument("embed_operator: local matrix is " +
                                    std::to_string(local.rows()) + "x" +
                                    std::to_string(local.cols()) + ", expected dim " +
                                    std::to_string(local_dim));

    // Walk every global index pair that differs only on the named atoms.
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(basis->dim(), basis->dim());
    for (Eigen::Index col = 0; col < basis->dim(); ++col) {
        const auto digits = basis->unpack(col);
        Eigen::Index local_col = 0;
        for (std::size_t k = 0; k < atoms.size(); ++k)
            local_col += local_strides[k] * digits[atoms[k]];
        Eigen::Index rest = col;
        for (int a : atoms) rest -= basis->stride(a) * digits[a];

        for (Eigen::Index local_row = 0; local_row < local_dim; ++local_row) {
            const Complex v = local(local_row, local_col);
            if (v == Complex(0.0, 0.0)) continue;
            Eigen::Index row = rest, rem = local_row;
            for (std::size_t k = 0; k < atoms.size(); ++k) {
                row += basis->stride(atoms[k]) * (rem / local_strides[k]);
                rem %= local_strides[k];
            }
            full(row, col) += v;
        }
    }
    if (add_adjoint) full += full.adjoint().eval();
    return HermitianOperator(basis, std::move(full));
}

StateVector evolve(const StateVector& state, const HermitianOperator& h, double t) {
    if (state.basis() != h.basis())
        throw std::invalid_argument("evolve: state and Hamiltonian live on different bases");
    if (t < 0) throw std::invalid_argument("evolve: negative duration");
    const EigenSystem es = diagonalize(h);
    Eigen::VectorXcd out = apply_propagator(es, state.amplitudes(), t);
    if (std::abs(out.norm() - 1.0) > kEvolveNormDrift)
        throw std::runtime_error("evolve: norm drift exceeds 1e-10");
    return StateVector(state.basis(), std::move(out));
}

double population(const StateVector& state, const std::vector<std::string>& configuration) {
    return std::norm(state.amplitude(configuration));
}

double population(const StateVector& state, const HermitianOperator& projector) {
    if (state.basis() != projector.basis())
        throw std::invalid_argument("population: projector lives on a different basis");
    const Complex value = state.amplitudes().dot(projector.matrix() * state.amplitudes());
    return value.real();
}

double level_population(const StateVector& state, int atom, const std::string& level) {
    const auto& basis = *state.basis();
    const int target = basis.level_index(atom, level);
    double total = 0.0;
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        if (basis.unpack(i)[atom] == target) total += std::norm(state.amplitudes()(i));
    }
    return total;
}

double projection_probability(const StateVector& state, int atom,
                              const Eigen::VectorXcd& local_state) {
    const auto& basis = *state.basis();
    const auto n_levels = static_cast<Eigen::Index>(basis.scheme(atom).levels.size());
    if (local_state.size() != n_levels)
        throw std::invalid_argument("projection_probability: local state has wrong dimension");
    const Eigen::VectorXcd local = local_state / local_state.norm();
    const Eigen::Index stride = basis.stride(atom);

    // Group indices by the configuration of all other atoms; within a group
    // the amplitude onto |local> is the coherent sum over this atom's levels.
    double total = 0.0;
    for (Eigen::Index i = 0; i < basis.dim(); ++i) {
        if (basis.unpack(i)[atom] != 0) continue;  // visit each group once
        Complex amp = 0.0;
        for (Eigen::Index l = 0; l < n_levels; ++l)
            amp += std::conj(local(l)) * state.amplitudes()(i + l * stride);
        total += std::norm(amp);
    }
    return total;
}

double overlap_fidelity(const StateVector& a, const StateVector& b) {
    if (a.basis() != b.basis())
        throw std::invalid_argument("overlap_fidelity: states live on different bases");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace echogate
