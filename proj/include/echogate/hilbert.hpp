#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace echogate {

using Complex = std::complex<double>;

// One atom's internal levels, in a fixed order.  Typical gate atoms use
// {"0","1","rc"} (control) and {"0","1","r0","r1"} (target); the two-level
// blockade toy model uses {"down","up"}.
struct LevelScheme {
    int atom_id = 0;
    std::vector<std::string> levels;
};

// Tensor-product space over an ordered list of atoms.  Flat indices are
// atom-major / level-minor: atom 0 is the most significant digit, so the
// map matches kron(op_0, op_1, ...) ordering.
class ProductBasis {
  public:
    explicit ProductBasis(std::vector<LevelScheme> schemes, Eigen::Index dim_cap = 4096);

    int num_atoms() const { return static_cast<int>(schemes_.size()); }
    Eigen::Index dim() const { return dim_; }
    const LevelScheme& scheme(int atom) const;
    Eigen::Index stride(int atom) const;

    // Ordinal position of an atom id (throws for unknown ids).
    int atom_position(int atom_id) const;
    // Position of a level label within one atom's scheme (throws if absent).
    int level_index(int atom, const std::string& label) const;
    bool has_level(int atom, const std::string& label) const;

    // Configuration (one label per atom) <-> flat index.
    Eigen::Index state_index(const std::vector<std::string>& configuration) const;
    std::vector<int> unpack(Eigen::Index index) const;
    // Human-readable configuration label, e.g. "rc,0".
    std::string configuration_label(Eigen::Index index) const;

  private:
    std::vector<LevelScheme> schemes_;
    std::vector<Eigen::Index> strides_;
    Eigen::Index dim_ = 0;
};

using BasisPtr = std::shared_ptr<const ProductBasis>;

BasisPtr build_product_basis(std::vector<LevelScheme> schemes, Eigen::Index dim_cap = 4096);

// Normalized pure state over a ProductBasis.
class StateVector {
  public:
    StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

    // Unit amplitude on a single configuration, e.g. {"0","0"}.
    static StateVector basis_state(BasisPtr basis, const std::vector<std::string>& configuration);
    // Tensor product of per-atom states (each normalized locally).
    static StateVector product_state(BasisPtr basis, const std::vector<Eigen::VectorXcd>& locals);

    const BasisPtr& basis() const { return basis_; }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Complex amplitude(const std::vector<std::string>& configuration) const;
    double norm() const { return amplitudes_.norm(); }

  private:
    BasisPtr basis_;
    Eigen::VectorXcd amplitudes_;
};

// Dense Hermitian operator (units: angular frequency, rad/us).  Hermiticity
// is enforced at construction so downstream eigensolves are always valid.
class HermitianOperator {
  public:
    HermitianOperator(BasisPtr basis, Eigen::MatrixXcd matrix);

    static HermitianOperator zero(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    HermitianOperator operator+(const HermitianOperator& other) const;
    HermitianOperator operator*(double scale) const;
    friend HermitianOperator operator*(double scale, const HermitianOperator& op) {
        return op * scale;
    }

  private:
    BasisPtr basis_;
    Eigen::MatrixXcd matrix_;
};

// Spectral decomposition H = V diag(w) V^dagger, reused when one stage is
// sampled at many times (the propagator is exact for piecewise-constant H).
struct EigenSystem {
    Eigen::VectorXd eigenvalues;   // rad/us
    Eigen::MatrixXcd eigenvectors; // columns
};

EigenSystem diagonalize(const HermitianOperator& h);

// exp(-i H t) |psi> from a precomputed decomposition.
Eigen::VectorXcd apply_propagator(const EigenSystem& es, const Eigen::VectorXcd& psi, double t);

// Embed a local operator acting on the listed atoms (ordinal positions, in
// the order the local matrix's tensor factors are meant) as identity on all
// other atoms.  With add_adjoint the conjugate transpose is added, which is
// how off-diagonal couplings like (Omega/2)|r><0| become Hermitian drives.
HermitianOperator embed_operator(const BasisPtr& basis, const std::vector<int>& atoms,
                                 const Eigen::MatrixXcd& local, bool add_adjoint = false);

// exp(-i H t)|state>; exact via eigendecomposition, norm drift checked to 1e-10.
StateVector evolve(const StateVector& state, const HermitianOperator& h, double t);

// |<configuration|psi>|^2.
double population(const StateVector& state, const std::vector<std::string>& configuration);
// <psi|P|psi> for a (projector-like) Hermitian operator.
double population(const StateVector& state, const HermitianOperator& projector);
// Total probability that one atom occupies a given level, other atoms summed over.
double level_population(const StateVector& state, int atom, const std::string& level);
// Probability that one atom is found in the local superposition with the given
// coefficients (in that atom's level order), other atoms summed over.
double projection_probability(const StateVector& state, int atom,
                              const Eigen::VectorXcd& local_state);

// |<a|b>|^2.
double overlap_fidelity(const StateVector& a, const StateVector& b);

}  // namespace echogate
