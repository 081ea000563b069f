#ifndef WAYBOUND_QCORE_HPP
#define WAYBOUND_QCORE_HPP

#include <complex>

#include <Eigen/Dense>

#include "waybound/errors.hpp"

namespace waybound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Conventions: hbar = 1 everywhere, so angular momenta are in units of hbar
// and gate error probabilities are dimensionless. Spin components are
// S_i = sigma_i / 2 with |0> the +z eigenstate. Matrices are dense,
// row-major in serialized form, complex<double> in memory.

inline constexpr double kHermitianElementTol = 1e-10; // per-element Hermiticity
inline constexpr double kUnitaryFrobeniusTol = 1e-9;  // ||U'U - 1||_F
inline constexpr double kStateNormTol = 1e-10;        // pure norm / trace window
inline constexpr double kDensityEigenvalueTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-8;       // expectation imag guard
inline constexpr double kNegativeVarianceTol = 1e-12; // round-off clamp window
inline constexpr double kRelationSlackTol = 1e-9;     // artifact-wide "holds" slack
inline constexpr Index kDefaultDimensionCap = 4096;   // dense-dimension ceiling

enum class Axis { X, Y, Z };

/// Finite-dimensional observable. Construction validates that every entry is
/// finite and that the matrix equals its conjugate transpose to
/// kHermitianElementTol per element.
class HermitianOperator {
  public:
    explicit HermitianOperator(Matrix entries);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

  private:
    Matrix entries_;
};

/// Interaction or gate unitary. Construction validates U'U = 1 to
/// kUnitaryFrobeniusTol in Frobenius norm.
class UnitaryOperator {
  public:
    explicit UnitaryOperator(Matrix entries);

    Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

  private:
    Matrix entries_;
};

/// Pure unit vector or density operator. Pure states keep their vector form;
/// density_matrix() materializes the projector on demand.
class QuantumState {
  public:
    static QuantumState pure(Vector amplitudes);
    static QuantumState mixed(Matrix density);

    bool is_pure() const { return pure_; }
    Index dim() const { return pure_ ? vector_.size() : density_.rows(); }

    /// Amplitudes of a pure state; ContractError on a mixed state.
    const Vector& state_vector() const;
    /// Density matrix; for pure states this builds |psi><psi|.
    Matrix density_matrix() const;

    friend QuantumState tensor(const QuantumState& x, const QuantumState& y, Index dim_cap);

  private:
    QuantumState() = default;

    bool pure_ = true;
    Vector vector_;
    Matrix density_;
};

HermitianOperator identity_operator(Index dim);

/// Computational basis vector |k> on `dim` levels.
QuantumState basis_state(Index dim, Index k);

/// Spin-1/2 component S_i = sigma_i / 2 for the given axis.
HermitianOperator spin_component(Axis axis);

/// Kronecker product. The composite dimension must stay within `dim_cap`
/// (ResourceError otherwise).
HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y,
                         Index dim_cap = kDefaultDimensionCap);
QuantumState tensor(const QuantumState& x, const QuantumState& y,
                    Index dim_cap = kDefaultDimensionCap);

/// AB - BA. Anti-Hermitian for Hermitian inputs, so its expectation values
/// are purely imaginary.
Matrix commutator(const HermitianOperator& a, const HermitianOperator& b);

/// <psi|M|psi> or Tr[M rho] without any reality check.
Complex complex_expectation(const Matrix& m, const QuantumState& s);

/// Real expectation of a matrix expected to be Hermitian. Imaginary residue
/// above kImagResidueTol raises NumericalError; smaller residue is discarded.
double real_expectation(const Matrix& m, const QuantumState& s);

/// <A> in the given state.
double expectation(const HermitianOperator& a, const QuantumState& s);

/// sqrt of a variance-like quantity: negative round-off within
/// kNegativeVarianceTol clamps to zero, anything more negative raises
/// NumericalError.
double clamped_sqrt(double value);

/// Standard deviation sqrt(<A^2> - <A>^2).
double std_dev(const HermitianOperator& a, const QuantumState& s);

/// exp(iH) through the eigendecomposition of H.
UnitaryOperator matrix_exp_i(const HermitianOperator& h);

struct Eigendecomposition {
    Eigen::VectorXd eigenvalues; // ascending
    Matrix eigenvectors;         // unitary, columns match eigenvalues
};

/// A = V diag(lambda) V'.
Eigendecomposition eigendecompose(const HermitianOperator& a);

} // namespace waybound

#endif
