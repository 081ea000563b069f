#include "waybound/qcore.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace waybound {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw ContractError(std::string(what) + ": matrix must be square and nonempty, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw ContractError(std::string(what) + ": entries must be finite");
    }
}

void check_dim_cap(Index combined, Index cap) {
    if (combined > cap) {
        throw ResourceError("tensor: composite dimension " + std::to_string(combined) +
                            " exceeds the cap " + std::to_string(cap));
    }
}

} // namespace

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "HermitianOperator");
    require_finite(entries_, "HermitianOperator");
    for (Index i = 0; i < entries_.rows(); ++i) {
        for (Index j = 0; j <= i; ++j) {
            const double defect = std::abs(entries_(i, j) - std::conj(entries_(j, i)));
            if (defect > kHermitianElementTol) {
                throw ContractError("HermitianOperator: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") breaks Hermiticity by " +
                                    std::to_string(defect));
            }
        }
    }
}

UnitaryOperator::UnitaryOperator(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "UnitaryOperator");
    require_finite(entries_, "UnitaryOperator");
    const Index d = entries_.rows();
    const double defect = (entries_.adjoint() * entries_ - Matrix::Identity(d, d)).norm();
    if (defect > kUnitaryFrobeniusTol) {
        throw ContractError("UnitaryOperator: ||U'U - 1||_F = " + std::to_string(defect));
    }
}

QuantumState QuantumState::pure(Vector amplitudes) {
    if (amplitudes.size() == 0) {
        throw ContractError("QuantumState::pure: empty vector");
    }
    if (!amplitudes.allFinite()) {
        throw ContractError("QuantumState::pure: entries must be finite");
    }
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > kStateNormTol) {
        throw ContractError("QuantumState::pure: norm " + std::to_string(norm) +
                            " outside the unit window");
    }
    QuantumState s;
    s.pure_ = true;
    s.vector_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::mixed(Matrix density) {
    require_square(density, "QuantumState::mixed");
    require_finite(density, "QuantumState::mixed");
    const Index d = density.rows();
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j <= i; ++j) {
            if (std::abs(density(i, j) - std::conj(density(j, i))) > kHermitianElementTol) {
                throw ContractError("QuantumState::mixed: density operator is not Hermitian");
            }
        }
    }
    const double trace = density.trace().real();
    if (std::abs(trace - 1.0) > kStateNormTol) {
        throw ContractError("QuantumState::mixed: trace " + std::to_string(trace) +
                            " outside the unit window");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(density, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("QuantumState::mixed: eigenvalue check failed to converge");
    }
    if (solver.eigenvalues().minCoeff() < -kDensityEigenvalueTol) {
        throw ContractError("QuantumState::mixed: negative eigenvalue " +
                            std::to_string(solver.eigenvalues().minCoeff()));
    }
    QuantumState s;
    s.pure_ = false;
    s.density_ = std::move(density);
    return s;
}

const Vector& QuantumState::state_vector() const {
    if (!pure_) {
        throw ContractError("QuantumState: state_vector() called on a mixed state");
    }
    return vector_;
}

Matrix QuantumState::density_matrix() const {
    if (pure_) {
        return vector_ * vector_.adjoint();
    }
    return density_;
}

HermitianOperator identity_operator(Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
}

QuantumState basis_state(Index dim, Index k) {
    if (dim < 1 || k < 0 || k >= dim) {
        throw ContractError("basis_state: level " + std::to_string(k) + " out of range for dim " +
                            std::to_string(dim));
    }
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return QuantumState::pure(std::move(v));
}

HermitianOperator spin_component(Axis axis) {
    Matrix m(2, 2);
    switch (axis) {
    case Axis::X:
        m << 0.0, 0.5, 0.5, 0.0;
        break;
    case Axis::Y:
        m << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
        break;
    case Axis::Z:
        m << 0.5, 0.0, 0.0, -0.5;
        break;
    }
    return HermitianOperator(std::move(m));
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y, Index dim_cap) {
    check_dim_cap(x.dim() * y.dim(), dim_cap);
    return HermitianOperator(Eigen::kroneckerProduct(x.matrix(), y.matrix()).eval());
}

QuantumState tensor(const QuantumState& x, const QuantumState& y, Index dim_cap) {
    check_dim_cap(x.dim() * y.dim(), dim_cap);
    if (x.is_pure() && y.is_pure()) {
        return QuantumState::pure(
            Eigen::kroneckerProduct(x.state_vector(), y.state_vector()).eval());
    }
    // Valid by construction (kron of PSD matrices, traces multiply), so skip
    // the eigenvalue re-check.
    QuantumState s;
    s.pure_ = false;
    s.density_ = Eigen::kroneckerProduct(x.density_matrix(), y.density_matrix()).eval();
    return s;
}

Matrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim()) {
        throw ContractError("commutator: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
    }
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

Complex complex_expectation(const Matrix& m, const QuantumState& s) {
    require_square(m, "complex_expectation");
    if (m.rows() != s.dim()) {
        throw ContractError("complex_expectation: operator dim " + std::to_string(m.rows()) +
                            " vs state dim " + std::to_string(s.dim()));
    }
    if (s.is_pure()) {
        return (s.state_vector().adjoint() * m * s.state_vector())(0);
    }
    return (m * s.density_matrix()).trace();
}

double real_expectation(const Matrix& m, const QuantumState& s) {
    const Complex value = complex_expectation(m, s);
    if (std::abs(value.imag()) > kImagResidueTol) {
        throw NumericalError("real_expectation: imaginary residue " +
                             std::to_string(value.imag()));
    }
    return value.real();
}

double expectation(const HermitianOperator& a, const QuantumState& s) {
    return real_expectation(a.matrix(), s);
}

double clamped_sqrt(double value) {
    if (value < -kNegativeVarianceTol) {
        throw NumericalError("clamped_sqrt: value " + std::to_string(value) +
                             " below the round-off window");
    }
    return value > 0.0 ? std::sqrt(value) : 0.0;
}

double std_dev(const HermitianOperator& a, const QuantumState& s) {
    const double mean = expectation(a, s);
    const double second = real_expectation(a.matrix() * a.matrix(), s);
    return clamped_sqrt(second - mean * mean);
}

UnitaryOperator matrix_exp_i(const HermitianOperator& h) {
    const Eigendecomposition ed = eigendecompose(h);
    const Index d = h.dim();
    Vector phases(d);
    for (Index i = 0; i < d; ++i) {
        phases(i) = std::exp(Complex(0.0, ed.eigenvalues(i)));
    }
    return UnitaryOperator(ed.eigenvectors * phases.asDiagonal() * ed.eigenvectors.adjoint());
}

Eigendecomposition eigendecompose(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: solver failed to converge");
    }
    return Eigendecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

} // namespace waybound
