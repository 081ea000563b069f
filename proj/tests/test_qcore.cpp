#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "waybound/errors.hpp"
#include "waybound/qcore.hpp"
#include "waybound/random.hpp"

#include "oracle.hpp"

using namespace waybound;

namespace {

Matrix pauli(Axis axis) {
    return 2.0 * spin_component(axis).matrix();
}

} // namespace

TEST_CASE("hermitian operator construction validates") {
    Matrix good(2, 2);
    good << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), -3.0;
    CHECK(HermitianOperator(good).dim() == 2);

    Matrix bad = good;
    bad(0, 1) = Complex(0.0, 2.0 + 1e-6);
    CHECK_THROWS_AS(HermitianOperator{bad}, ContractError);

    CHECK_THROWS_AS(HermitianOperator(Matrix::Zero(2, 3)), ContractError);
    CHECK_THROWS_AS(HermitianOperator(Matrix::Zero(0, 0)), ContractError);

    Matrix nan = good;
    nan(1, 1) = std::nan("");
    CHECK_THROWS_AS(HermitianOperator{nan}, ContractError);
}

TEST_CASE("hermiticity tolerance window") {
    Matrix nearly(2, 2);
    nearly << 1.0, Complex(0.5, 1e-11), Complex(0.5, -1e-11), 1.0;
    CHECK_NOTHROW(HermitianOperator{nearly}); // within the per-element window

    Matrix outside(2, 2);
    outside << 1.0, Complex(0.5, 1e-9), Complex(0.5, 1e-9), 1.0;
    CHECK_THROWS_AS(HermitianOperator{outside}, ContractError);
}

TEST_CASE("unitary operator construction validates") {
    CHECK_NOTHROW(UnitaryOperator(Matrix::Identity(3, 3)));
    CHECK_THROWS_AS(UnitaryOperator(1.1 * Matrix::Identity(2, 2)), ContractError);
    CHECK_THROWS_AS(UnitaryOperator(Matrix::Zero(2, 3)), ContractError);
}

TEST_CASE("pure states require unit norm") {
    Vector v(2);
    v << 0.6, 0.8;
    const QuantumState s = QuantumState::pure(v);
    CHECK(s.is_pure());
    CHECK(s.dim() == 2);
    CHECK((s.density_matrix() - v * v.adjoint()).norm() == 0.0);

    CHECK_THROWS_AS(QuantumState::pure(1.1 * v), ContractError);
    CHECK_THROWS_AS(QuantumState::pure(Vector::Zero(0)), ContractError);
}

TEST_CASE("mixed states require unit trace and positivity") {
    const QuantumState maximally = QuantumState::mixed(Matrix::Identity(2, 2) / 2.0);
    CHECK_FALSE(maximally.is_pure());
    CHECK_THROWS_AS(maximally.state_vector(), ContractError);

    Matrix wrong_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(QuantumState::mixed(wrong_trace), ContractError);

    Matrix indefinite(2, 2);
    indefinite << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(QuantumState::mixed(indefinite), ContractError);

    Matrix skew(2, 2);
    skew << 0.5, 0.3, -0.3, 0.5;
    CHECK_THROWS_AS(QuantumState::mixed(skew), ContractError);
}

TEST_CASE("basis states") {
    const QuantumState s = basis_state(4, 2);
    CHECK(s.state_vector()(2) == Complex(1.0, 0.0));
    CHECK(s.state_vector().norm() == 1.0);
    CHECK_THROWS_AS(basis_state(4, 4), ContractError);
    CHECK_THROWS_AS(basis_state(4, -1), ContractError);
}

TEST_CASE("spin components satisfy the su(2) algebra") {
    const Matrix sx = spin_component(Axis::X).matrix();
    const Matrix sy = spin_component(Axis::Y).matrix();
    const Matrix sz = spin_component(Axis::Z).matrix();
    // [S_x, S_y] = i S_z and cyclic
    CHECK((sx * sy - sy * sx - Complex(0.0, 1.0) * sz).norm() <= 1e-15);
    CHECK((sy * sz - sz * sy - Complex(0.0, 1.0) * sx).norm() <= 1e-15);
    CHECK((sz * sx - sx * sz - Complex(0.0, 1.0) * sy).norm() <= 1e-15);
    // S_i^2 = 1/4
    CHECK((sx * sx - Matrix::Identity(2, 2) / 4.0).norm() <= 1e-15);
    CHECK((sy * sy - Matrix::Identity(2, 2) / 4.0).norm() <= 1e-15);
}

TEST_CASE("tensor products match a naive kron") {
    Rng rng(91);
    const HermitianOperator a = random_hermitian(2, rng);
    const HermitianOperator b = random_hermitian(3, rng);
    const HermitianOperator ab = tensor(a, b);
    CHECK(ab.dim() == 6);
    const oracle::Mat expected = oracle::kron(oracle::from_eigen(a.matrix()),
                                              oracle::from_eigen(b.matrix()));
    CHECK(oracle::max_abs_diff(oracle::from_eigen(ab.matrix()), expected) == 0.0);
}

TEST_CASE("tensor is associative") {
    Rng rng(92);
    const HermitianOperator a = random_hermitian(2, rng);
    const HermitianOperator b = random_hermitian(2, rng);
    const HermitianOperator c = random_hermitian(3, rng);
    const Matrix left = tensor(tensor(a, b), c).matrix();
    const Matrix right = tensor(a, tensor(b, c)).matrix();
    // entries differ only by the rounding order of two scalar products
    CHECK((left - right).norm() <= 1e-14);
}

TEST_CASE("tensor respects the dimension cap") {
    Rng rng(93);
    const HermitianOperator a = random_hermitian(2, rng);
    const HermitianOperator b = random_hermitian(2, rng);
    CHECK_THROWS_AS(tensor(a, b, 3), ResourceError);

    const QuantumState x = random_pure_state(2, rng);
    const QuantumState y = random_pure_state(2, rng);
    CHECK_THROWS_AS(tensor(x, y, 3), ResourceError);
}

TEST_CASE("state tensor products") {
    Rng rng(94);
    const QuantumState x = random_pure_state(2, rng);
    const QuantumState y = random_pure_state(3, rng);
    const QuantumState xy = tensor(x, y);
    CHECK(xy.is_pure());
    CHECK(xy.dim() == 6);

    const QuantumState rho = random_density(2, rng);
    const QuantumState mixed = tensor(x, rho);
    CHECK_FALSE(mixed.is_pure());
    const oracle::Mat expected = oracle::kron(oracle::from_eigen(x.density_matrix()),
                                              oracle::from_eigen(rho.density_matrix()));
    CHECK(oracle::max_abs_diff(oracle::from_eigen(mixed.density_matrix()), expected) == 0.0);
    CHECK(std::abs(mixed.density_matrix().trace().real() - 1.0) <= 1e-12);
}

TEST_CASE("commutator basics") {
    Rng rng(95);
    const HermitianOperator a = random_hermitian(3, rng);
    const HermitianOperator b = random_hermitian(3, rng);
    CHECK(commutator(a, a).norm() <= 1e-15);
    CHECK((commutator(a, b) + commutator(b, a)).norm() <= 1e-15);
    const HermitianOperator c = random_hermitian(2, rng);
    CHECK_THROWS_AS(commutator(a, c), ContractError);
}

TEST_CASE("expectations agree between pure and projector form") {
    Rng rng(96);
    const HermitianOperator a = random_hermitian(4, rng);
    const QuantumState psi = random_pure_state(4, rng);
    const QuantumState rho = QuantumState::mixed(psi.density_matrix());
    CHECK(expectation(a, psi) == doctest::Approx(expectation(a, rho)).epsilon(1e-12));

    const Complex via_oracle = oracle::expect(oracle::from_eigen(a.matrix()),
                                              oracle::from_eigen(psi.state_vector()));
    CHECK(std::abs(via_oracle.real() - expectation(a, psi)) <= 1e-12);
}

TEST_CASE("real expectation rejects large imaginary residue") {
    Matrix skew(2, 2);
    skew << 0.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 0.0; // not Hermitian
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const QuantumState psi = QuantumState::pure(v);
    CHECK_THROWS_AS(real_expectation(skew, psi), NumericalError);
    CHECK(std::abs(complex_expectation(skew, psi).imag() - 1.0) <= 1e-12);

    CHECK_THROWS_AS(complex_expectation(Matrix::Identity(3, 3), psi), ContractError);
}

TEST_CASE("clamped sqrt windows") {
    CHECK(clamped_sqrt(4.0) == 2.0);
    CHECK(clamped_sqrt(0.0) == 0.0);
    CHECK(clamped_sqrt(-1e-13) == 0.0);
    CHECK(clamped_sqrt(1e-300) > 0.0);
    CHECK_THROWS_AS(clamped_sqrt(-1e-11), NumericalError);
}

TEST_CASE("standard deviations") {
    const QuantumState zero = basis_state(2, 0);
    CHECK(std_dev(spin_component(Axis::Z), zero) == 0.0);
    CHECK(std_dev(spin_component(Axis::X), zero) == doctest::Approx(0.5).epsilon(1e-14));

    Rng rng(97);
    const HermitianOperator a = random_hermitian(3, rng);
    const Eigendecomposition ed = eigendecompose(a);
    const QuantumState eigstate = QuantumState::pure(ed.eigenvectors.col(1));
    CHECK(std_dev(a, eigstate) <= 1e-7); // variance cancels to round-off
}

TEST_CASE("matrix exponential of i H") {
    CHECK((matrix_exp_i(HermitianOperator(Matrix::Zero(3, 3))).matrix() - Matrix::Identity(3, 3))
              .norm() <= 1e-14);

    const double theta = 0.3;
    const UnitaryOperator u = matrix_exp_i(HermitianOperator(theta * pauli(Axis::X)));
    const Matrix expected =
        std::cos(theta) * Matrix::Identity(2, 2) + Complex(0.0, std::sin(theta)) * pauli(Axis::X);
    CHECK((u.matrix() - expected).norm() <= 1e-12);
}

TEST_CASE("eigendecomposition reconstructs and sorts") {
    Rng rng(98);
    const HermitianOperator a = random_hermitian(5, rng);
    const Eigendecomposition ed = eigendecompose(a);
    const Matrix rebuilt = ed.eigenvectors *
                           ed.eigenvalues.cast<Complex>().asDiagonal() *
                           ed.eigenvectors.adjoint();
    CHECK((rebuilt - a.matrix()).norm() <= 1e-12);
    for (Index i = 1; i < 5; ++i) {
        CHECK(ed.eigenvalues(i) >= ed.eigenvalues(i - 1));
    }
    CHECK((ed.eigenvectors.adjoint() * ed.eigenvectors - Matrix::Identity(5, 5)).norm() <= 1e-12);
}

TEST_CASE("variance is additive over product states") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const Index da = 2 + static_cast<Index>(rng.next_u64() % 3);
        const Index db = 2 + static_cast<Index>(rng.next_u64() % 3);
        const HermitianOperator a = random_hermitian(da, rng);
        const HermitianOperator b = random_hermitian(db, rng);
        const QuantumState x = random_pure_state(da, rng);
        const QuantumState y = random_pure_state(db, rng);
        const HermitianOperator total =
            HermitianOperator(tensor(a, identity_operator(db)).matrix() +
                              tensor(identity_operator(da), b).matrix());
        const double lhs = std::pow(std_dev(total, tensor(x, y)), 2);
        const double rhs = std::pow(std_dev(a, x), 2) + std::pow(std_dev(b, y), 2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}
