#include "waybound/random.hpp"

#include <cmath>
#include <string>

namespace waybound {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void require_positive_dim(Index dim, const char* what) {
    if (dim < 1) {
        throw ContractError(std::string(what) + " dimension must be positive, got " +
                            std::to_string(dim));
    }
}

} // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t Rng::next_u64() {
    return engine_();
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

Complex Rng::normal_complex() {
    return Complex(normal(), normal()) / std::sqrt(2.0);
}

Rng Rng::fork(std::uint64_t stream) const {
    return Rng(splitmix(seed_ + 0x9E3779B97F4A7C15ULL * (stream + 1)));
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
    require_positive_dim(dim, "random observable");
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = rng.normal_complex();
        }
    }
    return HermitianOperator(((g + g.adjoint()) / 2.0).eval());
}

UnitaryOperator random_unitary(Index dim, Rng& rng) {
    require_positive_dim(dim, "random unitary");
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = rng.normal_complex();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < dim; ++j) {
        const Complex diag = r(j, j);
        const double mag = std::abs(diag);
        q.col(j) *= mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
    }
    return UnitaryOperator(std::move(q));
}

QuantumState random_pure_state(Index dim, Rng& rng) {
    require_positive_dim(dim, "random state");
    Vector v(dim);
    double norm = 0.0;
    do {
        for (Index i = 0; i < dim; ++i) {
            v(i) = rng.normal_complex();
        }
        norm = v.norm();
    } while (norm < 1e-8);
    return QuantumState::pure(v / norm);
}

QuantumState random_density(Index dim, Rng& rng) {
    require_positive_dim(dim, "random density");
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            g(i, j) = rng.normal_complex();
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return QuantumState::mixed(std::move(rho));
}

} // namespace waybound
