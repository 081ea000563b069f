#include "waybound/conservation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "waybound/errors.hpp"
#include "waybound/optimizer.hpp"
#include "waybound/random.hpp"

namespace waybound {

HermitianOperator ConservedCharge::total() const {
    return HermitianOperator(tensor(l1, identity_operator(l2.dim())).matrix() +
                             tensor(identity_operator(l1.dim()), l2).matrix());
}

double check_conservation(const MeasurementModel& m, const ConservedCharge& c) {
    const HermitianOperator t = c.total();
    if (t.dim() != m.composite_dim()) {
        throw ContractError("charge dimension " + std::to_string(t.dim()) +
                            " does not match composite dimension " +
                            std::to_string(m.composite_dim()));
    }
    const Matrix& u = m.interaction().matrix();
    return (u * t.matrix() - t.matrix() * u).norm();
}

double check_yanase(const MeasurementModel& m, const ConservedCharge& c) {
    if (c.l2.dim() != m.apparatus_dim()) {
        throw ContractError("apparatus charge dimension " + std::to_string(c.l2.dim()) +
                            " does not match apparatus dimension " +
                            std::to_string(m.apparatus_dim()));
    }
    return commutator(m.meter(), c.l2).norm();
}

NoiseLowerBound way_bound(const HermitianOperator& a, const ConservedCharge& c,
                          const QuantumState& psi, const QuantumState& xi) {
    if (a.dim() != c.l1.dim() || a.dim() != psi.dim()) {
        throw ContractError("way_bound: object dimensions disagree");
    }
    if (c.l2.dim() != xi.dim()) {
        throw ContractError("way_bound: apparatus dimensions disagree");
    }
    const double commutator_abs = std::abs(complex_expectation(commutator(a, c.l1), psi));
    const double s1 = std_dev(c.l1, psi);
    const double s2 = std_dev(c.l2, xi);
    return ratio_bound(commutator_abs * commutator_abs, 4.0 * s1 * s1 + 4.0 * s2 * s2);
}

RelationReport verify_way(const MeasurementModel& m, const HermitianOperator& a,
                          const ConservedCharge& c, const QuantumState& psi) {
    const double conservation_norm = check_conservation(m, c);
    if (conservation_norm > kConditionNormTol) {
        throw ContractError("interaction does not conserve the charge: ||[U, L]|| = " +
                            std::to_string(conservation_norm));
    }
    const double yanase_norm = check_yanase(m, c);
    if (yanase_norm > kConditionNormTol) {
        throw ContractError("meter is not compatible with the apparatus charge: ||[M, L2]|| = " +
                            std::to_string(yanase_norm));
    }
    const double epsilon = noise(m, a, psi);
    const NoiseLowerBound bound = way_bound(a, c, psi, m.apparatus_state());
    const double rhs =
        bound.is_unbounded() ? std::numeric_limits<double>::infinity() : bound.value();
    return make_relation_report(epsilon * epsilon, rhs,
                                {{"epsilon", epsilon},
                                 {"sigma_l1", std_dev(c.l1, psi)},
                                 {"sigma_l2", std_dev(c.l2, m.apparatus_state())},
                                 {"conservation_norm", conservation_norm},
                                 {"yanase_norm", yanase_norm}});
}

ConservingCase random_conserving_case(const RandomCaseDims& dims, std::uint64_t seed,
                                      std::uint64_t index) {
    if (dims.object_min < 2 || dims.object_max < dims.object_min || dims.apparatus_min < 2 ||
        dims.apparatus_max < dims.apparatus_min) {
        throw ContractError("random_conserving_case: invalid dimension ranges");
    }
    Rng rng = Rng(seed).fork(index);
    const Index object_dim =
        dims.object_min + static_cast<Index>(rng.next_u64() %
                                             static_cast<std::uint64_t>(
                                                 dims.object_max - dims.object_min + 1));
    const Index apparatus_dim =
        dims.apparatus_min + static_cast<Index>(rng.next_u64() %
                                                static_cast<std::uint64_t>(
                                                    dims.apparatus_max - dims.apparatus_min + 1));

    ConservedCharge charge{random_hermitian(object_dim, rng), random_hermitian(apparatus_dim, rng)};
    const CommutantParametrization commutant = commutant_basis(charge.total());
    UnitaryOperator interaction = random_commutant_unitary(commutant, rng);

    // Meter diagonal in the L2 eigenbasis, hence commuting with L2.
    const Eigendecomposition l2_eigen = eigendecompose(charge.l2);
    Matrix meter_diag = Matrix::Zero(apparatus_dim, apparatus_dim);
    for (Index i = 0; i < apparatus_dim; ++i) {
        meter_diag(i, i) = 2.0 * rng.uniform() - 1.0;
    }
    Matrix meter = l2_eigen.eigenvectors * meter_diag * l2_eigen.eigenvectors.adjoint();
    meter = ((meter + meter.adjoint()) / 2.0).eval();

    QuantumState xi = random_pure_state(apparatus_dim, rng);
    HermitianOperator a = random_hermitian(object_dim, rng);
    QuantumState psi = random_pure_state(object_dim, rng);

    MeasurementModel model(object_dim, std::move(xi), std::move(interaction),
                           HermitianOperator(std::move(meter)));
    return {std::move(model), std::move(charge), std::move(a), std::move(psi)};
}

} // namespace waybound
