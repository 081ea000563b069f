#include "waybound/measurement.hpp"

#include <cmath>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace waybound {

MeasurementModel::MeasurementModel(Index object_dim, QuantumState apparatus_state,
                                   UnitaryOperator interaction, HermitianOperator meter)
    : object_dim_(object_dim), apparatus_state_(std::move(apparatus_state)),
      interaction_(std::move(interaction)), meter_(std::move(meter)) {
    if (object_dim_ < 1) {
        throw ContractError("MeasurementModel: object dimension must be positive");
    }
    if (apparatus_state_.dim() != meter_.dim()) {
        throw ContractError("MeasurementModel: apparatus state dim " +
                            std::to_string(apparatus_state_.dim()) + " vs meter dim " +
                            std::to_string(meter_.dim()));
    }
    if (interaction_.dim() != object_dim_ * meter_.dim()) {
        throw ContractError("MeasurementModel: interaction dim " +
                            std::to_string(interaction_.dim()) + " is not object*apparatus = " +
                            std::to_string(object_dim_ * meter_.dim()));
    }
}

RelationReport make_relation_report(double lhs, double rhs,
                                    std::map<std::string, double> components) {
    RelationReport report;
    report.lhs = lhs;
    report.rhs = rhs;
    report.slack = lhs - rhs;
    report.holds = report.slack >= -kRelationSlackTol;
    report.components = std::move(components);
    return report;
}

NoiseLowerBound NoiseLowerBound::finite(double value) {
    NoiseLowerBound b;
    b.value_ = value;
    b.unbounded_ = false;
    return b;
}

NoiseLowerBound NoiseLowerBound::unbounded() {
    NoiseLowerBound b;
    b.unbounded_ = true;
    return b;
}

double NoiseLowerBound::value() const {
    if (unbounded_) {
        throw ContractError("NoiseLowerBound: value() on an unbounded bound");
    }
    return value_;
}

NoiseLowerBound ratio_bound(double numerator, double denominator) {
    if (denominator > 0.0) {
        return NoiseLowerBound::finite(numerator / denominator);
    }
    if (numerator > kRelationSlackTol) {
        return NoiseLowerBound::unbounded();
    }
    return NoiseLowerBound::finite(0.0);
}

namespace {

// sqrt(< (U' full U - reference)^2 >) over psi (x) xi.
double rms_deviation(const MeasurementModel& m, const Matrix& probe_full,
                     const Matrix& reference_full, const QuantumState& psi) {
    const Matrix& u = m.interaction().matrix();
    const Matrix shifted = u.adjoint() * probe_full * u - reference_full;
    const QuantumState joint = tensor(psi, m.apparatus_state());
    return clamped_sqrt(real_expectation(shifted * shifted, joint));
}

void require_object_sized(const MeasurementModel& m, const HermitianOperator& op,
                          const QuantumState& psi, const char* what) {
    if (op.dim() != m.object_dim()) {
        throw ContractError(std::string(what) + ": observable dim " + std::to_string(op.dim()) +
                            " vs object dim " + std::to_string(m.object_dim()));
    }
    if (psi.dim() != m.object_dim()) {
        throw ContractError(std::string(what) + ": state dim " + std::to_string(psi.dim()) +
                            " vs object dim " + std::to_string(m.object_dim()));
    }
}

} // namespace

double noise(const MeasurementModel& m, const HermitianOperator& a, const QuantumState& psi) {
    require_object_sized(m, a, psi, "noise");
    const Matrix meter_full =
        Eigen::kroneckerProduct(Matrix::Identity(m.object_dim(), m.object_dim()),
                                m.meter().matrix());
    const Matrix target_full = Eigen::kroneckerProduct(
        a.matrix(), Matrix::Identity(m.apparatus_dim(), m.apparatus_dim()));
    return rms_deviation(m, meter_full, target_full, psi);
}

double disturbance(const MeasurementModel& m, const HermitianOperator& b,
                   const QuantumState& psi) {
    if (psi.dim() != m.object_dim()) {
        throw ContractError("disturbance: state dim " + std::to_string(psi.dim()) +
                            " vs object dim " + std::to_string(m.object_dim()));
    }
    Matrix b_full;
    if (b.dim() == m.object_dim()) {
        b_full = Eigen::kroneckerProduct(b.matrix(),
                                         Matrix::Identity(m.apparatus_dim(), m.apparatus_dim()));
    } else if (b.dim() == m.composite_dim()) {
        b_full = b.matrix();
    } else {
        throw ContractError("disturbance: observable dim " + std::to_string(b.dim()) +
                            " fits neither object nor composite space");
    }
    return rms_deviation(m, b_full, b_full, psi);
}

namespace {

double half_commutator_mean(const HermitianOperator& a, const HermitianOperator& b,
                            const QuantumState& psi) {
    return 0.5 * std::abs(complex_expectation(commutator(a, b), psi));
}

} // namespace

RelationReport check_heisenberg(const MeasurementModel& m, const HermitianOperator& a,
                                const HermitianOperator& b, const QuantumState& psi) {
    const double eps = noise(m, a, psi);
    const double eta = disturbance(m, b, psi);
    const double rhs = half_commutator_mean(a, b, psi);
    return make_relation_report(eps * eta, rhs,
                                {{"epsilon", eps},
                                 {"eta", eta},
                                 {"sigma_a", std_dev(a, psi)},
                                 {"sigma_b", std_dev(b, psi)},
                                 {"half_commutator", rhs}});
}

RelationReport check_uup(const MeasurementModel& m, const HermitianOperator& a,
                         const HermitianOperator& b, const QuantumState& psi) {
    const double eps = noise(m, a, psi);
    const double eta = disturbance(m, b, psi);
    const double sigma_a = std_dev(a, psi);
    const double sigma_b = std_dev(b, psi);
    const double rhs = half_commutator_mean(a, b, psi);
    return make_relation_report(eps * eta + sigma_a * eta + eps * sigma_b, rhs,
                                {{"epsilon", eps},
                                 {"eta", eta},
                                 {"sigma_a", sigma_a},
                                 {"sigma_b", sigma_b},
                                 {"half_commutator", rhs}});
}

RelationReport check_robertson(const HermitianOperator& a, const HermitianOperator& b,
                               const QuantumState& psi) {
    const double sigma_a = std_dev(a, psi);
    const double sigma_b = std_dev(b, psi);
    const double rhs = half_commutator_mean(a, b, psi);
    return make_relation_report(
        sigma_a * sigma_b, rhs,
        {{"sigma_a", sigma_a}, {"sigma_b", sigma_b}, {"half_commutator", rhs}});
}

NoiseLowerBound nondisturbing_bound(const HermitianOperator& a, const HermitianOperator& b,
                                    const QuantumState& psi) {
    return ratio_bound(half_commutator_mean(a, b, psi), std_dev(b, psi));
}

MeasurementModel random_model(Index object_dim, Index apparatus_dim, Rng& rng) {
    if (object_dim < 2 || apparatus_dim < 2) {
        throw ContractError("random_model: both dimensions must be at least 2");
    }
    UnitaryOperator interaction = random_unitary(object_dim * apparatus_dim, rng);
    QuantumState xi = random_pure_state(apparatus_dim, rng);
    HermitianOperator meter = random_hermitian(apparatus_dim, rng);
    return MeasurementModel(object_dim, std::move(xi), std::move(interaction), std::move(meter));
}

MeasurementModel random_model(Index object_dim, Index apparatus_dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_model(object_dim, apparatus_dim, rng);
}

MeasurementModel projective_sz_model() {
    Matrix u = Matrix::Zero(4, 4);
    // |0><0| (x) 1 + |1><1| (x) sigma_x: copies the z-basis onto the probe.
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 3) = 1.0;
    u(3, 2) = 1.0;
    Matrix meter(2, 2);
    meter << 0.5, 0.0, 0.0, -0.5;
    return MeasurementModel(2, basis_state(2, 0), UnitaryOperator(std::move(u)),
                            HermitianOperator(std::move(meter)));
}

UupCase random_uup_case(const RandomCaseDims& dims, std::uint64_t seed, std::uint64_t index) {
    if (dims.object_min < 2 || dims.object_max < dims.object_min || dims.apparatus_min < 2 ||
        dims.apparatus_max < dims.apparatus_min) {
        throw ContractError("random_uup_case: invalid dimension ranges");
    }
    Rng rng = Rng(seed).fork(index);
    const Index od =
        dims.object_min + static_cast<Index>(rng.next_u64() %
                                             static_cast<std::uint64_t>(
                                                 dims.object_max - dims.object_min + 1));
    const Index ad =
        dims.apparatus_min + static_cast<Index>(rng.next_u64() %
                                                static_cast<std::uint64_t>(
                                                    dims.apparatus_max - dims.apparatus_min + 1));
    MeasurementModel model = random_model(od, ad, rng);
    HermitianOperator a = random_hermitian(od, rng);
    HermitianOperator b = random_hermitian(od, rng);
    QuantumState psi = random_pure_state(od, rng);
    return UupCase{std::move(model), std::move(a), std::move(b), std::move(psi)};
}

} // namespace waybound
