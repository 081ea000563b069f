#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "waybound/errors.hpp"
#include "waybound/measurement.hpp"
#include "waybound/qcore.hpp"
#include "waybound/random.hpp"

#include "oracle.hpp"

using namespace waybound;

namespace {

QuantumState plus_y_state() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    return QuantumState::pure(v);
}

/// <psi (x) xi| X^2 |psi (x) xi> for X = U' K U - A0 (x) 1, computed with the
/// naive matrix routines so library noise/disturbance paths are cross-checked
/// against arithmetic that shares no code with them.
double oracle_rms_sq(const MeasurementModel& m, const oracle::Mat& lifted_target,
                     const oracle::Mat& reference, const QuantumState& psi) {
    const oracle::Mat u = oracle::from_eigen(m.interaction().matrix());
    const oracle::Mat udag = oracle::dagger(u);
    const oracle::Mat evolved = oracle::mul(oracle::mul(udag, lifted_target), u);
    const oracle::Mat x = oracle::sub(evolved, reference);
    const oracle::Vec state = oracle::kron_vec(oracle::from_eigen(psi.state_vector()),
                                               oracle::from_eigen(m.apparatus_state().state_vector()));
    return oracle::expect(oracle::mul(x, x), state).real();
}

} // namespace

TEST_CASE("model construction validates dimensions") {
    const QuantumState xi = basis_state(2, 0);
    const UnitaryOperator u{Matrix::Identity(4, 4)};
    const HermitianOperator meter = spin_component(Axis::Z);
    CHECK_NOTHROW(MeasurementModel(2, xi, u, meter));

    // composite dim != object * apparatus
    CHECK_THROWS_AS(MeasurementModel(3, xi, u, meter), ContractError);
    // apparatus state dim != meter dim
    CHECK_THROWS_AS(MeasurementModel(2, basis_state(3, 0), u, meter), ContractError);
    CHECK_THROWS_AS(MeasurementModel(0, xi, u, meter), ContractError);
}

TEST_CASE("relation report boundary slack") {
    const RelationReport barely = make_relation_report(1.0 - 1e-10, 1.0, {});
    CHECK(barely.holds);
    CHECK(barely.slack == doctest::Approx(-1e-10).epsilon(1e-3));

    const RelationReport broken = make_relation_report(1.0 - 1e-8, 1.0, {});
    CHECK_FALSE(broken.holds);

    const RelationReport labelled = make_relation_report(2.0, 1.0, {{"epsilon", 0.5}});
    CHECK(labelled.holds);
    CHECK(labelled.components.at("epsilon") == 0.5);
}

TEST_CASE("ratio bound branches") {
    CHECK(ratio_bound(4.0, 2.0).value() == 2.0);
    CHECK(ratio_bound(0.0, 0.0).value() == 0.0);
    CHECK(ratio_bound(1e-10, 0.0).value() == 0.0); // numerator within slack
    CHECK(ratio_bound(1e-3, 0.0).is_unbounded());
    CHECK(ratio_bound(1e-3, -1.0).is_unbounded()); // negative variance-squared treated as zero

    const NoiseLowerBound unbounded = NoiseLowerBound::unbounded();
    CHECK_THROWS_AS(unbounded.value(), ContractError);
}

TEST_CASE("projective S_z model: exact noise and disturbance") {
    const MeasurementModel m = projective_sz_model();
    const HermitianOperator sz = spin_component(Axis::Z);
    const HermitianOperator sx = spin_component(Axis::X);
    const QuantumState psi = plus_y_state();

    CHECK(noise(m, sz, psi) == 0.0);
    CHECK(std::abs(disturbance(m, sx, psi) - std::sqrt(0.5)) <= 1e-15);

    // same numbers through the naive routines
    const oracle::Mat meter_lift = oracle::kron(oracle::identity(2),
                                                oracle::from_eigen(m.meter().matrix()));
    const oracle::Mat sz_lift = oracle::kron(oracle::from_eigen(sz.matrix()), oracle::identity(2));
    CHECK(oracle_rms_sq(m, meter_lift, sz_lift, psi) == doctest::Approx(0.0).epsilon(1e-14));

    const oracle::Mat sx_lift = oracle::kron(oracle::from_eigen(sx.matrix()), oracle::identity(2));
    CHECK(oracle_rms_sq(m, sx_lift, sx_lift, psi) == doctest::Approx(0.5).epsilon(1e-14));

    // the noise vanishes for every input state, not just the stored one
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        CHECK(noise(m, sz, random_pure_state(2, rng)) <= 1e-12);
        CHECK(disturbance(m, sx, random_pure_state(2, rng)) ==
              doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
}

TEST_CASE("trivial interaction reduces to first-moment statistics") {
    // With U = 1 the noise operator is 1 (x) M - A (x) 1, so
    // eps^2 = <M^2>_xi - 2<A>_psi <M>_xi + <A^2>_psi.
    Rng rng(21);
    const HermitianOperator a = random_hermitian(2, rng);
    const HermitianOperator meter = random_hermitian(3, rng);
    const QuantumState xi = random_pure_state(3, rng);
    const QuantumState psi = random_pure_state(2, rng);
    const MeasurementModel m(2, xi, UnitaryOperator{Matrix::Identity(6, 6)}, meter);

    const double m1 = expectation(meter, xi);
    const double m2 = real_expectation((meter.matrix() * meter.matrix()).eval(), xi);
    const double a1 = expectation(a, psi);
    const double a2 = real_expectation((a.matrix() * a.matrix()).eval(), psi);
    const double expected = m2 - 2.0 * a1 * m1 + a2;
    CHECK(std::pow(noise(m, a, psi), 2) == doctest::Approx(expected).epsilon(1e-12));

    // and nothing is disturbed
    const HermitianOperator b = random_hermitian(2, rng);
    CHECK(disturbance(m, b, psi) <= 1e-12);
}

TEST_CASE("disturbance accepts an operator already on the composite") {
    Rng rng(33);
    const MeasurementModel m = random_model(2, 2, rng);
    const HermitianOperator b = random_hermitian(2, rng);
    const QuantumState psi = random_pure_state(2, rng);
    const HermitianOperator lifted = tensor(b, identity_operator(2));
    CHECK(disturbance(m, b, psi) == disturbance(m, lifted, psi));

    CHECK_THROWS_AS(disturbance(m, random_hermitian(3, rng), psi), ContractError);
    CHECK_THROWS_AS(noise(m, random_hermitian(3, rng), psi), ContractError);
    CHECK_THROWS_AS(noise(m, b, random_pure_state(3, rng)), ContractError);
}

TEST_CASE("projective S_z model breaks Heisenberg but satisfies the universal relation") {
    const MeasurementModel m = projective_sz_model();
    const HermitianOperator sz = spin_component(Axis::Z);
    const HermitianOperator sx = spin_component(Axis::X);
    const QuantumState psi = plus_y_state();

    const RelationReport heis = check_heisenberg(m, sz, sx, psi);
    CHECK_FALSE(heis.holds);
    CHECK(heis.lhs == 0.0);
    CHECK(heis.rhs == doctest::Approx(0.25).epsilon(1e-12));

    const RelationReport uup = check_uup(m, sz, sx, psi);
    CHECK(uup.holds);
    CHECK(uup.lhs == doctest::Approx(0.5 * std::sqrt(0.5)).epsilon(1e-12));
    CHECK(uup.components.at("epsilon") == 0.0);
    CHECK(uup.components.at("eta") == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(uup.components.at("sigma_a") == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(uup.components.at("sigma_b") == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(uup.components.at("half_commutator") == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("universal relation holds across seeded random cases") {
    const RandomCaseDims dims;
    for (std::uint64_t index = 0; index < 300; ++index) {
        const UupCase c = random_uup_case(dims, 1234, index);
        const RelationReport r = check_uup(c.model, c.a, c.b, c.psi);
        CAPTURE(index);
        REQUIRE(r.holds);
        REQUIRE(r.slack >= -1e-9);
    }
}

TEST_CASE("universal relation also holds for mixed object states") {
    Rng rng(55);
    for (int i = 0; i < 40; ++i) {
        const MeasurementModel m = random_model(2, 3, rng);
        const HermitianOperator a = random_hermitian(2, rng);
        const HermitianOperator b = random_hermitian(2, rng);
        const QuantumState rho = random_density(2, rng);
        const RelationReport r = check_uup(m, a, b, rho);
        CAPTURE(i);
        REQUIRE(r.holds);
    }
}

TEST_CASE("robertson holds for pure and mixed states") {
    Rng rng(66);
    for (int i = 0; i < 1000; ++i) {
        const Index d = 2 + static_cast<Index>(rng.next_u64() % 3);
        const HermitianOperator a = random_hermitian(d, rng);
        const HermitianOperator b = random_hermitian(d, rng);
        const QuantumState s = (i % 4 == 0) ? random_density(d, rng) : random_pure_state(d, rng);
        const RelationReport r = check_robertson(a, b, s);
        CAPTURE(i);
        REQUIRE(r.holds);
        REQUIRE(r.slack >= -1e-9);
    }
}

TEST_CASE("nondisturbing noise floor") {
    const NoiseLowerBound floor =
        nondisturbing_bound(spin_component(Axis::Z), spin_component(Axis::X), plus_y_state());
    // |<[S_z, S_x]>| = |<S_y>| = 1/2 at the +y eigenstate, sigma(S_x) = 1/2.
    CHECK_FALSE(floor.is_unbounded());
    CHECK(floor.value() == doctest::Approx(0.5).epsilon(1e-12));

    // On a B eigenstate, sigma(B) = 0 but the commutator mean vanishes with
    // it, so the floor degenerates to zero instead of diverging.
    const NoiseLowerBound degenerate =
        nondisturbing_bound(spin_component(Axis::X), spin_component(Axis::Z), basis_state(2, 0));
    CHECK_FALSE(degenerate.is_unbounded());
    CHECK(degenerate.value() == 0.0);
}

TEST_CASE("random model generation is seeded and validated") {
    const MeasurementModel a = random_model(2, 3, 99);
    const MeasurementModel b = random_model(2, 3, 99);
    CHECK((a.interaction().matrix() - b.interaction().matrix()).norm() == 0.0);
    CHECK((a.meter().matrix() - b.meter().matrix()).norm() == 0.0);
    CHECK((a.apparatus_state().state_vector() - b.apparatus_state().state_vector()).norm() == 0.0);
    CHECK(a.object_dim() == 2);
    CHECK(a.apparatus_dim() == 3);
    CHECK(a.composite_dim() == 6);

    const MeasurementModel c = random_model(2, 3, 100);
    CHECK((a.interaction().matrix() - c.interaction().matrix()).norm() > 1e-3);

    Rng rng(1);
    CHECK_THROWS_AS(random_model(1, 2, rng), ContractError);
    CHECK_THROWS_AS(random_model(2, 1, rng), ContractError);
}

TEST_CASE("seeded suite cases are reproducible and validated") {
    const RandomCaseDims dims;
    const UupCase x = random_uup_case(dims, 7, 11);
    const UupCase y = random_uup_case(dims, 7, 11);
    CHECK((x.model.interaction().matrix() - y.model.interaction().matrix()).norm() == 0.0);
    CHECK((x.a.matrix() - y.a.matrix()).norm() == 0.0);
    CHECK((x.b.matrix() - y.b.matrix()).norm() == 0.0);
    CHECK((x.psi.state_vector() - y.psi.state_vector()).norm() == 0.0);

    const UupCase z = random_uup_case(dims, 7, 12);
    CHECK((x.a.matrix() - z.a.matrix()).norm() > 1e-6);

    RandomCaseDims bad;
    bad.object_min = 3;
    bad.object_max = 2;
    CHECK_THROWS_AS(random_uup_case(bad, 7, 0), ContractError);
    RandomCaseDims tiny;
    tiny.apparatus_min = 1;
    tiny.apparatus_max = 1;
    CHECK_THROWS_AS(random_uup_case(tiny, 7, 0), ContractError);
}
