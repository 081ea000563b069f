#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "waybound/conservation.hpp"
#include "waybound/errors.hpp"
#include "waybound/measurement.hpp"
#include "waybound/qcore.hpp"
#include "waybound/random.hpp"

using namespace waybound;

namespace {

QuantumState plus_y_state() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
    return QuantumState::pure(v);
}

QuantumState plus_x_state() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return QuantumState::pure(v);
}

UnitaryOperator swap_gate() {
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 2) = 1.0;
    u(2, 1) = 1.0;
    u(3, 3) = 1.0;
    return UnitaryOperator(std::move(u));
}

} // namespace

TEST_CASE("total charge assembles the additive operator") {
    const ConservedCharge c{spin_component(Axis::Z), spin_component(Axis::Z)};
    const Matrix total = c.total().matrix();
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    expected(3, 3) = -1.0;
    CHECK((total - expected).norm() == 0.0);
}

TEST_CASE("swap interaction conserves any symmetric charge") {
    const ConservedCharge c{spin_component(Axis::Z), spin_component(Axis::Z)};
    const MeasurementModel swap_model(2, basis_state(2, 0), swap_gate(), spin_component(Axis::Z));
    CHECK(check_conservation(swap_model, c) <= 1e-13);
    CHECK(check_yanase(swap_model, c) == 0.0);

    // a local rotation does not conserve the total spin-z charge
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    const Matrix lifted = Eigen::kroneckerProduct(h, Matrix::Identity(2, 2)).eval();
    const MeasurementModel rotated(2, basis_state(2, 0), UnitaryOperator(lifted),
                                   spin_component(Axis::Z));
    CHECK(check_conservation(rotated, c) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("charge and model dimensions must agree") {
    const ConservedCharge c{spin_component(Axis::Z), identity_operator(3)};
    const MeasurementModel m(2, basis_state(2, 0), UnitaryOperator{Matrix::Identity(4, 4)},
                             spin_component(Axis::Z));
    CHECK_THROWS_AS(check_conservation(m, c), ContractError);
    CHECK_THROWS_AS(check_yanase(m, c), ContractError);
}

TEST_CASE("conservation-induced noise floor: frozen value") {
    // A = S_z, L1 = S_x, psi the +y eigenstate, sigma(L2) = 0:
    // |<[S_z, S_x]>|^2 / (4 sigma(S_x)^2) = (1/2)^2 / (4 * 1/4) = 1/4.
    const ConservedCharge c{spin_component(Axis::X), HermitianOperator(Matrix::Zero(2, 2))};
    const NoiseLowerBound bound =
        way_bound(spin_component(Axis::Z), c, plus_y_state(), basis_state(2, 0));
    CHECK_FALSE(bound.is_unbounded());
    CHECK(bound.value() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("larger apparatus fluctuation loosens the floor") {
    // L2 = diag(cap, -cap) on the apparatus with xi = |+x>: sigma(L2)^2 = cap^2,
    // so the floor becomes 1/4 / (1 + 4 cap^2).
    const HermitianOperator a = spin_component(Axis::Z);
    const QuantumState psi = plus_y_state();
    const QuantumState xi = plus_x_state();
    double previous = 1.0;
    for (const double cap : {0.0, 1.0, std::sqrt(10.0)}) {
        Matrix l2 = Matrix::Zero(2, 2);
        l2(0, 0) = cap;
        l2(1, 1) = -cap;
        const ConservedCharge c{spin_component(Axis::X), HermitianOperator(l2)};
        const NoiseLowerBound bound = way_bound(a, c, psi, xi);
        const double expected = 0.25 / (1.0 + 4.0 * cap * cap);
        CHECK(bound.value() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(bound.value() < previous);
        previous = bound.value();
    }
}

TEST_CASE("noise floor is invariant under charge shifts") {
    Rng rng(211);
    const HermitianOperator a = random_hermitian(3, rng);
    const HermitianOperator l1 = random_hermitian(3, rng);
    const HermitianOperator l2 = random_hermitian(2, rng);
    const QuantumState psi = random_pure_state(3, rng);
    const QuantumState xi = random_pure_state(2, rng);

    const ConservedCharge c{l1, l2};
    const HermitianOperator shifted(l1.matrix() + 3.0 * Matrix::Identity(3, 3));
    const ConservedCharge c_shifted{shifted, l2};
    CHECK(way_bound(a, c, psi, xi).value() ==
          doctest::Approx(way_bound(a, c_shifted, psi, xi).value()).epsilon(1e-10));
}

TEST_CASE("floor collapses to zero on charge eigenstates") {
    // An eigenstate of L1 kills both the commutator mean (so the numerator)
    // and sigma(L1); a zero L2 then makes the whole ratio 0/0, which the
    // degenerate branch resolves to a zero floor rather than an unbounded one.
    const ConservedCharge c{spin_component(Axis::X), HermitianOperator(Matrix::Zero(2, 2))};
    const NoiseLowerBound bound =
        way_bound(spin_component(Axis::Z), c, plus_x_state(), basis_state(2, 0));
    CHECK_FALSE(bound.is_unbounded());
    CHECK(bound.value() == 0.0);
}

TEST_CASE("way bound dimension contracts") {
    const ConservedCharge c{spin_component(Axis::X), identity_operator(3)};
    CHECK_THROWS_AS(way_bound(spin_component(Axis::Z), c, plus_y_state(), basis_state(2, 0)),
                    ContractError);
    CHECK_THROWS_AS(way_bound(identity_operator(3), c, plus_y_state(), basis_state(3, 0)),
                    ContractError);
}

TEST_CASE("verify_way over the seeded conserving suite") {
    const RandomCaseDims dims;
    for (std::uint64_t index = 0; index < 50; ++index) {
        const ConservingCase c = random_conserving_case(dims, 4242, index);
        CAPTURE(index);
        REQUIRE(check_conservation(c.model, c.charge) <= 1e-9);
        REQUIRE(check_yanase(c.model, c.charge) <= 1e-9);

        const RelationReport r = verify_way(c.model, c.a, c.charge, c.psi);
        REQUIRE(r.holds);
        REQUIRE(r.slack >= -1e-9);
        REQUIRE(r.components.at("epsilon") >= 0.0);
        REQUIRE(r.components.at("conservation_norm") <= 1e-9);
        REQUIRE(r.components.at("yanase_norm") <= 1e-9);
        REQUIRE(r.lhs == r.components.at("epsilon") * r.components.at("epsilon"));

        // a conserving interaction cannot disturb the total charge
        REQUIRE(disturbance(c.model, c.charge.total(), c.psi) <= 1e-10);
    }
}

TEST_CASE("verify_way rejects non-conserving interactions with a diagnostic") {
    const ConservedCharge c{spin_component(Axis::Z), spin_component(Axis::Z)};
    Matrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    const Matrix lifted = Eigen::kroneckerProduct(h, Matrix::Identity(2, 2)).eval();
    const MeasurementModel rotated(2, basis_state(2, 0), UnitaryOperator(lifted),
                                   spin_component(Axis::Z));
    try {
        verify_way(rotated, spin_component(Axis::X), c, plus_y_state());
        FAIL("expected ContractError");
    } catch (const ContractError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("conserve") != std::string::npos);
    }
}

TEST_CASE("verify_way rejects incompatible meters with a diagnostic") {
    // SWAP conserves S_z + S_z, but an S_x meter does not commute with L2.
    const ConservedCharge c{spin_component(Axis::Z), spin_component(Axis::Z)};
    const MeasurementModel m(2, basis_state(2, 0), swap_gate(), spin_component(Axis::X));
    try {
        verify_way(m, spin_component(Axis::X), c, plus_y_state());
        FAIL("expected ContractError");
    } catch (const ContractError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("meter") != std::string::npos);
        CHECK(msg.find("compatible") != std::string::npos);
    }
}

TEST_CASE("seeded conserving cases are reproducible") {
    const RandomCaseDims dims;
    const ConservingCase x = random_conserving_case(dims, 9, 4);
    const ConservingCase y = random_conserving_case(dims, 9, 4);
    CHECK((x.model.interaction().matrix() - y.model.interaction().matrix()).norm() == 0.0);
    CHECK((x.charge.l1.matrix() - y.charge.l1.matrix()).norm() == 0.0);
    CHECK((x.charge.l2.matrix() - y.charge.l2.matrix()).norm() == 0.0);
    CHECK((x.a.matrix() - y.a.matrix()).norm() == 0.0);
    CHECK((x.psi.state_vector() - y.psi.state_vector()).norm() == 0.0);

    const ConservingCase z = random_conserving_case(dims, 9, 5);
    CHECK((x.a.matrix() - z.a.matrix()).norm() > 1e-6);

    RandomCaseDims bad;
    bad.apparatus_max = 1;
    CHECK_THROWS_AS(random_conserving_case(bad, 9, 0), ContractError);
}
