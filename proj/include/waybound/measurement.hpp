#ifndef WAYBOUND_MEASUREMENT_HPP
#define WAYBOUND_MEASUREMENT_HPP

#include <cstdint>
#include <map>
#include <string>

#include "waybound/qcore.hpp"
#include "waybound/random.hpp"

namespace waybound {

/// Indirect measurement model: apparatus prepared in `apparatus_state`, the
/// composite evolves under `interaction`, and `meter` is read out on the
/// apparatus afterwards.
class MeasurementModel {
  public:
    MeasurementModel(Index object_dim, QuantumState apparatus_state, UnitaryOperator interaction,
                     HermitianOperator meter);

    Index object_dim() const { return object_dim_; }
    Index apparatus_dim() const { return meter_.dim(); }
    Index composite_dim() const { return interaction_.dim(); }
    const QuantumState& apparatus_state() const { return apparatus_state_; }
    const UnitaryOperator& interaction() const { return interaction_; }
    const HermitianOperator& meter() const { return meter_; }

  private:
    Index object_dim_;
    QuantumState apparatus_state_;
    UnitaryOperator interaction_;
    HermitianOperator meter_;
};

/// Outcome of one inequality check. `holds` is slack >= -kRelationSlackTol;
/// `components` carries the named ingredients (epsilon, eta, sigma_a, ...).
struct RelationReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = false;
    std::map<std::string, double> components;
};

RelationReport make_relation_report(double lhs, double rhs,
                                    std::map<std::string, double> components);

/// A noise lower bound that can be unbounded (zero denominator against a
/// nonzero numerator).
class NoiseLowerBound {
  public:
    static NoiseLowerBound finite(double value);
    static NoiseLowerBound unbounded();

    bool is_unbounded() const { return unbounded_; }
    double value() const;

  private:
    double value_ = 0.0;
    bool unbounded_ = false;
};

/// numerator/denominator with the degenerate branches: a zero denominator is
/// unbounded when the numerator exceeds the slack tolerance and 0 otherwise.
NoiseLowerBound ratio_bound(double numerator, double denominator);

/// Root-mean-square noise eps(A) of measuring A with model m on input psi:
/// sqrt(<N^2>) over psi (x) xi with noise operator N = U'(1 (x) M)U - A (x) 1.
double noise(const MeasurementModel& m, const HermitianOperator& a, const QuantumState& psi);

/// Root-mean-square disturbance eta(B): sqrt(<D^2>) with
/// D = U'(B (x) 1)U - B (x) 1. B may live on the object space or on the full
/// composite (conserved charges); composite B is used as-is.
double disturbance(const MeasurementModel& m, const HermitianOperator& b, const QuantumState& psi);

/// eps(A) eta(B) >= |<[A,B]>|/2. Not universally valid; see check_uup.
RelationReport check_heisenberg(const MeasurementModel& m, const HermitianOperator& a,
                                const HermitianOperator& b, const QuantumState& psi);

/// Universal uncertainty principle:
/// eps(A) eta(B) + sigma(A) eta(B) + eps(A) sigma(B) >= |<[A,B]>|/2,
/// deviations taken in the pre-measurement object state.
RelationReport check_uup(const MeasurementModel& m, const HermitianOperator& a,
                         const HermitianOperator& b, const QuantumState& psi);

/// sigma(A) sigma(B) >= |<[A,B]>|/2.
RelationReport check_robertson(const HermitianOperator& a, const HermitianOperator& b,
                               const QuantumState& psi);

/// Noise floor for apparatuses that do not disturb B at all:
/// eps(A) >= |<[A,B]>| / (2 sigma(B)).
NoiseLowerBound nondisturbing_bound(const HermitianOperator& a, const HermitianOperator& b,
                                    const QuantumState& psi);

/// Haar-random interaction, random pure apparatus state, random Hermitian
/// meter. Deterministic per seed.
MeasurementModel random_model(Index object_dim, Index apparatus_dim, std::uint64_t seed);
MeasurementModel random_model(Index object_dim, Index apparatus_dim, Rng& rng);

/// The stored projective S_z model: CNOT-style copy interaction onto a |0>
/// apparatus qubit read through an S_z meter. Measures S_z exactly while
/// disturbing S_x, which breaks the Heisenberg product relation.
MeasurementModel projective_sz_model();

struct RandomCaseDims {
    Index object_min = 2;
    Index object_max = 3;
    Index apparatus_min = 2;
    Index apparatus_max = 4;
};

struct UupCase {
    MeasurementModel model;
    HermitianOperator a;
    HermitianOperator b;
    QuantumState psi;
};

/// Case `index` of the seeded relation suite: dims drawn from `dims`, then
/// model, A, B and the object state from the forked substream.
UupCase random_uup_case(const RandomCaseDims& dims, std::uint64_t seed, std::uint64_t index);

} // namespace waybound

#endif
