#ifndef WAYBOUND_CONSERVATION_HPP
#define WAYBOUND_CONSERVATION_HPP

#include <cstdint>

#include "waybound/measurement.hpp"
#include "waybound/qcore.hpp"

namespace waybound {

inline constexpr double kConditionNormTol = 1e-9; // conservation / meter-compatibility gate

/// Additive conserved quantity L1 (x) 1 + 1 (x) L2 split across object and
/// apparatus.
struct ConservedCharge {
    HermitianOperator l1; // object part
    HermitianOperator l2; // apparatus part

    HermitianOperator total() const;
};

/// ||[U, L1 (x) 1 + 1 (x) L2]||_F for the model's interaction. Zero (up to
/// kConditionNormTol) means the interaction conserves the charge.
double check_conservation(const MeasurementModel& m, const ConservedCharge& c);

/// ||[M, L2]||_F: how compatible the meter is with the apparatus part of the
/// charge. The conservation-induced noise bound needs this to vanish.
double check_yanase(const MeasurementModel& m, const ConservedCharge& c);

/// Conservation-induced noise floor
///   eps(A)^2 >= |<[A, L1]>_psi|^2 / (4 sigma_psi(L1)^2 + 4 sigma_xi(L2)^2),
/// returned as a bound on eps(A)^2. Enlarging the apparatus fluctuation
/// sigma(L2) is the only way to loosen it.
NoiseLowerBound way_bound(const HermitianOperator& a, const ConservedCharge& c,
                          const QuantumState& psi, const QuantumState& xi);

/// Check eps(A)^2 against the conservation-induced floor for a model that
/// satisfies both preconditions (ContractError otherwise, with the offending
/// norm in the message). lhs = eps^2, rhs = the bound.
RelationReport verify_way(const MeasurementModel& m, const HermitianOperator& a,
                          const ConservedCharge& c, const QuantumState& psi);

struct ConservingCase {
    MeasurementModel model;
    ConservedCharge charge;
    HermitianOperator a;
    QuantumState psi;
};

/// Case `index` of the seeded conservation suite: random charge parts, an
/// interaction drawn from the commutant of the total charge, and a meter
/// diagonal in the L2 eigenbasis, so both preconditions hold by construction.
ConservingCase random_conserving_case(const RandomCaseDims& dims, std::uint64_t seed,
                                      std::uint64_t index);

} // namespace waybound

#endif
