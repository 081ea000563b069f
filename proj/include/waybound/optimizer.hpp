#ifndef WAYBOUND_OPTIMIZER_HPP
#define WAYBOUND_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "waybound/gates.hpp"
#include "waybound/measurement.hpp"
#include "waybound/qcore.hpp"
#include "waybound/random.hpp"

namespace waybound {

inline constexpr double kClusterGapTol = 1e-8;          // on the [-1,1]-normalized spectrum
inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kArmijoConstant = 1e-4;
inline constexpr double kViolationMargin = 1e-6;        // margin below rhs for exhibits

struct CommutantBlock {
    double eigenvalue;  // cluster representative
    Matrix basis;       // dim x block_dim, orthonormal columns
    Index dim;
};

/// Parametrization of every unitary commuting with a charge: block-diagonal
/// in the charge eigenbasis, one U(dim) factor per eigenvalue cluster.
/// parameter_count = sum of block dims squared.
struct CommutantParametrization {
    HermitianOperator charge;
    std::vector<CommutantBlock> blocks;
    Index parameter_count;
};

/// Eigendecompose the charge and cluster its eigenvalues with gap tolerance
/// kClusterGapTol after normalizing the spectral range to [-1, 1]. A spectral
/// width below round-off collapses to a single unconstrained block.
CommutantParametrization commutant_basis(const HermitianOperator& charge);

/// Assemble exp(i H_b) per block from packed real parameters (block
/// diagonal entries first, then row-major upper-triangle re/im pairs) and
/// rotate back to the original basis. Commutes with the charge by
/// construction.
UnitaryOperator build_unitary(const CommutantParametrization& p, std::span<const double> params);

/// Inverse of build_unitary modulo the 2 pi branch: principal logs of the
/// block components, packed in build_unitary's parameter order.
std::vector<double> block_log_parameters(const CommutantParametrization& p,
                                         const UnitaryOperator& u);

/// Haar-random element of the commutant: independent Haar blocks.
UnitaryOperator random_commutant_unitary(const CommutantParametrization& p, Rng& rng);

struct OptimizerConfig {
    int starts = 16;
    int max_iters = 2000;
    double grad_tol = 1e-8;
    std::uint64_t seed = 0;
    bool optimize_ancilla = false;
};

struct OptimizationResult {
    UnitaryOperator best_unitary;
    double best_value = 0.0;
    int starts = 0;
    long long iterations_total = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    QuantumState ancilla_state; // the state used, or found when optimized
};

/// Central-difference gradient with the given step.
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double step);

/// Minimize the Hadamard error probability over implementations commuting
/// with S_x + L_x (or a caller-supplied charge), multi-start gradient descent
/// with backtracking line search. Deterministic per config+seed; restarts can
/// only improve the result. With optimize_ancilla the unitary descent
/// alternates with pure-state descent on the ancilla.
OptimizationResult minimize_gate_error(const AncillaSpec& ancilla, const OptimizerConfig& config);
OptimizationResult minimize_gate_error(const AncillaSpec& ancilla, const HermitianOperator& charge,
                                       const OptimizerConfig& config);

struct ViolationExhibit {
    MeasurementModel model;
    HermitianOperator a;
    HermitianOperator b;
    QuantumState psi;
    RelationReport heisenberg; // fails: lhs < rhs - margin
    RelationReport uup;        // still holds
};

/// Random search for Heisenberg product-relation failures. Every returned
/// exhibit carries its (holding) universal-relation report. An empty list is
/// a legitimate outcome for a short search.
std::vector<ViolationExhibit> violation_search(Index object_dim, Index apparatus_dim, int trials,
                                               std::uint64_t seed);

/// The canonical projective S_z exhibit: eps(S_z) = 0, eta(S_x) = 1/sqrt(2),
/// rhs = 1/4 on the +y input.
ViolationExhibit projective_sz_exhibit();

} // namespace waybound

#endif
