#ifndef WAYBOUND_GATES_HPP
#define WAYBOUND_GATES_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "waybound/qcore.hpp"

namespace waybound {

// Hadamard realizations under x-component angular-momentum conservation.
// The ancilla is either an n-spin register with L_x = sum_j S_x^(j) or a
// truncated bosonic mode with L_x = N (right-circular beam convention).

struct SpinAncilla {
    int count = 1;             // n = 0 means "no ancilla" (one trivial level)
    QuantumState state;        // dim 2^n
    bool separable = false;    // product-state preparation, picks the class bound
};

struct BosonAncilla {
    int cutoff = 0;            // Fock levels 0..cutoff
    QuantumState field_state;  // dim cutoff + 1
};

using AncillaSpec = std::variant<SpinAncilla, BosonAncilla>;

void validate_ancilla(const AncillaSpec& spec);
Index ancilla_dimension(const AncillaSpec& spec);
const QuantumState& ancilla_state(const AncillaSpec& spec);
AncillaSpec with_ancilla_state(AncillaSpec spec, QuantumState state);

/// Conserved ancilla component L_x for the given spec.
HermitianOperator ancilla_conserved_component(const AncillaSpec& spec);

/// Total conserved charge S_x (x) 1 + 1 (x) L_x on qubit (x) ancilla.
HermitianOperator gate_conserved_charge(const AncillaSpec& spec);

/// The Hadamard gate; H^2 = 1 and H'S_xH = S_z.
UnitaryOperator hadamard();

/// (|0> + i|1>)/sqrt(2), the +y spin eigenstate. This input maximizes the
/// commutator term, so all bound comparisons default to it.
QuantumState default_input_state();

/// |0>^(x)n. Every site is S_x-unbiased, so sigma(L_x)^2 = n/4 — the largest
/// variance any product preparation reaches. n = 0 gives the trivial level.
QuantumState product_spin_state(int n);

/// (|+x...+x> + |-x...-x>)/sqrt(2), an equal superposition of the extreme
/// L_x eigenstates: sigma(L_x)^2 = n^2/4, the maximum over all states. For
/// n = 1 this coincides with |0>.
QuantumState max_variance_spin_state(int n);

/// Candidate Hadamard realization U on qubit (x) ancilla. Construction
/// rejects implementations that break [U, S_x + L_x] = 0 (Frobenius norm
/// above kUnitaryFrobeniusTol).
class GateScenario {
  public:
    GateScenario(AncillaSpec ancilla, UnitaryOperator implementation);

    const UnitaryOperator& target() const { return target_; }
    const AncillaSpec& ancilla() const { return ancilla_; }
    const UnitaryOperator& implementation() const { return implementation_; }

  private:
    UnitaryOperator target_;
    AncillaSpec ancilla_;
    UnitaryOperator implementation_;
};

/// Gate error probability P_e = eps(S_z)^2 for the process "apply U, then
/// read S_x of the qubit": the mean square of U'(S_x (x) 1)U - S_z (x) 1 in
/// psi (x) ancilla state. This overload skips the conservation check and is
/// the optimizer's raw objective.
double gate_error_probability(const UnitaryOperator& implementation, const AncillaSpec& ancilla,
                              const QuantumState& psi);
double gate_error_probability(const GateScenario& scenario, const QuantumState& psi);

/// P_e >= 1/(4 + 16 sigma(L_x)^2) for any conserving implementation.
double bound_general(double sigma_lx);

/// Coherent ancilla field: P_e >= 1/(4 + 16 <N>).
double bound_coherent(double mean_n);

/// n-spin ancilla, arbitrary (possibly entangled) preparation:
/// P_e >= 1/(4 + 4 n^2).
double bound_entangled_spins(int n);

/// n-spin ancilla restricted to separable preparations: P_e >= 1/(4 + 4 n).
double bound_separable_spins(int n);

/// Cutoff rule keeping the truncated tail mass below kCoherentTailTol for
/// moderate amplitudes.
int default_fock_cutoff(Complex alpha);

inline constexpr double kCoherentTailTol = 1e-10;

/// Truncated coherent state |alpha> on Fock levels 0..cutoff, renormalized.
/// A truncation deficit above kCoherentTailTol raises ContractError.
QuantumState coherent_state(Complex alpha, int cutoff);
QuantumState coherent_state(Complex alpha);

/// N = diag(0, 1, ..., cutoff).
HermitianOperator number_operator(int cutoff);

/// L_x = sum_j S_x^(j) on n spin-1/2 sites (dim 2^n).
HermitianOperator spin_ensemble_lx(int n);

/// Largest sigma(L_x)^2 reachable by product states: n/4.
double separable_variance_cap(int n);

struct BoundTableRow {
    std::string label;
    double parameter = 0.0;
    double bound = 0.0;
    std::optional<double> achieved;
    std::optional<double> slack;
};

/// CSV with columns label,parameter,bound,achieved,slack at full double
/// precision; achieved/slack cells stay empty when absent.
std::string bound_table_csv(const std::vector<BoundTableRow>& rows);

} // namespace waybound

#endif
