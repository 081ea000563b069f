#include "waybound/gates.hpp"

#include <cmath>
#include <cstdio>

#include <unsupported/Eigen/KroneckerProduct>

namespace waybound {

namespace {

const SpinAncilla* as_spins(const AncillaSpec& spec) {
    return std::get_if<SpinAncilla>(&spec);
}

Index pow2(int n) {
    return Index(1) << n;
}

} // namespace

void validate_ancilla(const AncillaSpec& spec) {
    if (const auto* spins = as_spins(spec)) {
        if (spins->count < 0) {
            throw ContractError("SpinAncilla: negative spin count");
        }
        if (spins->count > 12) {
            throw ResourceError("SpinAncilla: 2^" + std::to_string(spins->count) +
                                " levels exceed the dimension cap");
        }
        if (spins->state.dim() != pow2(spins->count)) {
            throw ContractError("SpinAncilla: state dim " + std::to_string(spins->state.dim()) +
                                " is not 2^" + std::to_string(spins->count));
        }
    } else {
        const auto& boson = std::get<BosonAncilla>(spec);
        if (boson.cutoff < 0) {
            throw ContractError("BosonAncilla: negative cutoff");
        }
        if (boson.field_state.dim() != boson.cutoff + 1) {
            throw ContractError("BosonAncilla: state dim " +
                                std::to_string(boson.field_state.dim()) + " is not cutoff+1 = " +
                                std::to_string(boson.cutoff + 1));
        }
    }
}

Index ancilla_dimension(const AncillaSpec& spec) {
    if (const auto* spins = as_spins(spec)) {
        return pow2(spins->count);
    }
    return std::get<BosonAncilla>(spec).cutoff + 1;
}

const QuantumState& ancilla_state(const AncillaSpec& spec) {
    if (const auto* spins = as_spins(spec)) {
        return spins->state;
    }
    return std::get<BosonAncilla>(spec).field_state;
}

AncillaSpec with_ancilla_state(AncillaSpec spec, QuantumState state) {
    if (auto* spins = std::get_if<SpinAncilla>(&spec)) {
        spins->state = std::move(state);
    } else {
        std::get<BosonAncilla>(spec).field_state = std::move(state);
    }
    validate_ancilla(spec);
    return spec;
}

HermitianOperator ancilla_conserved_component(const AncillaSpec& spec) {
    validate_ancilla(spec);
    if (const auto* spins = as_spins(spec)) {
        if (spins->count == 0) {
            return HermitianOperator(Matrix::Zero(1, 1));
        }
        return spin_ensemble_lx(spins->count);
    }
    return number_operator(std::get<BosonAncilla>(spec).cutoff);
}

HermitianOperator gate_conserved_charge(const AncillaSpec& spec) {
    const HermitianOperator lx = ancilla_conserved_component(spec);
    const Index d = lx.dim();
    return HermitianOperator(
        Eigen::kroneckerProduct(spin_component(Axis::X).matrix(), Matrix::Identity(d, d)).eval() +
        Eigen::kroneckerProduct(Matrix::Identity(2, 2), lx.matrix()).eval());
}

UnitaryOperator hadamard() {
    Matrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    return UnitaryOperator(std::move(h));
}

QuantumState default_input_state() {
    Vector v(2);
    const double r = 1.0 / std::sqrt(2.0);
    v << Complex(r, 0.0), Complex(0.0, r);
    return QuantumState::pure(std::move(v));
}

namespace {

Vector repeated_tensor(const Vector& site, int n) {
    Vector out = Vector::Ones(1);
    for (int k = 0; k < n; ++k) {
        out = Eigen::kroneckerProduct(out, site).eval();
    }
    return out;
}

} // namespace

QuantumState product_spin_state(int n) {
    if (n < 0) {
        throw ContractError("product_spin_state: negative spin count");
    }
    if (n > 12) {
        throw ResourceError("product_spin_state: 2^" + std::to_string(n) +
                            " levels exceed the dimension cap");
    }
    Vector zero(2);
    zero << Complex(1.0, 0.0), Complex(0.0, 0.0);
    return QuantumState::pure(repeated_tensor(zero, n));
}

QuantumState max_variance_spin_state(int n) {
    if (n < 0) {
        throw ContractError("max_variance_spin_state: negative spin count");
    }
    if (n > 12) {
        throw ResourceError("max_variance_spin_state: 2^" + std::to_string(n) +
                            " levels exceed the dimension cap");
    }
    if (n == 0) {
        return QuantumState::pure(Vector::Ones(1));
    }
    const double r = 1.0 / std::sqrt(2.0);
    Vector plus(2);
    plus << r, r;
    Vector minus(2);
    minus << r, -r;
    // The two branches are orthogonal (site overlap 0), so the sum has norm
    // sqrt(2) exactly.
    Vector v = (repeated_tensor(plus, n) + repeated_tensor(minus, n)) / std::sqrt(2.0);
    return QuantumState::pure(std::move(v));
}

GateScenario::GateScenario(AncillaSpec ancilla, UnitaryOperator implementation)
    : target_(hadamard()), ancilla_(std::move(ancilla)), implementation_(std::move(implementation)) {
    validate_ancilla(ancilla_);
    const Index composite = 2 * ancilla_dimension(ancilla_);
    if (implementation_.dim() != composite) {
        throw ContractError("GateScenario: implementation dim " +
                            std::to_string(implementation_.dim()) + " vs qubit (x) ancilla dim " +
                            std::to_string(composite));
    }
    const Matrix charge = gate_conserved_charge(ancilla_).matrix();
    const Matrix& u = implementation_.matrix();
    const double defect = (u * charge - charge * u).norm();
    if (defect > kUnitaryFrobeniusTol) {
        throw ContractError("GateScenario: implementation breaks x angular-momentum "
                            "conservation, ||[U, S_x + L_x]||_F = " +
                            std::to_string(defect));
    }
}

double gate_error_probability(const UnitaryOperator& implementation, const AncillaSpec& ancilla,
                              const QuantumState& psi) {
    validate_ancilla(ancilla);
    if (psi.dim() != 2) {
        throw ContractError("gate_error_probability: input state must be a qubit");
    }
    const Index d = ancilla_dimension(ancilla);
    if (implementation.dim() != 2 * d) {
        throw ContractError("gate_error_probability: implementation dim " +
                            std::to_string(implementation.dim()) + " vs " + std::to_string(2 * d));
    }
    const Matrix ident = Matrix::Identity(d, d);
    const Matrix probe = Eigen::kroneckerProduct(spin_component(Axis::X).matrix(), ident).eval();
    const Matrix target = Eigen::kroneckerProduct(spin_component(Axis::Z).matrix(), ident).eval();
    const Matrix& u = implementation.matrix();
    const Matrix noise_op = u.adjoint() * probe * u - target;
    const QuantumState joint = tensor(psi, ancilla_state(ancilla));
    const double p_e = real_expectation(noise_op * noise_op, joint);
    if (p_e < -kNegativeVarianceTol) {
        throw NumericalError("gate_error_probability: mean square " + std::to_string(p_e));
    }
    return p_e > 0.0 ? p_e : 0.0;
}

double gate_error_probability(const GateScenario& scenario, const QuantumState& psi) {
    return gate_error_probability(scenario.implementation(), scenario.ancilla(), psi);
}

double bound_general(double sigma_lx) {
    if (sigma_lx < 0.0) {
        throw ContractError("bound_general: negative deviation");
    }
    return 1.0 / (4.0 + 16.0 * sigma_lx * sigma_lx);
}

double bound_coherent(double mean_n) {
    if (mean_n < 0.0) {
        throw ContractError("bound_coherent: negative photon number");
    }
    return 1.0 / (4.0 + 16.0 * mean_n);
}

double bound_entangled_spins(int n) {
    if (n < 1) {
        throw ContractError("bound_entangled_spins: ancilla must have at least one spin");
    }
    return 1.0 / (4.0 + 4.0 * double(n) * double(n));
}

double bound_separable_spins(int n) {
    if (n < 1) {
        throw ContractError("bound_separable_spins: ancilla must have at least one spin");
    }
    return 1.0 / (4.0 + 4.0 * double(n));
}

int default_fock_cutoff(Complex alpha) {
    const double mag = std::abs(alpha);
    return std::max(20, static_cast<int>(std::ceil(mag * mag + 8.0 * mag + 10.0)));
}

QuantumState coherent_state(Complex alpha, int cutoff) {
    if (cutoff < 0) {
        throw ContractError("coherent_state: negative cutoff");
    }
    Vector amplitudes(cutoff + 1);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built iteratively.
    Complex c = std::exp(Complex(-0.5 * std::norm(alpha), 0.0));
    double mass = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) {
            c *= alpha / std::sqrt(double(n));
        }
        amplitudes(n) = c;
        mass += std::norm(c);
    }
    const double deficit = 1.0 - mass;
    if (deficit > kCoherentTailTol) {
        throw ContractError("coherent_state: cutoff " + std::to_string(cutoff) +
                            " leaves tail mass " + std::to_string(deficit) + " for |alpha|^2 = " +
                            std::to_string(std::norm(alpha)));
    }
    return QuantumState::pure(amplitudes / std::sqrt(mass));
}

QuantumState coherent_state(Complex alpha) {
    return coherent_state(alpha, default_fock_cutoff(alpha));
}

HermitianOperator number_operator(int cutoff) {
    if (cutoff < 0) {
        throw ContractError("number_operator: negative cutoff");
    }
    Matrix n = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) {
        n(k, k) = double(k);
    }
    return HermitianOperator(std::move(n));
}

HermitianOperator spin_ensemble_lx(int n) {
    if (n < 1) {
        throw ContractError("spin_ensemble_lx: need at least one spin");
    }
    if (n > 12) {
        throw ResourceError("spin_ensemble_lx: 2^" + std::to_string(n) +
                            " levels exceed the dimension cap");
    }
    const Index dim = pow2(n);
    const Matrix sx = spin_component(Axis::X).matrix();
    Matrix total = Matrix::Zero(dim, dim);
    for (int site = 0; site < n; ++site) {
        const Index left = pow2(site);
        const Index right = pow2(n - 1 - site);
        total += Eigen::kroneckerProduct(
                     Matrix::Identity(left, left),
                     Eigen::kroneckerProduct(sx, Matrix::Identity(right, right)).eval())
                     .eval();
    }
    return HermitianOperator(std::move(total));
}

double separable_variance_cap(int n) {
    if (n < 1) {
        throw ContractError("separable_variance_cap: need at least one spin");
    }
    return double(n) / 4.0;
}

namespace {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string bound_table_csv(const std::vector<BoundTableRow>& rows) {
    std::string out = "label,parameter,bound,achieved,slack\n";
    for (const auto& row : rows) {
        out += row.label;
        out += ',';
        out += format_full(row.parameter);
        out += ',';
        out += format_full(row.bound);
        out += ',';
        if (row.achieved) {
            out += format_full(*row.achieved);
        }
        out += ',';
        if (row.slack) {
            out += format_full(*row.slack);
        }
        out += '\n';
    }
    return out;
}

} // namespace waybound
