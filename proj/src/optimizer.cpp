#include "waybound/optimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "waybound/errors.hpp"

namespace waybound {

namespace {

constexpr double kLineSearchFloor = 1e-14;
constexpr double kAncillaRoundGain = 1e-12; // stop alternating below this improvement
constexpr int kAncillaRounds = 8;

struct DescentOutcome {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

DescentOutcome gradient_descent(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, int max_iters, double grad_tol) {
    DescentOutcome out;
    double fx = f(x);
    for (int iter = 0; iter < max_iters; ++iter) {
        const auto grad = finite_difference_gradient(f, x, kFiniteDifferenceStep);
        double grad_sq = 0.0;
        for (double g : grad) grad_sq += g * g;
        if (std::sqrt(grad_sq) <= grad_tol) {
            out.converged = true;
            break;
        }
        ++out.iterations;
        double t = 1.0;
        bool accepted = false;
        std::vector<double> trial(x.size());
        while (t >= kLineSearchFloor) {
            for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - t * grad[i];
            const double ft = f(trial);
            if (ft <= fx - kArmijoConstant * t * grad_sq) {
                x = trial;
                fx = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break; // flat to round-off along the gradient
    }
    out.x = std::move(x);
    out.value = fx;
    return out;
}

Matrix block_component(const CommutantBlock& block, const Matrix& full) {
    return block.basis.adjoint() * full * block.basis;
}

std::vector<double> random_start(std::size_t count, Rng& rng) {
    std::vector<double> params(count);
    for (auto& value : params) value = (2.0 * rng.uniform() - 1.0) * std::numbers::pi;
    return params;
}

QuantumState raw_to_state(const std::vector<double>& raw) {
    const Index d = static_cast<Index>(raw.size() / 2);
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = Complex(raw[2 * i], raw[2 * i + 1]);
    const double norm = v.norm();
    if (norm < 1e-8) {
        throw NumericalError("ancilla descent collapsed to the zero vector");
    }
    return QuantumState::pure(v / norm);
}

std::vector<double> state_to_raw(const QuantumState& state) {
    const Vector& v = state.state_vector();
    std::vector<double> raw(static_cast<std::size_t>(2 * v.size()));
    for (Index i = 0; i < v.size(); ++i) {
        raw[2 * i] = v(i).real();
        raw[2 * i + 1] = v(i).imag();
    }
    return raw;
}

} // namespace

CommutantParametrization commutant_basis(const HermitianOperator& charge) {
    const auto ed = eigendecompose(charge);
    const Index d = charge.dim();
    const double lo = ed.eigenvalues(0);
    const double hi = ed.eigenvalues(d - 1);
    const double width = hi - lo;
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});

    std::vector<std::pair<Index, Index>> ranges; // [first, last] eigenvalue indices
    if (width <= 1e-12 * scale) {
        ranges.emplace_back(0, d - 1);
    } else {
        Index first = 0;
        for (Index i = 1; i < d; ++i) {
            const double gap = 2.0 * (ed.eigenvalues(i) - ed.eigenvalues(i - 1)) / width;
            if (gap > kClusterGapTol) {
                ranges.emplace_back(first, i - 1);
                first = i;
            }
        }
        ranges.emplace_back(first, d - 1);
    }

    CommutantParametrization p{charge, {}, 0};
    for (const auto& [first, last] : ranges) {
        const Index bdim = last - first + 1;
        CommutantBlock block;
        block.dim = bdim;
        block.basis = ed.eigenvectors.middleCols(first, bdim);
        block.eigenvalue = ed.eigenvalues.segment(first, bdim).mean();
        p.parameter_count += bdim * bdim;
        p.blocks.push_back(std::move(block));
    }
    return p;
}

UnitaryOperator build_unitary(const CommutantParametrization& p, std::span<const double> params) {
    if (static_cast<Index>(params.size()) != p.parameter_count) {
        throw ContractError("build_unitary: expected " + std::to_string(p.parameter_count) +
                            " parameters, got " + std::to_string(params.size()));
    }
    const Index d = p.charge.dim();
    Matrix u = Matrix::Zero(d, d);
    std::size_t offset = 0;
    for (const auto& block : p.blocks) {
        const Index bdim = block.dim;
        Matrix h = Matrix::Zero(bdim, bdim);
        for (Index i = 0; i < bdim; ++i) h(i, i) = params[offset + i];
        std::size_t idx = offset + bdim;
        for (Index i = 0; i < bdim; ++i) {
            for (Index j = i + 1; j < bdim; ++j) {
                const Complex entry(params[idx], params[idx + 1]);
                idx += 2;
                h(i, j) = entry;
                h(j, i) = std::conj(entry);
            }
        }
        offset += static_cast<std::size_t>(bdim * bdim);
        const Matrix block_u = matrix_exp_i(HermitianOperator(std::move(h))).matrix();
        u += block.basis * block_u * block.basis.adjoint();
    }
    return UnitaryOperator(std::move(u));
}

std::vector<double> block_log_parameters(const CommutantParametrization& p,
                                         const UnitaryOperator& u) {
    if (u.dim() != p.charge.dim()) {
        throw ContractError("block_log_parameters: dimension mismatch");
    }
    std::vector<double> params(static_cast<std::size_t>(p.parameter_count));
    std::size_t offset = 0;
    for (const auto& block : p.blocks) {
        const Index bdim = block.dim;
        const Matrix component = block_component(block, u.matrix());
        if ((component.adjoint() * component - Matrix::Identity(bdim, bdim)).norm() > 1e-6) {
            throw ContractError("block_log_parameters: unitary is not in the commutant");
        }
        // Principal log: Schur-triangularize (T is diagonal up to round-off
        // for a unitary) and take arguments of the diagonal.
        Eigen::ComplexSchur<Matrix> schur(component);
        Matrix h = Matrix::Zero(bdim, bdim);
        for (Index i = 0; i < bdim; ++i) h(i, i) = std::arg(schur.matrixT()(i, i));
        h = schur.matrixU() * h * schur.matrixU().adjoint();
        h = ((h + h.adjoint()) / 2.0).eval();

        for (Index i = 0; i < bdim; ++i) params[offset + i] = h(i, i).real();
        std::size_t idx = offset + bdim;
        for (Index i = 0; i < bdim; ++i) {
            for (Index j = i + 1; j < bdim; ++j) {
                params[idx] = h(i, j).real();
                params[idx + 1] = h(i, j).imag();
                idx += 2;
            }
        }
        offset += static_cast<std::size_t>(bdim * bdim);
    }
    return params;
}

UnitaryOperator random_commutant_unitary(const CommutantParametrization& p, Rng& rng) {
    const Index d = p.charge.dim();
    Matrix u = Matrix::Zero(d, d);
    for (const auto& block : p.blocks) {
        const UnitaryOperator block_u = random_unitary(block.dim, rng);
        u += block.basis * block_u.matrix() * block.basis.adjoint();
    }
    return UnitaryOperator(std::move(u));
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double step) {
    if (!(step > 0.0)) {
        throw ContractError("finite_difference_gradient: step must be positive");
    }
    std::vector<double> grad(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + step;
        const double up = f(probe);
        probe[i] = x[i] - step;
        const double down = f(probe);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

OptimizationResult minimize_gate_error(const AncillaSpec& ancilla, const OptimizerConfig& config) {
    return minimize_gate_error(ancilla, gate_conserved_charge(ancilla), config);
}

OptimizationResult minimize_gate_error(const AncillaSpec& ancilla, const HermitianOperator& charge,
                                       const OptimizerConfig& config) {
    validate_ancilla(ancilla);
    if (config.starts < 1) throw ContractError("optimizer needs at least one start");
    if (config.max_iters < 0) throw ContractError("max_iters must be nonnegative");
    if (!(config.grad_tol > 0.0)) throw ContractError("grad_tol must be positive");
    const Index full_dim = 2 * ancilla_dimension(ancilla);
    if (charge.dim() != full_dim) {
        throw ContractError("charge dimension " + std::to_string(charge.dim()) +
                            " does not match gate dimension " + std::to_string(full_dim));
    }
    const QuantumState base_state = ancilla_state(ancilla);
    if (config.optimize_ancilla && !base_state.is_pure()) {
        throw ContractError("ancilla descent requires a pure ancilla state");
    }

    const CommutantParametrization param = commutant_basis(charge);
    const QuantumState input = default_input_state();

    const auto value_of = [&](const std::vector<double>& unitary_params,
                              const QuantumState& state) {
        return gate_error_probability(build_unitary(param, unitary_params),
                                      with_ancilla_state(ancilla, state), input);
    };

    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    QuantumState best_state = base_state;
    bool best_converged = false;
    long long iterations_total = 0;

    Rng root(config.seed);
    for (int start = 0; start < config.starts; ++start) {
        Rng rng = root.fork(static_cast<std::uint64_t>(start));
        std::vector<double> unitary_params =
            random_start(static_cast<std::size_t>(param.parameter_count), rng);
        QuantumState state = base_state;
        double value;
        bool converged;
        if (!config.optimize_ancilla) {
            const auto objective = [&](const std::vector<double>& x) { return value_of(x, state); };
            auto outcome = gradient_descent(objective, std::move(unitary_params), config.max_iters,
                                            config.grad_tol);
            iterations_total += outcome.iterations;
            unitary_params = std::move(outcome.x);
            value = outcome.value;
            converged = outcome.converged;
        } else {
            std::vector<double> raw = state_to_raw(state);
            value = value_of(unitary_params, state);
            converged = false;
            for (int round = 0; round < kAncillaRounds; ++round) {
                const double before = value;
                const auto unitary_objective = [&](const std::vector<double>& x) {
                    return value_of(x, state);
                };
                auto u_outcome = gradient_descent(unitary_objective, std::move(unitary_params),
                                                  config.max_iters, config.grad_tol);
                iterations_total += u_outcome.iterations;
                unitary_params = std::move(u_outcome.x);
                converged = u_outcome.converged;

                const auto state_objective = [&](const std::vector<double>& x) {
                    return value_of(unitary_params, raw_to_state(x));
                };
                auto s_outcome = gradient_descent(state_objective, std::move(raw), config.max_iters,
                                                  config.grad_tol);
                iterations_total += s_outcome.iterations;
                raw = std::move(s_outcome.x);
                state = raw_to_state(raw);
                value = s_outcome.value;
                if (before - value < kAncillaRoundGain) break;
            }
        }
        if (value < best_value) {
            best_value = value;
            best_params = unitary_params;
            best_state = state;
            best_converged = converged;
        }
    }
    return OptimizationResult{build_unitary(param, best_params), best_value,        config.starts,
                              iterations_total,                  best_converged,    config.seed,
                              best_state};
}

std::vector<ViolationExhibit> violation_search(Index object_dim, Index apparatus_dim, int trials,
                                               std::uint64_t seed) {
    if (object_dim < 2 || apparatus_dim < 2) {
        throw ContractError("violation_search needs dimensions of at least 2");
    }
    if (trials < 0) throw ContractError("trials must be nonnegative");
    RandomCaseDims dims;
    dims.object_min = dims.object_max = object_dim;
    dims.apparatus_min = dims.apparatus_max = apparatus_dim;

    std::vector<ViolationExhibit> exhibits;
    for (int t = 0; t < trials; ++t) {
        UupCase candidate = random_uup_case(dims, seed, static_cast<std::uint64_t>(t));
        RelationReport heisenberg =
            check_heisenberg(candidate.model, candidate.a, candidate.b, candidate.psi);
        if (heisenberg.lhs < heisenberg.rhs - kViolationMargin) {
            RelationReport uup = check_uup(candidate.model, candidate.a, candidate.b, candidate.psi);
            exhibits.push_back({std::move(candidate.model), std::move(candidate.a),
                                std::move(candidate.b), std::move(candidate.psi),
                                std::move(heisenberg), std::move(uup)});
        }
    }
    return exhibits;
}

ViolationExhibit projective_sz_exhibit() {
    MeasurementModel model = projective_sz_model();
    HermitianOperator a = spin_component(Axis::Z);
    HermitianOperator b = spin_component(Axis::X);
    QuantumState psi = default_input_state();
    RelationReport heisenberg = check_heisenberg(model, a, b, psi);
    RelationReport uup = check_uup(model, a, b, psi);
    return {std::move(model), std::move(a),          std::move(b),
            std::move(psi),   std::move(heisenberg), std::move(uup)};
}

} // namespace waybound
