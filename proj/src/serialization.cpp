#include "waybound/serialization.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "waybound/errors.hpp"

namespace waybound {

namespace {

Json encode_real(double value) {
    if (std::isfinite(value)) return value;
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
}

double decode_real(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ContractError("expected a real number, got " + j.dump());
}

const Json& require(const Json& j, const char* key) {
    if (!j.is_object()) throw ContractError("expected a JSON object, got " + j.dump());
    const auto it = j.find(key);
    if (it == j.end()) throw ContractError(std::string("missing key \"") + key + "\"");
    return *it;
}

double number_at(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_number()) throw ContractError(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

long long integer_at(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_number_integer()) {
        throw ContractError(std::string("key \"") + key + "\" must be an integer");
    }
    return v.get<long long>();
}

bool boolean_at(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_boolean()) throw ContractError(std::string("key \"") + key + "\" must be a boolean");
    return v.get<bool>();
}

Json encode_entries(const Matrix& m) {
    Json entries = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return entries;
}

Json encode_entries(const Vector& v) {
    Json entries = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        entries.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return entries;
}

Complex decode_pair(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ContractError("complex entries must be [re, im] pairs, got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Matrix decode_matrix(const Json& entries, Index dim) {
    if (!entries.is_array() || static_cast<Index>(entries.size()) != dim * dim) {
        throw ContractError("expected " + std::to_string(dim * dim) + " row-major entries");
    }
    Matrix m(dim, dim);
    Index flat = 0;
    for (Index r = 0; r < dim; ++r) {
        for (Index c = 0; c < dim; ++c) {
            m(r, c) = decode_pair(entries[flat++]);
        }
    }
    return m;
}

Vector decode_vector(const Json& entries, Index dim) {
    if (!entries.is_array() || static_cast<Index>(entries.size()) != dim) {
        throw ContractError("expected " + std::to_string(dim) + " amplitude entries");
    }
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = decode_pair(entries[i]);
    return v;
}

Index decode_dim(const Json& j) {
    const long long dim = integer_at(j, "dim");
    if (dim < 1 || dim > kDefaultDimensionCap) {
        throw ContractError("dim " + std::to_string(dim) + " outside [1, " +
                            std::to_string(kDefaultDimensionCap) + "]");
    }
    return static_cast<Index>(dim);
}

} // namespace

Json to_json(const HermitianOperator& a) {
    return Json{{"dim", a.dim()}, {"entries", encode_entries(a.matrix())}};
}

Json to_json(const UnitaryOperator& u) {
    return Json{{"dim", u.dim()}, {"entries", encode_entries(u.matrix())}};
}

Json to_json(const QuantumState& s) {
    if (s.is_pure()) {
        return Json{{"kind", "pure"}, {"dim", s.dim()}, {"entries", encode_entries(s.state_vector())}};
    }
    return Json{{"kind", "mixed"}, {"dim", s.dim()}, {"entries", encode_entries(s.density_matrix())}};
}

Json to_json(const MeasurementModel& m) {
    return Json{{"object_dim", m.object_dim()},
                {"apparatus_dim", m.apparatus_dim()},
                {"apparatus_state", to_json(m.apparatus_state())},
                {"interaction", to_json(m.interaction())},
                {"meter", to_json(m.meter())}};
}

Json to_json(const ConservedCharge& c) {
    return Json{{"l1", to_json(c.l1)}, {"l2", to_json(c.l2)}};
}

Json to_json(const RelationReport& r) {
    Json components = Json::object();
    for (const auto& [name, value] : r.components) components[name] = encode_real(value);
    return Json{{"lhs", encode_real(r.lhs)},
                {"rhs", encode_real(r.rhs)},
                {"slack", encode_real(r.slack)},
                {"holds", r.holds},
                {"components", components}};
}

Json to_json(const NoiseLowerBound& b) {
    if (b.is_unbounded()) return "unbounded";
    return b.value();
}

Json to_json(const AncillaSpec& spec) {
    if (const auto* spins = std::get_if<SpinAncilla>(&spec)) {
        return Json{{"kind", "spins"},
                    {"count", spins->count},
                    {"separable", spins->separable},
                    {"state", to_json(spins->state)}};
    }
    const auto& boson = std::get<BosonAncilla>(spec);
    return Json{{"kind", "boson"},
                {"cutoff", boson.cutoff},
                {"field_state", to_json(boson.field_state)}};
}

Json to_json(const OptimizerConfig& c) {
    return Json{{"starts", c.starts},
                {"max_iters", c.max_iters},
                {"grad_tol", c.grad_tol},
                {"seed", c.seed},
                {"optimize_ancilla", c.optimize_ancilla}};
}

Json to_json(const OptimizationResult& r) {
    return Json{{"best_unitary", to_json(r.best_unitary)},
                {"best_value", r.best_value},
                {"starts", r.starts},
                {"iterations_total", r.iterations_total},
                {"converged", r.converged},
                {"seed", r.seed},
                {"ancilla_state", to_json(r.ancilla_state)}};
}

Json to_json(const ViolationExhibit& e) {
    return Json{{"model", to_json(e.model)},
                {"a", to_json(e.a)},
                {"b", to_json(e.b)},
                {"psi", to_json(e.psi)},
                {"heisenberg", to_json(e.heisenberg)},
                {"uup", to_json(e.uup)}};
}

HermitianOperator hermitian_from_json(const Json& j) {
    const Index dim = decode_dim(j);
    return HermitianOperator(decode_matrix(require(j, "entries"), dim));
}

UnitaryOperator unitary_from_json(const Json& j) {
    const Index dim = decode_dim(j);
    return UnitaryOperator(decode_matrix(require(j, "entries"), dim));
}

QuantumState state_from_json(const Json& j) {
    const Json& kind = require(j, "kind");
    const Index dim = decode_dim(j);
    if (kind == "pure") return QuantumState::pure(decode_vector(require(j, "entries"), dim));
    if (kind == "mixed") return QuantumState::mixed(decode_matrix(require(j, "entries"), dim));
    throw ContractError("state kind must be \"pure\" or \"mixed\", got " + kind.dump());
}

MeasurementModel model_from_json(const Json& j) {
    const long long object_dim = integer_at(j, "object_dim");
    const long long apparatus_dim = integer_at(j, "apparatus_dim");
    QuantumState apparatus_state = state_from_json(require(j, "apparatus_state"));
    UnitaryOperator interaction = unitary_from_json(require(j, "interaction"));
    HermitianOperator meter = hermitian_from_json(require(j, "meter"));
    if (meter.dim() != apparatus_dim) {
        throw ContractError("meter dim " + std::to_string(meter.dim()) +
                            " does not match apparatus_dim " + std::to_string(apparatus_dim));
    }
    return MeasurementModel(static_cast<Index>(object_dim), std::move(apparatus_state),
                            std::move(interaction), std::move(meter));
}

ConservedCharge charge_from_json(const Json& j) {
    return ConservedCharge{hermitian_from_json(require(j, "l1")),
                           hermitian_from_json(require(j, "l2"))};
}

AncillaSpec ancilla_from_json(const Json& j) {
    const Json& kind = require(j, "kind");
    if (kind == "spins") {
        AncillaSpec spec = SpinAncilla{static_cast<int>(integer_at(j, "count")),
                                       state_from_json(require(j, "state")),
                                       boolean_at(j, "separable")};
        validate_ancilla(spec);
        return spec;
    }
    if (kind == "boson") {
        AncillaSpec spec = BosonAncilla{static_cast<int>(integer_at(j, "cutoff")),
                                        state_from_json(require(j, "field_state"))};
        validate_ancilla(spec);
        return spec;
    }
    throw ContractError("ancilla kind must be \"spins\" or \"boson\", got " + kind.dump());
}

OptimizerConfig optimizer_config_from_json(const Json& j) {
    if (!j.is_object()) throw ContractError("optimizer config must be a JSON object");
    OptimizerConfig config;
    if (j.contains("starts")) config.starts = static_cast<int>(integer_at(j, "starts"));
    if (j.contains("max_iters")) config.max_iters = static_cast<int>(integer_at(j, "max_iters"));
    if (j.contains("grad_tol")) config.grad_tol = number_at(j, "grad_tol");
    if (j.contains("seed")) config.seed = static_cast<std::uint64_t>(integer_at(j, "seed"));
    if (j.contains("optimize_ancilla")) config.optimize_ancilla = boolean_at(j, "optimize_ancilla");
    return config;
}

std::string config_digest(const Json& config) {
    const std::string canonical = config.dump(); // compact, keys already sorted
    std::uint64_t hash = 14695981039346656037ULL;
    for (const unsigned char byte : canonical) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        stream.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!stream.good()) {
            throw ContractError("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw ContractError("cannot move " + tmp.string() + " to " + path.string() + ": " +
                            ec.message());
    }
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream.good()) throw ContractError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

Json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ContractError("invalid JSON in " + path.string());
    return j;
}

} // namespace waybound
