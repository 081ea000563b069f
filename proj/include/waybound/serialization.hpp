#ifndef WAYBOUND_SERIALIZATION_HPP
#define WAYBOUND_SERIALIZATION_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "waybound/conservation.hpp"
#include "waybound/gates.hpp"
#include "waybound/measurement.hpp"
#include "waybound/optimizer.hpp"
#include "waybound/qcore.hpp"

namespace waybound {

using Json = nlohmann::json;

// Wire formats. Complex scalars are [re, im] pairs, matrices row-major flat:
//   operator      {"dim": d, "entries": [[re, im], ...]}
//   state         {"kind": "pure"|"mixed", "dim": d, "entries": ...}
//                 (amplitudes when pure, row-major density when mixed)
//   model         {"object_dim", "apparatus_dim", "apparatus_state",
//                  "interaction", "meter"}
//   charge        {"l1": operator, "l2": operator}
//   ancilla       {"kind": "spins", "count", "separable", "state"}
//               | {"kind": "boson", "cutoff", "field_state"}
// Doubles survive a round trip losslessly (shortest-representation dump).
// Non-finite report values are encoded as the strings "inf"/"-inf"/"nan".

Json to_json(const HermitianOperator& a);
Json to_json(const UnitaryOperator& u);
Json to_json(const QuantumState& s);
Json to_json(const MeasurementModel& m);
Json to_json(const ConservedCharge& c);
Json to_json(const RelationReport& r);
Json to_json(const NoiseLowerBound& b);
Json to_json(const AncillaSpec& spec);
Json to_json(const OptimizerConfig& c);
Json to_json(const OptimizationResult& r);
Json to_json(const ViolationExhibit& e);

/// Schema violations raise ContractError; the validating constructors run on
/// every decoded object, so a decoded operator is as trustworthy as a built
/// one.
HermitianOperator hermitian_from_json(const Json& j);
UnitaryOperator unitary_from_json(const Json& j);
QuantumState state_from_json(const Json& j);
MeasurementModel model_from_json(const Json& j);
ConservedCharge charge_from_json(const Json& j);
AncillaSpec ancilla_from_json(const Json& j);
OptimizerConfig optimizer_config_from_json(const Json& j);

/// FNV-1a 64 over the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_digest(const Json& config);

/// Write-to-temp-then-rename in the target directory, so readers never see a
/// partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
/// Serialized with two-space indent and trailing newline, written atomically.
void write_json_atomic(const std::filesystem::path& path, const Json& j);

/// Whole file as a string; ContractError when unreadable.
std::string read_text(const std::filesystem::path& path);
/// Parsed JSON; ContractError on unreadable files or parse failures.
Json read_json(const std::filesystem::path& path);

} // namespace waybound

#endif
