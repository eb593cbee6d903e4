#pragma once

#include <string>
#include <string_view>

#include "adjbraid/audit.hpp"
#include "adjbraid/calculus.hpp"

namespace adjbraid {

inline constexpr int kSchemaVersion = 1;

/// {"support": "(12|34)", "signs": {"1": "+", "13": "-", ...}} with canonical keys in
/// ascending key order, no trailing newline.
std::string shard_to_json(const Shard& x);
/// Parses shard_to_json output; the ground is inferred from the support.
Shard shard_from_json(std::string_view text);
Shard shard_from_json(std::string_view text, const GroundPtr& ground);

/// {"schema": 1, "support": "(..)", "values": {"<sign string>": "p/q", ...}}.
/// Functionals list every shard; shard vectors list nonzero coefficients only.
std::string functional_to_json(const Functional& f);
std::string shard_vector_to_json(const ShardVector& v);
/// Throws ArityMismatch when a shard is missing, Error for unknown shards.
Functional functional_from_json(std::string_view text);
Functional functional_from_json(std::string_view text, const GroundPtr& ground);
ShardVector shard_vector_from_json(std::string_view text);
ShardVector shard_vector_from_json(std::string_view text, const GroundPtr& ground);
/// Support partition named by a functional / shard vector document.
std::string document_support(std::string_view text);

std::string instance_to_json(const Instance& in);
Instance instance_from_json(std::string_view text);

std::string report_to_json(const AuditReport& r);
/// One line per claim: "PASS lie.jacobi n=4 instances=132 ...".
std::string report_to_text(const AuditReport& r);

}  // namespace adjbraid
