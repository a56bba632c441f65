#pragma once

#include <string>

#include "json.hpp"

#include "qcone/cones.hpp"
#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"
#include "qcone/ncpoly.hpp"

namespace qcone {

using Json = nlohmann::json;

inline constexpr int kConicSchemaVersion = 1;

Json matrix_json(const Matrix& m);  // list of rows
Json sym_json(const SymMatrix& m);
Json vector_json(const Vector& v);
SymMatrix sym_from_json(const Json& j);

Json graph_json(const Graph& g);  // {"n", "edges"}
Graph graph_from_json(const Json& j);

// {"schema": "qcone.conic", "version", "sense", "blocks", "objective", "constraints"}
// with terms as [block, i, j, coef] quadruples.
Json problem_to_json(const ConicProblem& p);
ConicProblem problem_from_json(const Json& j);
Json residuals_json(const Residuals& r);
Json outcome_to_json(const ConicOutcome& o);
ConicOutcome outcome_from_json(const Json& j);
Json certify_json(const CertifyReport& r);

Json certificate_json(const Certificate& c);
Json verdict_json(const MembershipVerdict& v);
Json nc_verdict_json(const NcVerdict& v);

// Sorted keys, no whitespace, numbers at 12 significant digits. Throws
// InvalidParameter on NaN or infinity anywhere in the document.
std::string canonical_dump(const Json& j);

// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

}  // namespace qcone
