#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qcone/graphs.hpp"
#include "qcone/linalg.hpp"

namespace qcone::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Largest aggregated program the CLI will hand to the dense solver.
inline constexpr int kAggregateConstraintCap = 6000;

// "gen:family:params" or a DIMACS file (.col). A random generator without a
// seed takes `seed`.
Graph load_graph(const std::string& arg, uint64_t seed);
// "named:horn", "named:L", "named:W", "named:Lprime", "named:mbc:b,c",
// "named:identity:n", a matrix text file (.txt) or a JSON list of rows (.json).
SymMatrix load_matrix(const std::string& arg);

// Runs one command line; the report goes to `out`, errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qcone::cli
