#pragma once

// Node-value pipeline: evaluate f(j/(j+1)) for j = 1..count at a fixed
// precision and persist the results in a line-oriented text format,
//
//   # keli-node-table v1
//   digits: <D>
//   count: <N>
//   <j> <value>            (ascending j, exact-round-trip scientific)
//
// f(0) = f(1) = 0 are normalization constants and are never stored.
// Builds are deterministic: the same (count, digits) request produces a
// byte-identical file regardless of thread count.

#include "keli/mp.hpp"

#include <string>

namespace keli {

struct NodeValueTable {
  int digits = 0;
  std::vector<BigReal> values;  // values[j-1] = f(j/(j+1))

  int count() const { return static_cast<int>(values.size()); }
};

NodeValueTable build_node_table(int count, const PrecisionContext& ctx,
                                int threads = 1);

void save_node_table(const NodeValueTable& table, const std::string& path);

// Errors: VersionError (unrecognized header), TruncationError (fewer rows
// than promised), ParseError (malformed header fields, indices, or values).
NodeValueTable load_node_table(const std::string& path);

// Rounds a table down to fewer digits (for feeding a high-precision file
// into a lower-precision run). Callers surface the precision-downgrade
// warning; widening a table is refused.
NodeValueTable round_table(const NodeValueTable& table, int digits);

std::string sha256_file(const std::string& path);

}  // namespace keli
