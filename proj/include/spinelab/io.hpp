#pragma once

#include "spinelab/core.hpp"

#include <iosfwd>
#include <string>

namespace spinelab {

/// Text instance format, variables 1-indexed:
///   p gcsp <n> <m> <k> <t>
///   t <id> <satisfying tuples as k-digit base-t strings>
///   e <template-id> <v_1..v_k> [<s_1..s_k> with s in {+,-}]
/// Lines starting with 'c' are comments.
void write_instance(std::ostream& out, const Formula& f);
Formula read_instance(std::istream& in);

/// DIMACS graph: "p edge <n> <m>" then "e u v", 1-indexed.
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

/// First non-comment header token after "p": "gcsp", "edge" or "cnf".
std::string sniff_format(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace spinelab
