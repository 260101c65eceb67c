#pragma once

#include <string>
#include <utility>
#include <vector>

#include "span_program.hpp"

namespace spansim {

// Potential-edge graph for st-connectivity: input index j carries edge j, which
// is present iff x_j = 1. Parallel edges are allowed (distinct indices with the
// same endpoints); self-loops are not.
struct GraphSpec {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  int s = 0;
  int t = 0;
  void validate() const;
};

// OR_n: V = C, tau = (1), H_j = span{|j>}, available only when x_j = 1,
// A the all-ones row.
SpanProgram build_or(int n);

// st-connectivity: A maps the edge vector for (u, v) to |u> - |v>,
// tau = |s> - |t>.
SpanProgram build_stconn(const GraphSpec& g);

// (e_s - e_t)^T L^+ (e_s - e_t) on the subgraph selected by x; +infinity when
// s and t are disconnected.
double effective_resistance(const GraphSpec& g, const std::string& x);

}  // namespace spansim
