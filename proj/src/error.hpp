#pragma once

#include <stdexcept>
#include <string>

namespace spansim {

// Error taxonomy shared by every module. The C API maps these onto status codes.

// A caller-supplied value violates a precondition (bad dimensions, out-of-range
// parameter, non-finite entries, malformed input string).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested object does not exist (no witness, target outside the range of
// the program map, unsatisfiable linear system).
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The object is mathematically valid but outside what the simulator handles
// (for example non-orthogonal letter subspaces in the bridge construction).
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A document failed to parse or violates a documented schema invariant.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed; indicates a bug, not a usage error.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace spansim
