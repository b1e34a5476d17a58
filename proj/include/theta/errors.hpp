#pragma once

#include <stdexcept>
#include <string>

namespace theta {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LexiconError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

// Insertion index outside 1..arity.
struct ArityError : Error {
  using Error::Error;
};

// Bud composition attempted on mismatched colors.
struct ColorMismatch : Error {
  using Error::Error;
};

struct GuardExceeded : Error {
  using Error::Error;
};

// Merge operand selector does not address anything in the workspace.
struct SelectorError : Error {
  using Error::Error;
};

}  // namespace theta
