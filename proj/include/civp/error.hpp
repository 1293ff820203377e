#pragma once

// Error types for the civp model. Everything is an invariant or contract
// violation: the model never wraps, saturates or silently widens.

#include <stdexcept>
#include <string>

namespace civp {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (hex parsing, bad format names).
struct ParseError : Error {
  using Error::Error;
};

// A value does not fit its declared width, or an accumulation would lose bits.
struct OverflowError : Error {
  using Error::Error;
};

// Slice indices outside the operand.
struct BoundsError : Error {
  using Error::Error;
};

// Operand wider than a tile in both orientations, or a degenerate invocation.
struct TileError : Error {
  using Error::Error;
};

// No tile in the set can cover a required slice pairing.
struct PlanError : Error {
  using Error::Error;
};

// Encode fields outside the representable range of a format.
struct RangeError : Error {
  using Error::Error;
};

// API misuse: mismatched formats or widths between operands.
struct ContractError : Error {
  using Error::Error;
};

}  // namespace civp
