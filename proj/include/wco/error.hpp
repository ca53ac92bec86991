#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wco {

enum class ErrorKind {
  invalid_mass,
  invalid_map,
  invalid_tail,
  invalid_weight,
  mixed_field,
  unsupported_tail_fiber,
  unsupported_tail_analysis,
  recursion_direct_mismatch,
  infinite_value,
  depth_exceeds_data,
  oracle_mismatch,
  refuses_tail_space,
  parse_error,
  unknown_example,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_mass: return "InvalidMass";
    case ErrorKind::invalid_map: return "InvalidMap";
    case ErrorKind::invalid_tail: return "InvalidTail";
    case ErrorKind::invalid_weight: return "InvalidWeight";
    case ErrorKind::mixed_field: return "MixedField";
    case ErrorKind::unsupported_tail_fiber: return "UnsupportedTailFiber";
    case ErrorKind::unsupported_tail_analysis: return "UnsupportedTailAnalysis";
    case ErrorKind::recursion_direct_mismatch: return "RecursionDirectMismatch";
    case ErrorKind::infinite_value: return "InfiniteValue";
    case ErrorKind::depth_exceeds_data: return "DepthExceedsData";
    case ErrorKind::oracle_mismatch: return "OracleMismatch";
    case ErrorKind::refuses_tail_space: return "RefusesTailSpace";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::unknown_example: return "UnknownExample";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by bad input rather than internal defects.
  bool is_input_error() const noexcept {
    switch (kind_) {
      case ErrorKind::recursion_direct_mismatch:
      case ErrorKind::oracle_mismatch:
        return false;
      default:
        return true;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace wco
