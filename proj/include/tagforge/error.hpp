#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tagforge {

enum class ErrorKind {
  syntax,             // malformed input text
  io,                 // file could not be read
  unknown_id,         // reference to a tree, set or node that does not exist
  illegal_site,
  label_mismatch,
  wrong_shape,
  set_arity,
  incomplete_derivation,
  composition,
  inversion,
  incomplete_order,
  no_rule,
  ambiguous_rule,
  segment_use,
  refuse_unbounded,
  not_lexicalized,
  malformed_tree,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::syntax: return "SyntaxError";
    case ErrorKind::io: return "IOError";
    case ErrorKind::unknown_id: return "UnknownId";
    case ErrorKind::illegal_site: return "IllegalSite";
    case ErrorKind::label_mismatch: return "LabelMismatch";
    case ErrorKind::wrong_shape: return "WrongShape";
    case ErrorKind::set_arity: return "SetArity";
    case ErrorKind::incomplete_derivation: return "IncompleteDerivation";
    case ErrorKind::composition: return "CompositionError";
    case ErrorKind::inversion: return "InversionError";
    case ErrorKind::incomplete_order: return "IncompleteOrder";
    case ErrorKind::no_rule: return "NoRule";
    case ErrorKind::ambiguous_rule: return "AmbiguousRule";
    case ErrorKind::segment_use: return "SegmentUse";
    case ErrorKind::refuse_unbounded: return "RefuseUnbounded";
    case ErrorKind::not_lexicalized: return "NotLexicalized";
    case ErrorKind::malformed_tree: return "MalformedTree";
  }
  return "Error";
}

/// Every failure raised by the library. `kind()` identifies the contract
/// that was violated; the message carries node addresses, step indices or
/// line numbers where they are known.
class TagError : public std::runtime_error {
 public:
  TagError(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error with `prefix` prepended to the detail (e.g. "step 3").
  TagError with_context(const std::string& prefix) const {
    return TagError(kind_, prefix + ": " + detail_);
  }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace tagforge
