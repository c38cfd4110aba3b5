#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gabac {

/// Error categories raised by the engine. Each operation documents which
/// subset it can produce.
enum class Errc {
  EmptyName,
  DuplicateName,
  UnknownNode,
  InvalidNode,
  SelfLoopOnHasAttr,
  AttributeCycle,
  GraphFrozen,
  NotFrozen,
  DuplicatePolicyName,
  MissingConditionType,
  DanglingConditionRef,
  MalformedExpression,
  UnknownPolicy,
  NegationNotExpandable,
  NotMatching,
  InvalidQuery,
  InvalidDepth,
  UnsupportedAlgorithm,
  ReservedRelType,
  SyntaxError,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  /// Message without the leading error name.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

}  // namespace gabac
