#include "gabac/error.hpp"

namespace gabac {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyName: return "EmptyName";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::InvalidNode: return "InvalidNode";
    case Errc::SelfLoopOnHasAttr: return "SelfLoopOnHasAttr";
    case Errc::AttributeCycle: return "AttributeCycle";
    case Errc::GraphFrozen: return "GraphFrozen";
    case Errc::NotFrozen: return "NotFrozen";
    case Errc::DuplicatePolicyName: return "DuplicatePolicyName";
    case Errc::MissingConditionType: return "MissingConditionType";
    case Errc::DanglingConditionRef: return "DanglingConditionRef";
    case Errc::MalformedExpression: return "MalformedExpression";
    case Errc::UnknownPolicy: return "UnknownPolicy";
    case Errc::NegationNotExpandable: return "NegationNotExpandable";
    case Errc::NotMatching: return "NotMatching";
    case Errc::InvalidQuery: return "InvalidQuery";
    case Errc::InvalidDepth: return "InvalidDepth";
    case Errc::UnsupportedAlgorithm: return "UnsupportedAlgorithm";
    case Errc::ReservedRelType: return "ReservedRelType";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace gabac
