#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gabac/gabac.hpp"

namespace gabac::cli {

/// Exit codes: a Deny is never reported as an operational error.
inline constexpr int kExitPermit = 0;
inline constexpr int kExitDeny = 1;
inline constexpr int kExitError = 2;

/// Entry point shared by the binary and the tests. args[0] is the program
/// name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// Answers one newline-delimited JSON request. Always returns a single-line
/// response object with fields id, decision, matching, error; any failure
/// yields decision "Deny" with a message in error.
std::string handle_request_line(const Model& model, std::string_view line,
                                CombiningAlgorithm default_algorithm);

/// Reads requests until end of input, writing one response line per request
/// line in order.
void serve(const Model& model, CombiningAlgorithm default_algorithm, std::istream& in,
           std::ostream& out);

/// Human-readable account of an evaluation.
std::string explain_report(const Model& model, const AccessQuery& query,
                           const EvaluationResult& result);

}  // namespace gabac::cli
