#include "sdct/error.hpp"

#include <atomic>
#include <iostream>

namespace sdct {

namespace {

void default_warning(std::string_view message) {
  std::cerr << "sdct warning: " << message << '\n';
}

std::atomic<WarningHandler> g_warning_handler{&default_warning};

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_dimension: return "invalid-dimension";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::invalid_shape: return "invalid-shape";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::empty_data: return "empty-data";
    case ErrorCode::chart_violation: return "chart-violation";
    case ErrorCode::invalid_tangent: return "invalid-tangent";
    case ErrorCode::subproblem_failure: return "subproblem-failure";
    case ErrorCode::singular_gram: return "singular-gram";
    case ErrorCode::internal_error: return "internal-error";
    case ErrorCode::degenerate_data: return "degenerate-data";
    case ErrorCode::rank_deficiency: return "rank-deficiency";
    case ErrorCode::numeric_failure: return "numeric-failure";
    case ErrorCode::invalid_region: return "invalid-region";
    case ErrorCode::unsupported_dimension: return "unsupported-dimension";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

WarningHandler set_warning_handler(WarningHandler handler) { return g_warning_handler.exchange(handler); }

void warn(std::string_view message) {
  if (auto* handler = g_warning_handler.load()) handler(message);
}

}  // namespace sdct
