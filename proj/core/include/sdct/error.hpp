#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdct {

enum class ErrorCode {
  invalid_dimension,
  invalid_parameter,
  invalid_shape,
  invalid_input,
  empty_data,
  chart_violation,
  invalid_tangent,
  subproblem_failure,
  singular_gram,
  internal_error,
  degenerate_data,
  rank_deficiency,
  numeric_failure,
  invalid_region,
  unsupported_dimension,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

/// Non-fatal diagnostics (parameters outside the analysed regime). The
/// default handler writes to stderr; pass nullptr to silence.
using WarningHandler = void (*)(std::string_view);
/// Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace sdct
