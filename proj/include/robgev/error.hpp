#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robgev {

/// Failure categories surfaced by the library. The CLI maps them onto exit
/// codes (usage = 2, data = 3, numeric = 4).
enum class ErrorKind {
  InvalidArgument,
  FileUnreadable,
  NoNumericColumn,
  EmptySeries,
  DegenerateData,
  ConfigInvalid,
  NonConvergence,
  IntegrabilityViolation,
  SingularJ,
  InfiniteMoment,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace robgev
