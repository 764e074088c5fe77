#include "robgev/error.hpp"

namespace robgev {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FileUnreadable: return "FileUnreadable";
    case ErrorKind::NoNumericColumn: return "NoNumericColumn";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::IntegrabilityViolation: return "IntegrabilityViolation";
    case ErrorKind::SingularJ: return "SingularJ";
    case ErrorKind::InfiniteMoment: return "InfiniteMoment";
  }
  return "Unknown";
}

}  // namespace robgev
