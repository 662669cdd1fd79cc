#pragma once

#include <stdexcept>
#include <string>

namespace hrsurf {

enum class ErrorKind {
    OutOfDomain,
    UnsupportedCombination,
    OutOfRange,
    DomainExceeded,
    NoBracket,
    DivergentEndpoint,
    ParameterOutOfRegime,
    NotApplicable,
    UnsupportedExport,
    InvalidArgument,
};

inline const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::UnsupportedCombination: return "UnsupportedCombination";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::DomainExceeded: return "DomainExceeded";
        case ErrorKind::NoBracket: return "NoBracket";
        case ErrorKind::DivergentEndpoint: return "DivergentEndpoint";
        case ErrorKind::ParameterOutOfRegime: return "ParameterOutOfRegime";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::UnsupportedExport: return "UnsupportedExport";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

   private:
    ErrorKind kind_;
};

}  // namespace hrsurf
