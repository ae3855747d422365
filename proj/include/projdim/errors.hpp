#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace projdim {

enum class ErrorCode {
    DivisionByZero,
    MixedContexts,
    NonTerminatingComparison,
    InvalidField,
    AngleOutOfRange,
    CapTooSmall,
    DivergentTail,
    EmptyCounts,
    NoRootInDomain,
    CertificateUnavailable,
    TypesExceeded,
    NotUniformRatio,
    EmptySelection,
    BudgetExceeded,
    WindowTooFine,
    Parse,
    Config,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedContexts: return "MixedContexts";
    case ErrorCode::NonTerminatingComparison: return "NonTerminatingComparison";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::CapTooSmall: return "CapTooSmall";
    case ErrorCode::DivergentTail: return "DivergentTail";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::NoRootInDomain: return "NoRootInDomain";
    case ErrorCode::CertificateUnavailable: return "CertificateUnavailable";
    case ErrorCode::TypesExceeded: return "TypesExceeded";
    case ErrorCode::NotUniformRatio: return "NotUniformRatio";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::WindowTooFine: return "WindowTooFine";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Config and parse failures map to exit code 2, everything else to 3.
    bool is_config_error() const noexcept {
        return code_ == ErrorCode::Parse || code_ == ErrorCode::Config ||
               code_ == ErrorCode::InvalidField || code_ == ErrorCode::AngleOutOfRange;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace projdim
