#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace itac {

/// Failure categories shared by the library, the CLI and the HTTP service.
enum class ErrorCode {
    SumViolation,
    BoundViolation,
    EmptySpace,
    OutOfRange,
    ZeroTransmission,
    RankDeficient,
    Underdetermined,
    AllZeroDesirability,
    MissingTarget,
    InvalidArgument,
    EmptyWindow,
    NonPositiveDenominator,
    DegenerateX,
    BadElement,
    MismatchedSpan,
    ParseError,
    UnknownLabel,
    MissingBiasColumn,
    NotFound,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::SumViolation: return "SumViolation";
        case ErrorCode::BoundViolation: return "BoundViolation";
        case ErrorCode::EmptySpace: return "EmptySpace";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ZeroTransmission: return "ZeroTransmission";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::Underdetermined: return "Underdetermined";
        case ErrorCode::AllZeroDesirability: return "AllZeroDesirability";
        case ErrorCode::MissingTarget: return "MissingTarget";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::NonPositiveDenominator: return "NonPositiveDenominator";
        case ErrorCode::DegenerateX: return "DegenerateX";
        case ErrorCode::BadElement: return "BadElement";
        case ErrorCode::MismatchedSpan: return "MismatchedSpan";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::MissingBiasColumn: return "MissingBiasColumn";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/**
 * @brief Exception carrying an ErrorCode and, optionally, the name of the
 * offending field (component, column, term, ...).
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          field_(std::move(field)),
          detail_(message) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string field_;
    std::string detail_;
};

}  // namespace itac
