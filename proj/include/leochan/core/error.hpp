#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leochan {

enum class ErrorCode {
    // tle
    ChecksumMismatch,
    MalformedField,
    LineLengthError,
    // sgp4
    DeepSpaceUnsupported,
    DecayedOrbit,
    KeplerNonConvergence,
    SatelliteDecayed,
    // frames
    FrameMismatch,
    // scene
    InvalidDimensions,
    // sbr
    SatelliteBelowHorizon,
    // link
    NonPositiveInput,
    InvalidElevation,
    EmptyPathSet,
    // doppler
    DomainError,
    NoPassFound,
    // sim
    ConfigError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::MalformedField: return "MalformedField";
    case ErrorCode::LineLengthError: return "LineLengthError";
    case ErrorCode::DeepSpaceUnsupported: return "DeepSpaceUnsupported";
    case ErrorCode::DecayedOrbit: return "DecayedOrbit";
    case ErrorCode::KeplerNonConvergence: return "KeplerNonConvergence";
    case ErrorCode::SatelliteDecayed: return "SatelliteDecayed";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::SatelliteBelowHorizon: return "SatelliteBelowHorizon";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::InvalidElevation: return "InvalidElevation";
    case ErrorCode::EmptyPathSet: return "EmptyPathSet";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoPassFound: return "NoPassFound";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure in the library surfaces as this exception; `code()` names the cause.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace leochan
