// Error codes shared by all fockgen modules. Every throwing operation uses
// fock::Error so callers (and the CLI) can map failures to stable code names.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fock {

enum class ErrorCode {
  ZeroNorm,
  DimMismatch,
  BadTransmittance,
  TruncationOverflow,
  DegenerateDraw,
  NotNormalized,
  VacuumUndefined,
  LeadingCoefficientZero,
  NoConvergence,
  ZeroProbability,
  VerificationFailed,
  BadEta,
  ConfigInvalid,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadTransmittance: return "BadTransmittance";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::VacuumUndefined: return "VacuumUndefined";
    case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroProbability: return "ZeroProbability";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::BadEta: return "BadEta";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace fock
