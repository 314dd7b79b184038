#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flatlimit {

enum class ErrorCode {
  // input language
  SyntaxError,
  UnknownVariable,
  // polynomial / ideal arithmetic
  RingMismatch,
  NegativePower,
  ZeroPolynomial,
  ZeroDivisorArgument,
  NonGlobalOrder,
  DegreeBoundExceeded,
  // degenerations
  RoleError,
  FlatnessViolation,
  FlatnessCertificateFailure,
  NoEscape,
  CandidateExhaustion,
  NotNodeIdeal,
  IncompatibleDivisorData,
  NotRelativeInput,
  NotPerfect,
  MalformedNodeFamily,
  NonZeroDimensional,
  // chains
  DivisorMismatch,
  NotRelative,
  LengthMismatch,
  // job files
  JobError,
  VerificationFailure,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::NegativePower: return "NegativePower";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::ZeroDivisorArgument: return "ZeroDivisorArgument";
    case ErrorCode::NonGlobalOrder: return "NonGlobalOrder";
    case ErrorCode::DegreeBoundExceeded: return "DegreeBoundExceeded";
    case ErrorCode::RoleError: return "RoleError";
    case ErrorCode::FlatnessViolation: return "FlatnessViolation";
    case ErrorCode::FlatnessCertificateFailure: return "FlatnessCertificateFailure";
    case ErrorCode::NoEscape: return "NoEscape";
    case ErrorCode::CandidateExhaustion: return "CandidateExhaustion";
    case ErrorCode::NotNodeIdeal: return "NotNodeIdeal";
    case ErrorCode::IncompatibleDivisorData: return "IncompatibleDivisorData";
    case ErrorCode::NotRelativeInput: return "NotRelativeInput";
    case ErrorCode::NotPerfect: return "NotPerfect";
    case ErrorCode::MalformedNodeFamily: return "MalformedNodeFamily";
    case ErrorCode::NonZeroDimensional: return "NonZeroDimensional";
    case ErrorCode::DivisorMismatch: return "DivisorMismatch";
    case ErrorCode::NotRelative: return "NotRelative";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::JobError: return "JobError";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
  }
  return "Unknown";
}

/// Parse-level errors map to CLI exit code 1, everything else to 2.
constexpr bool is_parse_error(ErrorCode code) {
  return code == ErrorCode::SyntaxError || code == ErrorCode::UnknownVariable ||
         code == ErrorCode::JobError;
}

/// Every library failure is reported through this type. `index()` carries the
/// offending chain component or character position when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code),
        detail_(message),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> index_;
};

}  // namespace flatlimit
