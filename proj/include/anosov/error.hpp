#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anosov {

enum class ErrorCode {
  ShapeMismatch,
  NonCommuting,
  NotUnimodular,
  ActionRejected,
  EnclosureTooWide,
  UndecidedEquality,
  UndecidedSign,
  UndecidedProportionality,
  BoxExhausted,
  RankTooLow,
  InvalidBands,
  NotNarrowBand,
  BandMismatch,
  SingularLinearPart,
  ResonantDenominator,
  PreconditionFailed,
  NotCommuting,
  NotAnosov,
  Diverged,
  ResolutionInsufficient,
  InvalidType,
  ParseError,
  Unsupported,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anosov
