#include "anosov/error.hpp"

namespace anosov {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::ActionRejected: return "ActionRejected";
    case ErrorCode::EnclosureTooWide: return "EnclosureTooWide";
    case ErrorCode::UndecidedEquality: return "UndecidedEquality";
    case ErrorCode::UndecidedSign: return "UndecidedSign";
    case ErrorCode::UndecidedProportionality: return "UndecidedProportionality";
    case ErrorCode::BoxExhausted: return "BoxExhausted";
    case ErrorCode::RankTooLow: return "RankTooLow";
    case ErrorCode::InvalidBands: return "InvalidBands";
    case ErrorCode::NotNarrowBand: return "NotNarrowBand";
    case ErrorCode::BandMismatch: return "BandMismatch";
    case ErrorCode::SingularLinearPart: return "SingularLinearPart";
    case ErrorCode::ResonantDenominator: return "ResonantDenominator";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::NotAnosov: return "NotAnosov";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::ResolutionInsufficient: return "ResolutionInsufficient";
    case ErrorCode::InvalidType: return "InvalidType";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace anosov
