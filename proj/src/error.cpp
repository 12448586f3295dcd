#include "corrbound/error.hpp"

namespace corrbound {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::NonUniqueSteadyState: return "NonUniqueSteadyState";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::TimesNotSorted: return "TimesNotSorted";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::TooManyPaths: return "TooManyPaths";
    case ErrorCode::BadInterval: return "BadInterval";
    case ErrorCode::ArgAtPiOverTwo: return "ArgAtPiOverTwo";
    case ErrorCode::NotSteadyState: return "NotSteadyState";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::BadPerturbation: return "BadPerturbation";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what,
             std::optional<std::pair<std::size_t, std::size_t>> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(std::move(index)) {}

} // namespace corrbound
