#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace corrbound {

enum class ErrorCode {
    NonSquare,
    NegativeRate,
    NonFinite,
    InvalidProbability,
    DimensionMismatch,
    NegativeTime,
    NonPositiveTime,
    NonUniqueSteadyState,
    NoConvergence,
    BadDimension,
    KeyMismatch,
    TimesNotSorted,
    TooFewSamples,
    TooManyPaths,
    BadInterval,
    ArgAtPiOverTwo,
    NotSteadyState,
    StepTooLarge,
    BadPerturbation,
    QuadratureFailure,
    BadInput,
};

const char* to_string(ErrorCode code);

// All library failures surface as this exception. `index` is set for errors
// that point at a matrix entry (row, column), zero-based.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what,
          std::optional<std::pair<std::size_t, std::size_t>> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    const std::optional<std::pair<std::size_t, std::size_t>>& index() const noexcept {
        return index_;
    }

  private:
    ErrorCode code_;
    std::optional<std::pair<std::size_t, std::size_t>> index_;
};

} // namespace corrbound
