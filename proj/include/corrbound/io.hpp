#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corrbound/markov.hpp"

namespace corrbound {

/// A model as read from disk: generator, initial distribution and the two
/// scores of the correlation <S(0) T(t)>.
struct Model {
    RateMatrix w;
    ProbVector p0;
    ScoreVector s;
    ScoreVector t;
};

/// Tolerance on sum(p0) - 1 for hand-written model files.
inline constexpr double kModelFileProbabilityTolerance = 1e-9;

/// {"n": int, "rates": n x n (rates[nu][mu] is the rate mu -> nu, diagonal
/// ignored), "p0": [...], "S": [...], "T": [...] (optional, defaults to S)}.
/// Throws Error(BadInput) on malformed documents.
Model parse_model_json(std::string_view text);
Model load_model_file(const std::filesystem::path& path);
std::string model_to_json(const Model& model);

/// "start:stop:points:lin" or "start:stop:points:log". Times must be >= 0
/// (log grids need start > 0); the result is sorted.
std::vector<double> parse_time_grid(std::string_view spec);
std::vector<double> linear_grid(double start, double stop, int points);
std::vector<double> log_grid(double start, double stop, int points);

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double x);

} // namespace corrbound
