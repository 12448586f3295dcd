#pragma once

// Command implementations behind the corrbound CLI. Each command returns
// the process exit code: 0 pass, 1 bound violation, 2 input or I/O error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrbound/bounds.hpp"
#include "corrbound/io.hpp"

namespace corrbound {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitInputError = 2 };

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::optional<std::filesystem::path> model_path;
    /// Used when no model file is given: `models` random models cycling
    /// through `states`.
    std::vector<int> states{2, 3, 4};
    int models = 1;
    std::vector<double> t_grid;
    std::vector<BoundId> bounds;
    CmaxMode cmax_mode = CmaxMode::Standard;
    std::optional<std::filesystem::path> output_path;
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 1;
    double chi = 0.01;
    /// Test hook: every rhs is multiplied by this before the ratio check.
    double rhs_scale = 1.0;
};

/// Seed of the i-th random model of a sweep seeded with `seed`.
std::uint64_t model_seed(std::uint64_t seed, std::uint64_t index);

/// Evaluates one bound for one model on every usable point of the grid
/// (DERIV/PULSE skip t = 0; MAIN uses consecutive grid pairs; the
/// multipoint bounds use J = 3 with scores (S, T, S) at (0, t/2, t)).
std::vector<BoundReport> evaluate_bound(const Model& model, BoundId id,
                                        const std::vector<double>& t_grid, CmaxMode mode,
                                        double chi);

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);

struct FigureConfig {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    int models = 100;
    std::vector<double> t_grid;   // empty: command default
};

/// fig2a.csv .. fig2d.csv plus fig2_meta.json.
int cmd_figure2(const FigureConfig& config, std::ostream& err);
/// fig3a.csv (pulse) and fig3b.csv (step) plus fig3_meta.json.
int cmd_figure3(const FigureConfig& config, std::ostream& err);

struct StressConfig {
    int models = 500;
    std::vector<int> states{2, 3, 4};
    std::uint64_t seed = 1;
    std::vector<double> t_grid;   // empty: log grid 1e-2..10, 20 points
    CmaxMode cmax_mode = CmaxMode::Standard;
    double chi = 0.01;
    unsigned threads = 0;         // 0: hardware concurrency capped by CORRBOUND_THREADS
};

struct BoundTally {
    std::uint64_t evaluations = 0;
    double max_ratio = 0.0;
    std::uint64_t violations = 0;
};

struct StressResult {
    std::vector<std::pair<BoundId, BoundTally>> tally;  // in kAllBoundIds order
    std::uint64_t total_violations = 0;
};

StressResult run_stress(const StressConfig& config);
std::string stress_json(const StressConfig& config, const StressResult& result);
int cmd_stress(const StressConfig& config, const std::optional<std::filesystem::path>& out_path,
               std::ostream& out, std::ostream& err);

enum class ResponseDrive { Pulse, Step };

struct ResponseConfig {
    std::filesystem::path model_path;
    ResponseDrive drive = ResponseDrive::Step;
    double chi = 0.01;
    std::vector<double> t_grid;
    CmaxMode cmax_mode = CmaxMode::Standard;
    std::optional<std::filesystem::path> output_path;
};

/// Response sweep from the model's stationary state (p0 in the file is
/// ignored): t,shift,bound_rhs,ratio,in_domain.
int cmd_response(const ResponseConfig& config, std::ostream& out, std::ostream& err);

/// Thread count from CORRBOUND_THREADS (if set) and the hardware.
unsigned worker_threads(unsigned requested);

} // namespace corrbound
