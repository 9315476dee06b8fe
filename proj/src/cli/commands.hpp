#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace ifsseq::cli {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kResourceError = 3, kPreconditionError = 4 };

/// --seed beats IFSSEQ_SEED, which beats the built-in default.
struct SeedChoice {
    std::uint64_t value = kDefaultSeed;
    std::string source = "default";
};
SeedChoice resolve_seed(std::optional<std::uint64_t> flag);

struct DistOptions {
    std::filesystem::path a, b;
};

struct AttractorOptions {
    std::filesystem::path spec;
    std::optional<std::size_t> depth;   ///< default: deep enough for the render bound to drop below delta
    std::optional<double> delta;        ///< default: default_resolution(dim)
    std::filesystem::path out = "attractor.csv";
    std::optional<std::filesystem::path> image;
    std::optional<std::size_t> px;      ///< pixels along the longest domain side
    std::size_t point_cap = 5'000'000;
};

struct AnalyzeOptions {
    std::filesystem::path sequence;
    double eps = 0.05;
    std::optional<std::filesystem::path> limit_out;
    bool require_limit = false;
};

struct CollageFitOptions {
    std::filesystem::path input;
    std::size_t n = 2;
    std::optional<std::uint64_t> seed;
    std::size_t restarts = 8;
    std::size_t max_iters = 200;
    double s_max = 0.95;
    std::optional<unsigned> threshold;
    std::optional<double> resolution;   ///< snap pitch for CSV input
    std::filesystem::path out = "fit.json";
};

struct PredictOptions {
    std::filesystem::path input;        ///< sequence file or directory of frames
    std::string model = "geometric";
    std::size_t horizon = 1;
    std::size_t n = 2;
    std::optional<std::uint64_t> seed;
    std::size_t restarts = 8;
    std::size_t max_iters = 200;
    double s_max = 0.95;
    std::optional<unsigned> threshold;
    std::optional<double> resolution;
    std::optional<std::size_t> depth;
    std::optional<double> delta;
    std::filesystem::path out = "predict_out";
};

// Each command prints its report to `out` and throws the library's error
// types on failure; `run` maps those to exit codes.
void cmd_dist(const DistOptions& o, std::ostream& out);
void cmd_attractor(const AttractorOptions& o, std::ostream& out);
void cmd_analyze(const AnalyzeOptions& o, std::ostream& out);
void cmd_collage_fit(const CollageFitOptions& o, std::ostream& out);
void cmd_predict(const PredictOptions& o, std::ostream& out);

/// Parses argv and dispatches. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ifsseq::cli
