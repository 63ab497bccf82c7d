#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace aggseek::cli {

/// Stable process exit codes.
enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalFailure = 2 };

struct Options {
    std::string command;
    std::filesystem::path scenario;
    std::vector<double> k;
    std::optional<double> h;
    std::optional<double> T;
    std::optional<double> lambda;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::filesystem::path> json;
    std::size_t record_every = 10;
    double threshold = 1e-2;
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultHorizon = 60.0;

int cmd_check(const Options& opts, std::ostream& out);
int cmd_solve(const Options& opts, std::ostream& out);
int cmd_run(const Options& opts, std::ostream& out);
int cmd_sweep(const Options& opts, std::ostream& out);

/// Parses argv, dispatches, and maps exceptions onto ExitCode values.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// AGGSEEK_THREADS if set and positive, else the hardware concurrency.
[[nodiscard]] std::size_t thread_cap();

}  // namespace aggseek::cli
