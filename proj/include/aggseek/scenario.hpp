#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "aggseek/model.hpp"

namespace aggseek {

/// splitmix64 stream used to expand generator-style agent blocks.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// z / 2^64 mapped affinely onto [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next()) * 0x1p-64;
        return lo + (hi - lo) * u;
    }

private:
    std::uint64_t state_;
};

struct Scenario {
    GameSpec game;
    /// Initial state, already projected onto the agent sets.
    SystemState initial;
};

/// Parses a JSON scenario document. Throws ScenarioError naming the bad field.
[[nodiscard]] Scenario load_scenario(std::string_view document);
[[nodiscard]] Scenario load_scenario_file(const std::filesystem::path& path);

/// x_i = project(xstar_i), sigma = 0.
[[nodiscard]] SystemState default_initial_state(const GameSpec& game);

}  // namespace aggseek
