#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aggseek/flow.hpp"

namespace aggseek {

/// %.17g: enough digits to round-trip a double.
[[nodiscard]] std::string format_real(double v);
[[nodiscard]] std::string format_vector(const Vector& v);

/// Header `t,dist_avg,dist_sigma,W,residual`, one row per sample.
/// Throws std::invalid_argument if the trajectory carries no reference diagnostics.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Earliest sample time from which `values` stays at or below `threshold`.
[[nodiscard]] std::optional<double> time_to_threshold(const std::vector<double>& times,
                                                      const std::vector<double>& values, double threshold);

/// FNV-1a, 64 bit.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

/// Ordered `key = value` report; dotted keys nest in the JSON dump.
class Report {
public:
    void add(std::string key, std::string value, bool quoted = false);
    void add(std::string key, double value);
    void add(std::string key, bool value);
    void add(std::string key, std::size_t value);
    void add(std::string key, const Vector& value);
    void add(std::string key, const std::optional<double>& value);

    void print(std::ostream& out) const;
    [[nodiscard]] std::string to_json() const;

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    /// Raw (unformatted) value for a key, or nullopt.
    [[nodiscard]] std::optional<std::string> find(std::string_view key) const;

private:
    struct Kind { bool quoted; };
    std::vector<std::pair<std::string, std::string>> entries_;
    std::vector<Kind> kinds_;
};

}  // namespace aggseek
