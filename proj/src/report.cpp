#include "aggseek/report.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace aggseek {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_vector(const Vector& v) {
    std::string out = "[";
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (j > 0) out += ", ";
        out += format_real(v[j]);
    }
    return out + "]";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    if (!traj.has_reference()) throw std::invalid_argument("csv: trajectory has no reference diagnostics");
    out << "t,dist_avg,dist_sigma,W,residual\n";
    for (std::size_t j = 0; j < traj.size(); ++j) {
        out << format_real(traj.times[j]) << ',' << format_real(traj.dist_avg[j]) << ','
            << format_real(traj.dist_sigma[j]) << ',' << format_real(traj.W[j]) << ','
            << format_real(traj.residual[j]) << '\n';
    }
}

std::optional<double> time_to_threshold(const std::vector<double>& times, const std::vector<double>& values,
                                        double threshold) {
    if (times.size() != values.size()) throw std::invalid_argument("time_to_threshold: size mismatch");
    std::optional<double> hit;
    for (std::size_t j = values.size(); j-- > 0;) {
        if (!(values[j] <= threshold)) break;
        hit = times[j];
    }
    return hit;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash) {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

void Report::add(std::string key, std::string value, bool quoted) {
    entries_.emplace_back(std::move(key), std::move(value));
    kinds_.push_back(Kind{quoted});
}
void Report::add(std::string key, double value) { add(std::move(key), format_real(value)); }
void Report::add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
void Report::add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
void Report::add(std::string key, const Vector& value) { add(std::move(key), format_vector(value)); }
void Report::add(std::string key, const std::optional<double>& value) {
    if (value) add(std::move(key), *value);
    else add(std::move(key), std::string("none"));
}

void Report::print(std::ostream& out) const {
    for (const auto& [key, value] : entries_) out << key << " = " << value << '\n';
}

std::string Report::to_json() const {
    nlohmann::json doc = nlohmann::json::object();
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        const auto& [key, value] = entries_[e];
        std::string pointer = "/";
        for (char c : key) pointer += (c == '.') ? '/' : c;
        nlohmann::json parsed;
        if (kinds_[e].quoted || value == "none") {
            parsed = kinds_[e].quoted ? nlohmann::json(value) : nlohmann::json(nullptr);
        } else {
            parsed = nlohmann::json::parse(value, nullptr, false);
            if (parsed.is_discarded()) parsed = value;
        }
        doc[nlohmann::json::json_pointer(pointer)] = parsed;
    }
    return doc.dump(2);
}

std::optional<std::string> Report::find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

}  // namespace aggseek
