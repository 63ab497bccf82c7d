#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aggseek {

/// Operand sizes disagree with the game dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point that must lie in a constraint set does not (beyond tolerance).
class InfeasibleStateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or inconsistent scenario input. `field()` names the offending key.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Integration produced a non-finite state.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::size_t step, const std::string& what)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace aggseek
