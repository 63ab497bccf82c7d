#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "aggseek/model.hpp"

namespace aggseek {

struct SolverOptions {
    double lambda = 0.5;  ///< relaxation; 1 is the plain Picard iteration
    double tol = 1e-10;   ///< stop once the sup-norm of the sigma update falls below
    std::size_t max_iter = 100000;
};

struct EquilibriumResult {
    Vector xbar;
    Vector sigmabar;  ///< avg(xbar)
    std::size_t iterations = 0;
    double final_update_norm = 0.0;
    double vi_gap_value = 0.0;
    /// Non-fatal diagnostics, e.g. uniqueness not guaranteed.
    std::vector<std::string> warnings;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, EquilibriumResult last)
        : std::runtime_error(what), last_(std::move(last)) {}

    [[nodiscard]] const EquilibriumResult& last_iterate() const noexcept { return last_; }

private:
    EquilibriumResult last_;
};

/// argmin over the agent's set of f_i(y) + (C sigma)^T y. Closed form for the
/// isotropic quadratic: project(xstar - (C sigma + linear) / ell).
[[nodiscard]] Vector best_response(const GameSpec& game, std::size_t i, const VectorCRef& sigma);

/// Stacked best responses of all agents to sigma.
[[nodiscard]] Vector best_response_profile(const GameSpec& game, const VectorCRef& sigma);

/// T(sigma) = avg_i best_response(i, sigma). Its fixed point is the equilibrium aggregate.
[[nodiscard]] Vector aggregation_map(const GameSpec& game, const VectorCRef& sigma);

/// Relaxed fixed-point iteration sigma <- (1 - lambda) sigma + lambda T(sigma)
/// from the average of set centers. Throws NonConvergenceError past max_iter,
/// std::invalid_argument on bad options.
[[nodiscard]] EquilibriumResult solve_equilibrium(const GameSpec& game, const SolverOptions& options = {});

/// max_i max(0, -min_{z in X_i} (z - x_i)^T (grad f_i(x_i) + C avg(x))). Zero iff
/// x solves the variational inequality characterizing aggregative equilibria.
/// Throws InfeasibleStateError if some block is outside its set.
[[nodiscard]] double vi_gap(const GameSpec& game, const Vector& stacked);

struct VerificationReport {
    bool is_equilibrium = false;
    double worst_violation = 0.0;
    std::size_t worst_agent = 0;
};

[[nodiscard]] VerificationReport verify_equilibrium(const GameSpec& game, const Vector& stacked, double tol);

}  // namespace aggseek
