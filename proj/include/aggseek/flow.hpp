#pragma once

#include <cstddef>
#include <vector>

#include "aggseek/equilibrium.hpp"
#include "aggseek/model.hpp"

namespace aggseek {

struct IntegratorConfig {
    double h = 1e-3;
    double T = 60.0;
    std::size_t record_every = 1;

    /// Throws std::invalid_argument unless h > 0, T >= h, record_every >= 1.
    void validate() const;
    /// ceil(T / h), robust to T/h landing a rounding error above an integer.
    [[nodiscard]] std::size_t step_count() const;
};

struct Derivative {
    Vector xdot;
    Vector sigmadot;
};

/// Right-hand side of the integral dynamics:
///   xdot_i   = Pi_{X_i}(x_i, -grad f_i(x_i) - C sigma)
///   sigmadot = k (avg(x) - sigma)
/// Throws InfeasibleStateError if x leaves the sets.
[[nodiscard]] Derivative rhs(const GameSpec& game, const SystemState& state);

/// One projected forward-Euler step:
///   x_i+ = project_i(x_i - h (grad f_i(x_i) + C sigma)),  sigma+ = sigma + h k (avg(x) - sigma).
/// Uses the SIMD kernels for all-box games.
[[nodiscard]] SystemState step(const GameSpec& game, const SystemState& state, double h);

/// Same step evaluated agent by agent through the geometry primitives.
[[nodiscard]] SystemState step_reference(const GameSpec& game, const SystemState& state, double h);

/// Sup-norm of rhs; zero exactly at equilibria of the dynamics.
[[nodiscard]] double stationarity_residual(const GameSpec& game, const SystemState& state);

struct Trajectory {
    std::vector<double> times;
    std::vector<SystemState> states;
    std::vector<double> residual;
    /// Filled only when integrate() received a reference equilibrium.
    std::vector<double> W;
    std::vector<double> dist_avg;    ///< |avg(x(t)) - sigmabar|
    std::vector<double> dist_sigma;  ///< |sigma(t) - sigmabar|

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool has_reference() const { return !W.empty(); }
};

/// Iterates step() for cfg.step_count() steps from the (projected) initial
/// state, recording every cfg.record_every steps and always the last one.
/// Throws NumericalError carrying the step index on a non-finite state.
[[nodiscard]] Trajectory integrate(const GameSpec& game, const SystemState& init, const IntegratorConfig& cfg,
                                   const EquilibriumResult* reference = nullptr);

}  // namespace aggseek
