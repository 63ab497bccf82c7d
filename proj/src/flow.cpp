#include "aggseek/flow.hpp"

#include <cmath>
#include <stdexcept>

#include "aggseek/errors.hpp"
#include "aggseek/kernels.hpp"
#include "aggseek/lyapunov.hpp"

namespace aggseek {
namespace {

kernels::BoxArrays box_arrays(const BoxPack& pack) {
    return kernels::BoxArrays{pack.ell, pack.xstar, pack.lo, pack.hi};
}

/// bias[i*n + j] = linear_i[j] + (C sigma)[j]
std::vector<double> tiled_bias(const BoxPack& pack, const Vector& coupling_term) {
    const auto n = static_cast<std::size_t>(coupling_term.size());
    std::vector<double> bias(pack.linear.size());
    for (std::size_t e = 0; e < bias.size(); ++e) bias[e] = pack.linear[e] + coupling_term[static_cast<Eigen::Index>(e % n)];
    return bias;
}

Vector kernel_average(const GameSpec& game, const Vector& x) {
    Vector sums(game.dim());
    kernels::active().strided_sum({x.data(), static_cast<std::size_t>(x.size())},
                                  {sums.data(), static_cast<std::size_t>(sums.size())});
    return sums / static_cast<double>(game.agent_count());
}

void require_feasible(const GameSpec& game, const SystemState& state) {
    check_state_dims(game, state);
    if (!feasible(game, state.x)) throw InfeasibleStateError("state x lies outside the agent sets");
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("integrator: h must be positive");
    if (!(T >= h) || !std::isfinite(T)) throw std::invalid_argument("integrator: T must be at least h");
    if (record_every < 1) throw std::invalid_argument("integrator: record_every must be >= 1");
}

std::size_t IntegratorConfig::step_count() const {
    const double ratio = T / h;
    const double nearest = std::round(ratio);
    if (std::fabs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

Derivative rhs(const GameSpec& game, const SystemState& state) {
    require_feasible(game, state);
    const Eigen::Index n = game.dim();
    const Vector coupling_term = game.coupling() * state.sigma;
    Derivative d{Vector(state.x.size()), game.gain() * (average(game, state.x) - state.sigma)};
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        const Agent& a = game.agent(i);
        const auto xi = agent_block(state.x, i, n);
        const Vector drive = -(grad_f(a.cost, xi) + coupling_term);
        agent_block(d.xdot, i, n) = tangent_project(a.set, xi, drive);
    }
    return d;
}

SystemState step_reference(const GameSpec& game, const SystemState& state, double h) {
    check_state_dims(game, state);
    const Eigen::Index n = game.dim();
    const Vector coupling_term = game.coupling() * state.sigma;
    SystemState next{Vector(state.x.size()), Vector()};
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        const Agent& a = game.agent(i);
        const auto xi = agent_block(state.x, i, n);
        const Vector g = grad_f(a.cost, xi) + coupling_term;
        agent_block(next.x, i, n) = project(a.set, xi - h * g);
    }
    next.sigma = state.sigma + h * game.gain() * (average(game, state.x) - state.sigma);
    return next;
}

SystemState step(const GameSpec& game, const SystemState& state, double h) {
    const BoxPack* pack = game.box_pack();
    if (pack == nullptr) return step_reference(game, state, h);
    check_state_dims(game, state);

    const std::vector<double> bias = tiled_bias(*pack, game.coupling() * state.sigma);
    SystemState next{Vector(state.x.size()), Vector()};
    kernels::active().box_euler_step(box_arrays(*pack), bias, {state.x.data(), static_cast<std::size_t>(state.x.size())},
                                     h, {next.x.data(), static_cast<std::size_t>(next.x.size())});
    next.sigma = state.sigma + h * game.gain() * (kernel_average(game, state.x) - state.sigma);
    return next;
}

double stationarity_residual(const GameSpec& game, const SystemState& state) {
    const BoxPack* pack = game.box_pack();
    if (pack == nullptr) {
        const Derivative d = rhs(game, state);
        return std::max(d.xdot.lpNorm<Eigen::Infinity>(), d.sigmadot.lpNorm<Eigen::Infinity>());
    }
    require_feasible(game, state);
    const std::vector<double> bias = tiled_bias(*pack, game.coupling() * state.sigma);
    const double x_part = kernels::active().box_tangent_drive_norm(
        box_arrays(*pack), bias, {state.x.data(), static_cast<std::size_t>(state.x.size())}, kActivityTol);
    const Vector sigmadot = game.gain() * (kernel_average(game, state.x) - state.sigma);
    return std::max(x_part, sigmadot.lpNorm<Eigen::Infinity>());
}

Trajectory integrate(const GameSpec& game, const SystemState& init, const IntegratorConfig& cfg,
                     const EquilibriumResult* reference) {
    cfg.validate();
    check_state_dims(game, init);
    const std::size_t steps = cfg.step_count();

    Trajectory traj;
    const std::size_t expected = steps / cfg.record_every + 2;
    traj.times.reserve(expected);
    traj.states.reserve(expected);
    traj.residual.reserve(expected);

    auto record = [&](std::size_t index, const SystemState& s) {
        traj.times.push_back(static_cast<double>(index) * cfg.h);
        traj.residual.push_back(stationarity_residual(game, s));
        if (reference != nullptr) {
            traj.W.push_back(lyapunov_W(s, *reference));
            traj.dist_avg.push_back((average(game, s.x) - reference->sigmabar).norm());
            traj.dist_sigma.push_back((s.sigma - reference->sigmabar).norm());
        }
        traj.states.push_back(s);
    };

    SystemState state{project_stacked(game, init.x), init.sigma};
    if (!state.x.allFinite() || !state.sigma.allFinite()) throw NumericalError(0, "non-finite initial state");
    record(0, state);
    for (std::size_t s = 1; s <= steps; ++s) {
        state = step(game, state, cfg.h);
        if (!state.sigma.allFinite() || !state.x.allFinite()) throw NumericalError(s, "non-finite state");
        if (s % cfg.record_every == 0 || s == steps) record(s, state);
    }
    return traj;
}

}  // namespace aggseek
