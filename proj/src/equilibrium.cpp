#include "aggseek/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "aggseek/errors.hpp"
#include "aggseek/kernels.hpp"
#include "aggseek/lyapunov.hpp"

namespace aggseek {

Vector best_response(const GameSpec& game, std::size_t i, const VectorCRef& sigma) {
    if (sigma.size() != game.dim()) throw DimensionError("best_response: sigma dimension mismatch");
    const Agent& a = game.agent(i);
    const Vector shift = (game.coupling() * sigma + a.cost.linear) / a.cost.ell;
    return project(a.set, a.cost.xstar - shift);
}

Vector best_response_profile(const GameSpec& game, const VectorCRef& sigma) {
    if (sigma.size() != game.dim()) throw DimensionError("best_response: sigma dimension mismatch");
    const Eigen::Index n = game.dim();
    Vector out(n * static_cast<Eigen::Index>(game.agent_count()));
    if (const BoxPack* pack = game.box_pack()) {
        const Vector coupling_term = game.coupling() * sigma;
        std::vector<double> bias(pack->linear.size());
        for (std::size_t e = 0; e < bias.size(); ++e) {
            bias[e] = pack->linear[e] + coupling_term[static_cast<Eigen::Index>(e % static_cast<std::size_t>(n))];
        }
        kernels::active().box_best_response(kernels::BoxArrays{pack->ell, pack->xstar, pack->lo, pack->hi}, bias,
                                            {out.data(), static_cast<std::size_t>(out.size())});
        return out;
    }
    for (std::size_t i = 0; i < game.agent_count(); ++i) agent_block(out, i, n) = best_response(game, i, sigma);
    return out;
}

Vector aggregation_map(const GameSpec& game, const VectorCRef& sigma) {
    return average(game, best_response_profile(game, sigma));
}

EquilibriumResult solve_equilibrium(const GameSpec& game, const SolverOptions& options) {
    if (!(options.lambda > 0.0 && options.lambda <= 1.0)) {
        throw std::invalid_argument("solve_equilibrium: lambda must lie in (0, 1]");
    }
    if (!(options.tol > 0.0)) throw std::invalid_argument("solve_equilibrium: tol must be positive");

    EquilibriumResult result;
    if (!strictly_monotone(game)) {
        result.warnings.emplace_back(
            "pseudo-gradient is not certified strictly monotone; the equilibrium may not be unique");
    }

    Vector sigma = average(game, stacked_centers(game));
    const bool decoupled = game.coupling().isZero(0.0);
    bool converged = false;
    while (result.iterations < options.max_iter) {
        const Vector mapped = aggregation_map(game, sigma);
        // Without coupling T is constant, so its single value is the fixed point.
        const Vector next = decoupled ? mapped : (1.0 - options.lambda) * sigma + options.lambda * mapped;
        result.final_update_norm = (next - sigma).lpNorm<Eigen::Infinity>();
        sigma = next;
        ++result.iterations;
        if (!sigma.allFinite()) break;
        if (decoupled || result.final_update_norm <= options.tol) {
            converged = true;
            break;
        }
    }

    result.xbar = best_response_profile(game, sigma);
    result.sigmabar = average(game, result.xbar);
    result.vi_gap_value = sigma.allFinite() ? vi_gap(game, result.xbar) : std::nan("");
    if (!converged) {
        throw NonConvergenceError("fixed-point iteration did not reach tol within " +
                                      std::to_string(options.max_iter) + " iterations (last update " +
                                      std::to_string(result.final_update_norm) + ")",
                                  std::move(result));
    }
    return result;
}

double vi_gap(const GameSpec& game, const Vector& stacked) {
    const Eigen::Index n = game.dim();
    if (stacked.size() != n * static_cast<Eigen::Index>(game.agent_count())) {
        throw DimensionError("vi_gap: stacked vector has wrong size");
    }
    if (!feasible(game, stacked, kActivityTol)) throw InfeasibleStateError("vi_gap: point outside the agent sets");
    const Vector F = pseudo_gradient_F(game, stacked);
    double gap = 0.0;
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        const double inner = min_directional(game.agent(i).set, agent_block(stacked, i, n), agent_block(F, i, n));
        gap = std::max(gap, -inner);
    }
    return gap;
}

VerificationReport verify_equilibrium(const GameSpec& game, const Vector& stacked, double tol) {
    const Eigen::Index n = game.dim();
    if (!feasible(game, stacked, kActivityTol)) throw InfeasibleStateError("verify: point outside the agent sets");
    const Vector F = pseudo_gradient_F(game, stacked);
    VerificationReport report;
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        const double violation =
            std::max(0.0, -min_directional(game.agent(i).set, agent_block(stacked, i, n), agent_block(F, i, n)));
        if (violation > report.worst_violation) {
            report.worst_violation = violation;
            report.worst_agent = i;
        }
    }
    report.is_equilibrium = report.worst_violation <= tol;
    return report;
}

}  // namespace aggseek
