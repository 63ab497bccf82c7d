#include "aggseek/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aggseek/errors.hpp"

namespace aggseek {

double QuadraticCost::value(const VectorCRef& x) const {
    if (x.size() != xstar.size()) throw DimensionError("cost: point dimension mismatch");
    return 0.5 * ell * (x - xstar).squaredNorm() + linear.dot(x);
}

Vector grad_f(const QuadraticCost& cost, const VectorCRef& x) {
    if (x.size() != cost.xstar.size()) throw DimensionError("grad_f: point dimension mismatch");
    return cost.ell * (x - cost.xstar) + cost.linear;
}

GameSpec::GameSpec(Matrix coupling, double gain, std::vector<Agent> agents, std::uint64_t seed)
    : coupling_(std::move(coupling)), gain_(gain), agents_(std::move(agents)), seed_(seed) {
    const Eigen::Index n = coupling_.rows();
    if (n == 0 || coupling_.cols() != n) throw ScenarioError("C", "must be a nonempty square matrix");
    if (!coupling_.allFinite()) throw ScenarioError("C", "entries must be finite");
    if (!(gain_ > 0.0) || !std::isfinite(gain_)) throw ScenarioError("k", "must be positive");
    if (agents_.empty()) throw ScenarioError("agents", "at least one agent is required");

    ell_min_ = agents_.front().cost.ell;
    bool all_boxes = true;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        const Agent& a = agents_[i];
        const std::string where = "agents[" + std::to_string(i) + "]";
        if (!(a.cost.ell > 0.0) || !std::isfinite(a.cost.ell)) throw ScenarioError(where + ".ell", "must be positive");
        if (a.cost.xstar.size() != n) throw ScenarioError(where + ".xstar", "dimension does not match C");
        if (a.cost.linear.size() != n) throw ScenarioError(where + ".linear", "dimension does not match C");
        if (a.set.dim() != n) throw ScenarioError(where + ".set", "dimension does not match C");
        ell_min_ = std::min(ell_min_, a.cost.ell);
        all_boxes = all_boxes && a.set.is_box();
    }

    if (all_boxes) {
        BoxPack pack;
        const std::size_t total = agents_.size() * static_cast<std::size_t>(n);
        for (auto* v : {&pack.ell, &pack.xstar, &pack.linear, &pack.lo, &pack.hi}) v->reserve(total);
        for (const Agent& a : agents_) {
            const Box* b = a.set.as_box();
            for (Eigen::Index j = 0; j < n; ++j) {
                pack.ell.push_back(a.cost.ell);
                pack.xstar.push_back(a.cost.xstar[j]);
                pack.linear.push_back(a.cost.linear[j]);
                pack.lo.push_back(b->lo[j]);
                pack.hi.push_back(b->hi[j]);
            }
        }
        box_pack_ = std::move(pack);
    }
}

GameSpec GameSpec::with_gain(double gain) const {
    GameSpec copy = *this;
    if (!(gain > 0.0) || !std::isfinite(gain)) throw ScenarioError("k", "must be positive");
    copy.gain_ = gain;
    return copy;
}

void check_state_dims(const GameSpec& game, const SystemState& state) {
    const Eigen::Index n = game.dim();
    if (state.x.size() != n * static_cast<Eigen::Index>(game.agent_count())) {
        throw DimensionError("state: x must hold N*n entries");
    }
    if (state.sigma.size() != n) throw DimensionError("state: sigma must hold n entries");
}

Vector average(const GameSpec& game, const Vector& stacked) {
    const Eigen::Index n = game.dim();
    const auto count = static_cast<Eigen::Index>(game.agent_count());
    if (stacked.size() != n * count) throw DimensionError("avg: stacked vector has wrong size");
    // Column-major reshape: column i is agent i.
    const Eigen::Map<const Matrix> blocks(stacked.data(), n, count);
    return blocks.rowwise().sum() / static_cast<double>(count);
}

Vector project_stacked(const GameSpec& game, const Vector& stacked) {
    const Eigen::Index n = game.dim();
    Vector out(stacked.size());
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        agent_block(out, i, n) = project(game.agent(i).set, agent_block(stacked, i, n));
    }
    return out;
}

Vector stacked_centers(const GameSpec& game) {
    const Eigen::Index n = game.dim();
    Vector out(n * static_cast<Eigen::Index>(game.agent_count()));
    for (std::size_t i = 0; i < game.agent_count(); ++i) agent_block(out, i, n) = game.agent(i).set.center();
    return out;
}

bool feasible(const GameSpec& game, const Vector& stacked, double tol) {
    const Eigen::Index n = game.dim();
    if (stacked.size() != n * static_cast<Eigen::Index>(game.agent_count())) return false;
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        if (!game.agent(i).set.contains(agent_block(stacked, i, n), tol)) return false;
    }
    return true;
}

double cost_J(const GameSpec& game, std::size_t i, const VectorCRef& x, const VectorCRef& sigma) {
    if (x.size() != game.dim() || sigma.size() != game.dim()) throw DimensionError("cost_J: dimension mismatch");
    const Agent& a = game.agent(i);
    if (!a.set.contains(x)) return kInfiniteCost;
    return a.cost.value(x) + (game.coupling() * sigma).dot(x);
}

Vector pseudo_gradient_F(const GameSpec& game, const Vector& stacked) {
    const Eigen::Index n = game.dim();
    const Vector shift = game.coupling() * average(game, stacked);
    Vector out(stacked.size());
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        agent_block(out, i, n) = grad_f(game.agent(i).cost, agent_block(stacked, i, n)) + shift;
    }
    return out;
}

}  // namespace aggseek
