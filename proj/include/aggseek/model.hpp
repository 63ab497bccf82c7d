#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "aggseek/geometry.hpp"

namespace aggseek {

/// f(x) = 1/2 ell |x - xstar|^2 + linear^T x, ell-strongly convex.
struct QuadraticCost {
    double ell = 1.0;
    Vector xstar;
    Vector linear;

    [[nodiscard]] double value(const VectorCRef& x) const;
};

/// ell (x - xstar) + linear. Throws DimensionError on size mismatch.
[[nodiscard]] Vector grad_f(const QuadraticCost& cost, const VectorCRef& x);

struct Agent {
    QuadraticCost cost;
    ConvexSet set;
};

/// Structure-of-arrays copy of an all-box game, agent-major (element i*n + j is
/// coordinate j of agent i). Feeds the SIMD kernels.
struct BoxPack {
    std::vector<double> ell;  // replicated per coordinate
    std::vector<double> xstar;
    std::vector<double> linear;
    std::vector<double> lo;
    std::vector<double> hi;
};

/// An aggregative game with N agents deciding in R^n, costs
/// J_i(x, sigma) = f_i(x) + (C sigma)^T x restricted to the agent's set,
/// and integral gain k for the broadcast signal. Immutable once built.
class GameSpec {
public:
    /// Validates dimensions, ell > 0, k > 0; throws ScenarioError on violation.
    GameSpec(Matrix coupling, double gain, std::vector<Agent> agents, std::uint64_t seed = 0);

    [[nodiscard]] Eigen::Index dim() const { return coupling_.rows(); }
    [[nodiscard]] std::size_t agent_count() const { return agents_.size(); }
    [[nodiscard]] const Matrix& coupling() const { return coupling_; }
    [[nodiscard]] double gain() const { return gain_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] const std::vector<Agent>& agents() const { return agents_; }
    [[nodiscard]] const Agent& agent(std::size_t i) const { return agents_.at(i); }

    /// Game-level strong convexity modulus: min over agents of ell.
    [[nodiscard]] double ell_min() const { return ell_min_; }

    /// Non-null iff every agent set is a box.
    [[nodiscard]] const BoxPack* box_pack() const { return box_pack_ ? &*box_pack_ : nullptr; }

    /// Same game with a different integral gain.
    [[nodiscard]] GameSpec with_gain(double gain) const;

private:
    Matrix coupling_;
    double gain_;
    std::vector<Agent> agents_;
    std::uint64_t seed_;
    double ell_min_;
    std::optional<BoxPack> box_pack_;
};

/// Stacked decisions x = col(x_1, ..., x_N) and the broadcast signal sigma.
struct SystemState {
    Vector x;
    Vector sigma;
};

/// Segment of a stacked vector belonging to agent i.
inline auto agent_block(Vector& stacked, std::size_t i, Eigen::Index n) {
    return stacked.segment(static_cast<Eigen::Index>(i) * n, n);
}
inline auto agent_block(const Vector& stacked, std::size_t i, Eigen::Index n) {
    return stacked.segment(static_cast<Eigen::Index>(i) * n, n);
}

/// avg(x) = (1/N) sum_i x_i.
[[nodiscard]] Vector average(const GameSpec& game, const Vector& stacked);

/// Throws DimensionError unless x has N*n entries and sigma has n.
void check_state_dims(const GameSpec& game, const SystemState& state);

/// Projects every agent block onto its set.
[[nodiscard]] Vector project_stacked(const GameSpec& game, const Vector& stacked);

/// Stacked set centers.
[[nodiscard]] Vector stacked_centers(const GameSpec& game);

/// Every block inside its set (within tol)?
[[nodiscard]] bool feasible(const GameSpec& game, const Vector& stacked, double tol = kMembershipTol);

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// J_i(x, sigma); kInfiniteCost when x lies outside the agent's set.
[[nodiscard]] double cost_J(const GameSpec& game, std::size_t i, const VectorCRef& x, const VectorCRef& sigma);

/// Pseudo-gradient F(x)_i = grad f_i(x_i) + C avg(x).
[[nodiscard]] Vector pseudo_gradient_F(const GameSpec& game, const Vector& stacked);

}  // namespace aggseek
