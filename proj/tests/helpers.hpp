#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "aggseek/model.hpp"
#include "aggseek/scenario.hpp"

namespace aggseek::testing {

inline Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index j = 0;
    for (double x : v) out[j++] = x;
    return out;
}

inline Matrix scalar_matrix(double c) { return Matrix::Constant(1, 1, c); }

inline ConvexSet unit_box(double lo, double hi) { return ConvexSet::box(vec({lo}), vec({hi})); }

/// n = 1, N = 1, ell = 1.5, xstar = 0.6, linear = 0.5, C = 1, box [0.25, 0.75].
inline GameSpec single_agent_game(double k = 0.6, double lo = 0.25, double hi = 0.75) {
    return GameSpec(scalar_matrix(1.0), k, {Agent{QuadraticCost{1.5, vec({0.6}), vec({0.5})}, unit_box(lo, hi)}});
}

/// The N-agent demand-side game: xstar ~ U[0,1) from splitmix64(seed).
inline GameSpec dsm_game(std::size_t N = 100, double k = 0.6, double c = 1.0, std::uint64_t seed = 42) {
    SplitMix64 rng(seed);
    std::vector<Agent> agents;
    for (std::size_t i = 0; i < N; ++i) {
        agents.push_back(Agent{QuadraticCost{1.5, vec({rng.uniform(0.0, 1.0)}), vec({0.5})}, unit_box(0.25, 0.75)});
    }
    return GameSpec(scalar_matrix(c), k, std::move(agents), seed);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (Eigen::Index j = 0; j < n; ++j) v[j] = u(rng);
    return v;
}

inline ConvexSet random_set(std::mt19937_64& rng, Eigen::Index n, bool allow_ball = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (allow_ball && u(rng) < 0.5) {
        return ConvexSet::ball(random_vector(rng, n, -1.0, 1.0), 0.2 + 1.5 * u(rng));
    }
    Vector lo = random_vector(rng, n, -1.0, 0.5);
    Vector hi = lo + random_vector(rng, n, 0.05, 1.5);
    return ConvexSet::box(std::move(lo), std::move(hi));
}

/// Uniform-ish point in a set.
inline Vector random_member(std::mt19937_64& rng, const ConvexSet& set) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (const Box* b = set.as_box()) {
        Vector x(b->lo.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = b->lo[j] + (b->hi[j] - b->lo[j]) * u(rng);
        return x;
    }
    const Ball* ball = set.as_ball();
    Vector dir = random_vector(rng, ball->center.size(), -1.0, 1.0);
    if (dir.norm() == 0.0) dir[0] = 1.0;
    return ball->center + dir.normalized() * (ball->radius * std::sqrt(u(rng)));
}

/// Point in a set with random activity: interior (with margin), on a face/sphere.
inline Vector random_member_with_activity(std::mt19937_64& rng, const ConvexSet& set) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (const Box* b = set.as_box()) {
        Vector x(b->lo.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double r = u(rng);
            if (r < 0.3) x[j] = b->lo[j];
            else if (r < 0.6) x[j] = b->hi[j];
            else x[j] = b->lo[j] + (b->hi[j] - b->lo[j]) * (0.05 + 0.9 * u(rng));
        }
        return x;
    }
    const Ball* ball = set.as_ball();
    Vector dir = random_vector(rng, ball->center.size(), -1.0, 1.0);
    if (dir.norm() == 0.0) dir[0] = 1.0;
    const double radius = u(rng) < 0.5 ? ball->radius : ball->radius * 0.9 * u(rng);
    return ball->center + dir.normalized() * radius;
}

/// Random game with |C|_2 <= coupling_ratio * ell_min, hence strictly monotone.
inline GameSpec random_game(std::mt19937_64& rng, Eigen::Index n, std::size_t N, bool allow_ball = true,
                            double coupling_ratio = 0.8, double k = -1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Agent> agents;
    double ell_min = 1e300;
    for (std::size_t i = 0; i < N; ++i) {
        const double ell = 1.0 + u(rng);
        ell_min = std::min(ell_min, ell);
        ConvexSet set = random_set(rng, n, allow_ball);
        agents.push_back(Agent{QuadraticCost{ell, random_vector(rng, n, -1.0, 1.5), random_vector(rng, n, -0.5, 0.5)},
                               std::move(set)});
    }
    Matrix C(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) C(r, c) = 2.0 * u(rng) - 1.0;
    Eigen::JacobiSVD<Matrix> svd(C);
    const double norm = svd.singularValues()[0];
    if (norm > 0.0) C *= coupling_ratio * ell_min * u(rng) / norm;
    if (k <= 0.0) k = 0.5 + u(rng);
    return GameSpec(C, k, std::move(agents), 0);
}

inline SystemState random_feasible_state(std::mt19937_64& rng, const GameSpec& game, double sigma_span = 2.0) {
    const Eigen::Index n = game.dim();
    Vector x(n * static_cast<Eigen::Index>(game.agent_count()));
    for (std::size_t i = 0; i < game.agent_count(); ++i) agent_block(x, i, n) = random_member(rng, game.agent(i).set);
    return SystemState{std::move(x), random_vector(rng, n, -sigma_span, sigma_span)};
}

}  // namespace aggseek::testing
