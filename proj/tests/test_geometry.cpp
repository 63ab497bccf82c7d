#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "aggseek/errors.hpp"
#include "aggseek/geometry.hpp"
#include "helpers.hpp"

using namespace aggseek;
using namespace aggseek::testing;
using Catch::Approx;

namespace {

// Brute-force projection oracles.
double grid_project_1d(double lo, double hi, double y, double resolution) {
    double best = lo, best_d = std::fabs(lo - y);
    for (double z = lo; z <= hi + 0.5 * resolution; z += resolution) {
        const double zc = std::min(z, hi);
        if (std::fabs(zc - y) < best_d) {
            best_d = std::fabs(zc - y);
            best = zc;
        }
    }
    return best;
}

Vector sampled_ball_projection(const Vector& y, double radius, int samples) {
    Vector best(2);
    double best_d = 1e300;
    for (int s = 0; s < samples; ++s) {
        const double t = 2.0 * std::numbers::pi * s / samples;
        const Vector z = vec({radius * std::cos(t), radius * std::sin(t)});
        const double d = (z - y).norm();
        if (d < best_d) {
            best_d = d;
            best = z;
        }
    }
    return best;
}

Vector limit_tangent(const ConvexSet& set, const Vector& x, const Vector& v, double eps) {
    return (project(set, x + eps * v) - x) / eps;
}

}  // namespace

TEST_CASE("box projection", "[geometry]") {
    const ConvexSet box = unit_box(0.25, 0.75);
    CHECK(project(box, vec({0.5}))[0] == 0.5);
    CHECK(project(box, vec({0.9}))[0] == 0.75);
    CHECK(grid_project_1d(0.25, 0.75, 0.9, 1e-5) == Approx(0.75).margin(1e-5));
    CHECK(project(box, vec({-3.0}))[0] == 0.25);
}

TEST_CASE("ball projection", "[geometry]") {
    const ConvexSet ball = ConvexSet::ball(Vector::Zero(2), 1.0);
    const Vector p = project(ball, vec({3.0, 4.0}));
    CHECK(p[0] == Approx(0.6).epsilon(1e-15));
    CHECK(p[1] == Approx(0.8).epsilon(1e-15));
    const Vector sampled = sampled_ball_projection(vec({3.0, 4.0}), 1.0, 200000);
    CHECK((p - sampled).norm() < 1e-4);
    const Vector inside = vec({0.1, -0.2});
    CHECK(project(ball, inside) == inside);
}

TEST_CASE("tangent and normal cone projections", "[geometry]") {
    const ConvexSet box = unit_box(0.25, 0.75);
    CHECK(tangent_project(box, vec({0.5}), vec({-3.0}))[0] == -3.0);
    CHECK(tangent_project(box, vec({0.25}), vec({-0.225}))[0] == 0.0);
    CHECK(limit_tangent(box, vec({0.25}), vec({-0.225}), 1e-8)[0] == Approx(0.0).margin(1e-12));
    CHECK(normal_project(box, vec({0.25}), vec({-0.225}))[0] == -0.225);
    CHECK(normal_project(box, vec({0.5}), vec({4.0}))[0] == 0.0);

    const ConvexSet ball = ConvexSet::ball(Vector::Zero(2), 1.0);
    const Vector t = tangent_project(ball, vec({1.0, 0.0}), vec({1.0, 1.0}));
    CHECK(t[0] == Approx(0.0).margin(1e-15));
    CHECK(t[1] == Approx(1.0));
    const Vector lim = limit_tangent(ball, vec({1.0, 0.0}), vec({1.0, 1.0}), 1e-8);
    CHECK((t - lim).norm() < 1e-6);
    const Vector nrm = normal_project(ball, vec({1.0, 0.0}), vec({1.0, 1.0}));
    CHECK(nrm[0] == Approx(1.0));
    CHECK(nrm[1] == Approx(0.0).margin(1e-15));
    // Inward direction at the boundary passes through unchanged.
    CHECK(tangent_project(ball, vec({1.0, 0.0}), vec({-1.0, 0.5})) == vec({-1.0, 0.5}));
}

TEST_CASE("construction and precondition errors", "[geometry]") {
    CHECK_THROWS_AS(ConvexSet::box(vec({1.0}), vec({0.0})), std::invalid_argument);
    CHECK_THROWS_AS(ConvexSet::box(vec({0.0, 0.0}), vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(ConvexSet::ball(vec({0.0}), 0.0), std::invalid_argument);
    const ConvexSet box = unit_box(0.25, 0.75);
    CHECK_THROWS_AS(project(box, vec({0.1, 0.2})), DimensionError);
    CHECK_THROWS_AS(tangent_project(box, vec({0.9}), vec({1.0})), InfeasibleStateError);
    CHECK_NOTHROW(tangent_project(box, vec({0.75 + 5e-13}), vec({1.0})));
    // Degenerate box is a single point.
    const ConvexSet point = ConvexSet::box(vec({0.3}), vec({0.3}));
    CHECK(tangent_project(point, vec({0.3}), vec({2.0}))[0] == 0.0);
    CHECK(tangent_project(point, vec({0.3}), vec({-2.0}))[0] == 0.0);
}

TEST_CASE("projection properties on random sets", "[geometry][property]") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = 1 + trial % 3;
        const ConvexSet set = random_set(rng, n);
        const Vector y1 = random_vector(rng, n, -4.0, 4.0);
        const Vector y2 = random_vector(rng, n, -4.0, 4.0);
        const Vector p1 = project(set, y1);
        const Vector p2 = project(set, y2);

        REQUIRE(set.contains(p1));
        const Vector pp = project(set, p1);
        if (set.is_box()) REQUIRE(pp == p1);
        else REQUIRE((pp - p1).norm() <= 1e-12);
        REQUIRE((p1 - p2).norm() <= (y1 - y2).norm() + 1e-12);

        // Variational characterization of the projection: (y - p)^T (z - p) <= 0.
        for (int s = 0; s < 5; ++s) {
            const Vector z = random_member(rng, set);
            REQUIRE((y1 - p1).dot(z - p1) <= 1e-12);
        }
    }
}

TEST_CASE("Moreau decomposition and cone membership", "[geometry][property]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index n = 1 + trial % 3;
        const ConvexSet set = random_set(rng, n);
        const Vector x = random_member_with_activity(rng, set);
        const Vector v = random_vector(rng, n, -3.0, 3.0);
        const Vector t = tangent_project(set, x, v);
        const Vector w = normal_project(set, x, v);

        if (set.is_box()) REQUIRE(t + w == v);
        else REQUIRE((t + w - v).norm() <= 1e-14 * (1.0 + v.norm()));
        REQUIRE(std::fabs(t.dot(w)) <= 1e-9);
        for (int s = 0; s < 100; ++s) {
            const Vector z = random_member(rng, set);
            REQUIRE(w.dot(z - x) <= 1e-9);
        }
    }
}

TEST_CASE("tangent projection matches its limit definition", "[geometry][property]") {
    std::mt19937_64 rng(5);
    const double eps = 1e-8;
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index n = 1 + trial % 3;
        const ConvexSet set = random_set(rng, n);
        const Vector x = random_member_with_activity(rng, set);
        const Vector v = random_vector(rng, n, -2.0, 2.0);
        // Skip points whose active set would change within eps.
        if (const Box* b = set.as_box()) {
            bool stable = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double gap_lo = x[j] - b->lo[j], gap_hi = b->hi[j] - x[j];
                if ((gap_lo > 0 && gap_lo < 10 * eps * std::fabs(v[j])) || (gap_hi > 0 && gap_hi < 10 * eps * std::fabs(v[j])))
                    stable = false;
            }
            if (!stable) continue;
        } else {
            const Ball* ball = set.as_ball();
            const double gap = ball->radius - (x - ball->center).norm();
            if (gap > kActivityTol && gap < 10 * eps * v.norm()) continue;
        }
        REQUIRE((tangent_project(set, x, v) - limit_tangent(set, x, v, eps)).norm() <= 1e-6);
        ++checked;
    }
    CHECK(checked > 1500);
}

TEST_CASE("min_directional matches sampling", "[geometry]") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + trial % 2;
        const ConvexSet set = random_set(rng, n);
        const Vector x = random_member(rng, set);
        const Vector g = random_vector(rng, n, -2.0, 2.0);
        const double closed = min_directional(set, x, g);
        double sampled = 1e300;
        for (int s = 0; s < 2000; ++s) sampled = std::min(sampled, (random_member_with_activity(rng, set) - x).dot(g));
        REQUIRE(closed <= sampled + 1e-12);
        // The minimizer itself is attainable: project far along -g.
        const Vector far = project(set, x - 1e6 * g);
        REQUIRE((far - x).dot(g) == Approx(closed).margin(1e-6));
    }
}
