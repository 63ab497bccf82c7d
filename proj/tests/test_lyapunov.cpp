#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "aggseek/equilibrium.hpp"
#include "aggseek/flow.hpp"
#include "aggseek/linalg.hpp"
#include "aggseek/lyapunov.hpp"
#include "helpers.hpp"

using namespace aggseek;
using namespace aggseek::testing;
using Catch::Approx;

namespace {

GameSpec uniform_game(std::size_t N, double ell, double k, const Matrix& C) {
    std::vector<Agent> agents;
    const Eigen::Index n = C.rows();
    for (std::size_t i = 0; i < N; ++i) {
        agents.push_back(Agent{QuadraticCost{ell, Vector::Constant(n, 0.5), Vector::Zero(n)},
                               ConvexSet::box(Vector::Zero(n), Vector::Ones(n))});
    }
    return GameSpec(C, k, std::move(agents));
}

/// Reduced 2x2 closed form for n = 1: eigenvalues of [[ell, sqrt(N) b], [sqrt(N) b, k]].
double closed_form_lambda(double ell, double k, double b, std::size_t N) {
    const double mean = 0.5 * (ell + k);
    const double half = 0.5 * (ell - k);
    const double lam = mean - std::sqrt(half * half + static_cast<double>(N) * b * b);
    return N > 1 ? std::min(lam, ell) : lam;
}

}  // namespace

TEST_CASE("gain condition margins", "[lyapunov]") {
    const Condition5 a = check_condition_5(1.5, 0.6, scalar_matrix(1.0), 100);
    CHECK(a.holds);
    CHECK(std::fabs(a.margin - 0.097) <= 1e-12);
    const Condition5 b = check_condition_5(1.5, 0.2, scalar_matrix(1.0), 100);
    CHECK_FALSE(b.holds);
    CHECK(std::fabs(b.margin - -0.301) <= 1e-12);
    const Condition5 c = check_condition_5(1.0, 1.0, scalar_matrix(0.0), 2);
    CHECK(c.holds);
    CHECK(c.margin == 0.75);
    Matrix m(2, 2);
    m << 1.0, -1.0, 0.5, 0.0;  // |C|_inf = 2
    CHECK(check_condition_5(3.0, 3.0, m, 3).margin == Approx(3.0 - 1.0 - 0.5).epsilon(1e-15));
}

TEST_CASE("gain condition margin is nondecreasing in N", "[lyapunov][property]") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix C = Matrix::Constant(1, 1, random_vector(rng, 1, -2, 2)[0]);
        const double ell = random_vector(rng, 1, 0.1, 3)[0];
        const double k = random_vector(rng, 1, 0.1, 3)[0];
        double prev = check_condition_5(ell, k, C, 1).margin;
        for (std::size_t N = 2; N <= 200; ++N) {
            const double cur = check_condition_5(ell, k, C, N).margin;
            REQUIRE(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("M matrix examples", "[lyapunov]") {
    const MAssembly five = assemble_M(uniform_game(5, 1.5, 0.6, scalar_matrix(0.1)), MVariant::symmetrized);
    CHECK(five.M.rows() == 6);
    CHECK(five.M(0, 5) == Approx(-0.01).epsilon(1e-14));
    CHECK(five.M(5, 5) == 0.6);
    const double expect5 = 1.05 - std::sqrt(0.2025 + 5.0 * 1e-4);
    CHECK(std::fabs(five.lambda_min_reduced - expect5) <= 1e-12);
    CHECK(std::fabs(five.lambda_min_dense - expect5) <= 1e-10);
    CHECK(five.lambda_min_reduced == Approx(0.59944).margin(1e-5));

    const GameSpec dsm = dsm_game(100, 0.6);
    const MAssembly big = assemble_M(dsm, MVariant::symmetrized);
    const double expect100 = 1.05 - std::sqrt(0.2025 + 100.0 * 0.497 * 0.497);
    CHECK(std::fabs(big.lambda_min_reduced - expect100) <= 1e-12);
    CHECK(std::fabs(big.lambda_min_dense - expect100) <= 1e-10);
    CHECK(big.lambda_min_reduced == Approx(-3.93).margin(0.05));

    for (MVariant v : {MVariant::paper, MVariant::symmetrized}) {
        const MAssembly z = assemble_M(uniform_game(2, 1.0, 1.0, scalar_matrix(0.0)), v);
        CHECK(std::fabs(std::fabs(z.M(0, 2)) - 0.25) <= 1e-15);
        CHECK(std::fabs(z.lambda_min_reduced - (1.0 - std::sqrt(0.125))) <= 1e-12);
        CHECK(std::fabs(z.lambda_min_dense - (1.0 - std::sqrt(0.125))) <= 1e-10);
    }
    // The published variant for the five-agent game: b = -(0.1 + 0.12) / 2.
    const MAssembly paper5 = assemble_M(uniform_game(5, 1.5, 0.6, scalar_matrix(0.1)), MVariant::paper);
    CHECK(std::fabs(paper5.lambda_min_reduced - closed_form_lambda(1.5, 0.6, -0.11, 5)) <= 1e-12);
}

TEST_CASE("dense and reduced spectra agree on random games", "[lyapunov][property]") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 3;
        const std::size_t N = 2 + static_cast<std::size_t>(trial) % 49;
        const GameSpec game = random_game(rng, n, N, true, 3.0);
        for (MVariant v : {MVariant::paper, MVariant::symmetrized}) {
            const MAssembly m = assemble_M(game, v);
            REQUIRE(std::fabs(m.lambda_min_dense - m.lambda_min_reduced) <= 1e-10);
            // Perturbation bound on the aggregate block.
            Matrix B = v == MVariant::paper
                           ? Matrix(-0.5 * (game.coupling() + (game.gain() / N) * Matrix::Identity(n, n)))
                           : Matrix(0.5 * (game.coupling() - (game.gain() / N) * Matrix::Identity(n, n)));
            const double bound = std::min(game.ell_min(), game.gain()) -
                                 std::sqrt(static_cast<double>(N)) * linalg::spectral_norm(B);
            REQUIRE(m.lambda_min_reduced >= bound - 1e-12);
        }
    }
}

TEST_CASE("compare_conditions", "[lyapunov]") {
    const CertificateReport dsm = compare_conditions(dsm_game(100, 0.6));
    CHECK(dsm.cond5_holds);
    CHECK(std::fabs(dsm.cond5_margin - 0.097) <= 1e-12);
    CHECK(dsm.prior_holds);
    CHECK(dsm.prior_margin == Approx(0.5).epsilon(1e-14));
    CHECK(dsm.strictly_monotone);
    CHECK(dsm.monotone_margin == Approx(2.5).epsilon(1e-14));
    CHECK(dsm.gershgorin_rhs == Approx(0.503).epsilon(1e-14));
    CHECK(dsm.lambda_min_symmetrized < 0.0);

    const CertificateReport weak = compare_conditions(uniform_game(100, 0.9, 0.6, scalar_matrix(1.0)));
    CHECK_FALSE(weak.prior_holds);
    CHECK(weak.prior_margin == Approx(-0.1).epsilon(1e-13));
    CHECK(weak.cond5_holds);
    CHECK(std::fabs(weak.cond5_margin - 0.097) <= 1e-12);

    const CertificateReport neg = compare_conditions(uniform_game(3, 1.5, 0.6, scalar_matrix(-2.0)));
    CHECK_FALSE(neg.strictly_monotone);
    CHECK(neg.monotone_margin == Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("Lyapunov function", "[lyapunov]") {
    EquilibriumResult ref;
    ref.xbar = vec({0.25});
    ref.sigmabar = vec({0.25});
    CHECK(lyapunov_W(SystemState{vec({0.25}), vec({0.25})}, ref) == 0.0);
    CHECK(lyapunov_W(SystemState{vec({0.5}), vec({0.5})}, ref) == 0.0625);
    // Quadratic in the deviation: doubling it multiplies W by four.
    CHECK(lyapunov_W(SystemState{vec({0.75}), vec({0.75})}, ref) == 4.0 * 0.0625);
    CHECK_THROWS(lyapunov_W(SystemState{vec({0.5, 0.1}), vec({0.5})}, ref));
}

TEST_CASE("storage inequality", "[lyapunov]") {
    const GameSpec g = single_agent_game();
    const EquilibriumResult ref = solve_equilibrium(g);
    // Interior state with u = -C sigma: Pi is the identity and only the strong-convexity slack remains.
    const SystemState interior{vec({0.5}), vec({0.3})};
    const StorageTerms t = storage_terms(g, interior, vec({-0.3}), ref);
    const double deviation = 0.5 - ref.xbar[0];
    const double drive = -(1.5 * (0.5 - 0.6) + 0.5) - 0.3;
    CHECK(t.lhs == Approx(deviation * drive).epsilon(1e-14));
    CHECK(t.holds());

    // Active lower bound driven outward: the left side vanishes.
    const SystemState active{vec({0.25}), vec({0.5})};
    const StorageTerms a = storage_terms(g, active, vec({-0.5}), ref);
    CHECK(a.lhs == 0.0);
    CHECK(storage_inequality_check(g, active, vec({-0.5}), ref));
}

TEST_CASE("storage inequality on random states", "[lyapunov][property]") {
    const GameSpec dsm = dsm_game(100, 0.6);
    const EquilibriumResult ref = solve_equilibrium(dsm);
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        SystemState s = random_feasible_state(rng, dsm);
        if (trial % 3 == 0) {
            for (Eigen::Index e = 0; e < s.x.size(); e += 2) s.x[e] = (e / 2) % 2 == 0 ? 0.25 : 0.75;
        }
        const Vector u = Vector::Constant(s.x.size(), -(dsm.coupling() * s.sigma)[0]);
        REQUIRE(storage_inequality_check(dsm, s, u, ref));
    }
    for (int trial = 0; trial < 200; ++trial) {
        const GameSpec g = random_game(rng, 1 + trial % 3, 2 + static_cast<std::size_t>(trial % 20), true);
        const EquilibriumResult r = solve_equilibrium(g);
        const SystemState s = random_feasible_state(rng, g);
        const Vector u = random_vector(rng, s.x.size(), -2.0, 2.0);
        REQUIRE(storage_inequality_check(g, s, u, r));
    }
}

TEST_CASE("decay report", "[lyapunov]") {
    SECTION("certified five-agent game") {
        const GameSpec g = dsm_game(5, 0.6, 0.1, 7);
        const EquilibriumResult ref = solve_equilibrium(g);
        const CertificateReport cert = compare_conditions(g);
        const SystemState init{stacked_centers(g), vec({1.0})};
        const Trajectory traj = integrate(g, init, IntegratorConfig{1e-3, 20.0, 10}, &ref);
        const DecayReport d = decay_report(traj, ref, cert);
        REQUIRE(d.certificate_rate.has_value());
        CHECK(*d.certificate_rate == Approx(0.59944).margin(1e-5));
        REQUIRE(d.certified.has_value());
        CHECK(*d.certified);
        CHECK(*d.worst_bound_ratio <= 1.01);
        CHECK(d.monotone);
        CHECK(d.fitted_rate > 0.0);
    }
    SECTION("demand-side game is not certified but converges") {
        const GameSpec g = dsm_game(100, 0.6);
        const EquilibriumResult ref = solve_equilibrium(g);
        const Trajectory traj = integrate(g, default_initial_state(g), IntegratorConfig{1e-3, 20.0, 50}, &ref);
        const DecayReport d = decay_report(traj, ref, compare_conditions(g));
        CHECK_FALSE(d.certificate_rate.has_value());
        CHECK_FALSE(d.certified.has_value());
        CHECK(std::isfinite(d.fitted_rate));
        CHECK(d.fitted_rate > 0.0);
    }
    SECTION("trajectory frozen at the equilibrium") {
        const GameSpec g = single_agent_game();
        const EquilibriumResult ref = solve_equilibrium(g);
        const Trajectory traj = integrate(g, SystemState{ref.xbar, ref.sigmabar}, IntegratorConfig{1e-2, 1.0, 1}, &ref);
        const DecayReport d = decay_report(traj, ref, compare_conditions(g));
        CHECK(d.W0 == 0.0);
        CHECK(d.monotone);
        for (double w : traj.W) CHECK(w == 0.0);
    }
    SECTION("gain 50 is certified, W decays monotonically") {
        // The aggregate block [[1.5, 2.5], [2.5, 50]] is positive definite.
        const GameSpec g = dsm_game(100, 50.0);
        const EquilibriumResult ref = solve_equilibrium(g);
        const CertificateReport cert = compare_conditions(g);
        CHECK(cert.lambda_min_symmetrized == Approx(25.75 - std::sqrt(24.25 * 24.25 + 6.25)).epsilon(1e-12));
        const Trajectory traj = integrate(g, default_initial_state(g), IntegratorConfig{1e-3, 20.0, 10}, &ref);
        const DecayReport d = decay_report(traj, ref, cert);
        CHECK(d.monotone);
        REQUIRE(d.certified.has_value());
        CHECK(*d.certified);
    }
    SECTION("gain past the Euler overshoot flags non-monotone W") {
        // h k = 1.9: the discrete sigma update overshoots and alternates sign.
        const GameSpec g = dsm_game(100, 1900.0);
        const EquilibriumResult ref = solve_equilibrium(g);
        const Trajectory traj = integrate(g, default_initial_state(g), IntegratorConfig{1e-3, 20.0, 1}, &ref);
        const DecayReport d = decay_report(traj, ref, compare_conditions(g));
        CHECK_FALSE(d.monotone);
        CHECK(traj.dist_avg.back() <= 1e-4);
    }
    SECTION("input validation") {
        const GameSpec g = single_agent_game();
        EquilibriumResult ref = solve_equilibrium(g);
        const Trajectory shortt = integrate(g, SystemState{vec({0.5}), vec({0.5})}, IntegratorConfig{1e-2, 0.05, 1}, &ref);
        CHECK_THROWS_AS(decay_report(shortt, ref, compare_conditions(g)), std::invalid_argument);
        const Trajectory t = integrate(g, SystemState{vec({0.5}), vec({0.5})}, IntegratorConfig{1e-2, 1.0, 1}, &ref);
        ref.vi_gap_value = 1.0;
        CHECK_THROWS_AS(decay_report(t, ref, compare_conditions(g)), std::invalid_argument);
    }
}
