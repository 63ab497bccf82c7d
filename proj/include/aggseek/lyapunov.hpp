#pragma once

#include <cstddef>
#include <optional>

#include "aggseek/equilibrium.hpp"
#include "aggseek/flow.hpp"
#include "aggseek/model.hpp"

namespace aggseek {

struct Condition5 {
    bool holds = false;
    double margin = 0.0;  ///< min{ell, k} - |C|_inf / 2 - k / (2N)
};

/// Sufficient gain condition min{ell, k} > |C|_inf / 2 + k / (2N), with |C|_inf
/// the max absolute row sum.
[[nodiscard]] Condition5 check_condition_5(double ell, double k, const Matrix& C, std::size_t N);

/// Off-diagonal block of M. `paper` is -(C + (k/N) I)/2, the published form;
/// `symmetrized` is (C - (k/N) I)/2, the exact symmetric part of the cross
/// terms in dW/dt.
enum class MVariant { paper, symmetrized };

struct MAssembly {
    Matrix M;                   ///< (nN + n) square
    double lambda_min_dense;    ///< full symmetric eigensolve
    double lambda_min_reduced;  ///< min(ell, eig of the 2n x 2n aggregate block)
};

/// M = [[ell I_{nN}, 1_N (x) B], [(1_N (x) B)^T, k I_n]] with ell = game.ell_min().
[[nodiscard]] MAssembly assemble_M(const GameSpec& game, MVariant variant);

/// Smallest eigenvalue of M without forming it: ell (multiplicity n(N-1), present
/// when N > 1) together with eig([[ell I, sqrt(N) B], [sqrt(N) B^T, k I]]).
[[nodiscard]] double reduced_lambda_min(double ell, double k, const Matrix& C, std::size_t N, MVariant variant);

/// ell + lambda_min(C + C^T) / 2 > 0, which makes the pseudo-gradient strictly monotone.
[[nodiscard]] bool strictly_monotone(const GameSpec& game);

struct CertificateReport {
    bool cond5_holds = false;
    double cond5_margin = 0.0;
    double gershgorin_rhs = 0.0;  ///< |C|_inf / 2 + k / (2N)
    bool prior_holds = false;     ///< ell >= |C|_2
    double prior_margin = 0.0;
    bool strictly_monotone = false;
    double monotone_margin = 0.0;  ///< ell + lambda_min(C + C^T) / 2
    double lambda_min_paper = 0.0;
    double lambda_min_symmetrized = 0.0;
};

[[nodiscard]] CertificateReport compare_conditions(const GameSpec& game);

/// W = |x - xbar|^2 / 2 + |sigma - sigmabar|^2 / 2.
[[nodiscard]] double lyapunov_W(const SystemState& state, const EquilibriumResult& ref);

struct StorageTerms {
    double lhs = 0.0;  ///< (x - xbar)^T Pi_X(x, -grad f(x) + u)
    double rhs = 0.0;  ///< -(x - xbar)^T (grad f(x) - grad f(xbar) - (u - ubar))
    [[nodiscard]] bool holds(double slack = 1e-9) const { return lhs <= rhs + slack; }
};

/// Both sides of the storage-function inequality with ubar = -1_N (x) (C sigmabar).
[[nodiscard]] StorageTerms storage_terms(const GameSpec& game, const SystemState& state, const Vector& u,
                                         const EquilibriumResult& ref);

[[nodiscard]] bool storage_inequality_check(const GameSpec& game, const SystemState& state, const Vector& u,
                                            const EquilibriumResult& ref);

struct DecayReport {
    double W0 = 0.0;
    bool monotone = true;
    double fitted_rate = 0.0;
    /// lambda_min_symmetrized when positive; the Gronwall bound is only checked then.
    std::optional<double> certificate_rate;
    std::optional<bool> certified;
    /// Largest W(t_j) / (W0 exp(-rate t_j)) seen, when certified is evaluated.
    std::optional<double> worst_bound_ratio;
};

inline constexpr double kMonotoneRelTol = 1e-9;
inline constexpr double kGronwallSlack = 1e-2;
inline constexpr double kReferenceTol = 1e-6;

/// W along the trajectory, its monotonicity, a least-squares decay rate of ln W
/// over the window up to the first halving of W, and (when the symmetrized M is
/// positive definite) the check W(t) <= W0 exp(-lambda_min t) (1 + 1e-2).
/// Throws std::invalid_argument for fewer than 10 samples or an unverified reference.
[[nodiscard]] DecayReport decay_report(const Trajectory& traj, const EquilibriumResult& ref,
                                       const CertificateReport& cert);

}  // namespace aggseek
