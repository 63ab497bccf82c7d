#include "aggseek/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aggseek/errors.hpp"
#include "aggseek/linalg.hpp"

namespace aggseek {
namespace {

Matrix off_diagonal_block(double k, const Matrix& C, std::size_t N, MVariant variant) {
    const Matrix scaled_identity = (k / static_cast<double>(N)) * Matrix::Identity(C.rows(), C.cols());
    if (variant == MVariant::paper) return -0.5 * (C + scaled_identity);
    return 0.5 * (C - scaled_identity);
}

}  // namespace

Condition5 check_condition_5(double ell, double k, const Matrix& C, std::size_t N) {
    const double margin =
        std::min(ell, k) - 0.5 * linalg::induced_inf_norm(C) - 0.5 * k / static_cast<double>(N);
    return Condition5{margin > 0.0, margin};
}

MAssembly assemble_M(const GameSpec& game, MVariant variant) {
    const Eigen::Index n = game.dim();
    const std::size_t N = game.agent_count();
    const Eigen::Index xdim = n * static_cast<Eigen::Index>(N);
    const double ell = game.ell_min();
    const double k = game.gain();
    const Matrix B = off_diagonal_block(k, game.coupling(), N, variant);

    MAssembly out;
    out.M = Matrix::Zero(xdim + n, xdim + n);
    out.M.topLeftCorner(xdim, xdim).diagonal().setConstant(ell);
    out.M.bottomRightCorner(n, n).diagonal().setConstant(k);
    for (std::size_t i = 0; i < N; ++i) {
        const Eigen::Index row = static_cast<Eigen::Index>(i) * n;
        out.M.block(row, xdim, n, n) = B;
        out.M.block(xdim, row, n, n) = B.transpose();
    }
    out.lambda_min_dense = linalg::dense_eigenvalues(out.M)[0];
    out.lambda_min_reduced = reduced_lambda_min(ell, k, game.coupling(), N, variant);
    return out;
}

double reduced_lambda_min(double ell, double k, const Matrix& C, std::size_t N, MVariant variant) {
    const Eigen::Index n = C.rows();
    const Matrix B = std::sqrt(static_cast<double>(N)) * off_diagonal_block(k, C, N, variant);
    Matrix R(2 * n, 2 * n);
    R << ell * Matrix::Identity(n, n), B, B.transpose(), k * Matrix::Identity(n, n);
    double lambda = linalg::jacobi_eigenvalues(R)[0];
    if (N > 1) lambda = std::min(lambda, ell);
    return lambda;
}

bool strictly_monotone(const GameSpec& game) {
    const Matrix& C = game.coupling();
    return game.ell_min() + 0.5 * linalg::jacobi_eigenvalues(C + C.transpose())[0] > 0.0;
}

CertificateReport compare_conditions(const GameSpec& game) {
    const Matrix& C = game.coupling();
    const double ell = game.ell_min();
    const double k = game.gain();
    const std::size_t N = game.agent_count();

    CertificateReport r;
    const Condition5 c5 = check_condition_5(ell, k, C, N);
    r.cond5_holds = c5.holds;
    r.cond5_margin = c5.margin;
    r.gershgorin_rhs = 0.5 * linalg::induced_inf_norm(C) + 0.5 * k / static_cast<double>(N);
    r.prior_margin = ell - linalg::spectral_norm(C);
    r.prior_holds = r.prior_margin >= 0.0;
    r.monotone_margin = ell + 0.5 * linalg::jacobi_eigenvalues(C + C.transpose())[0];
    r.strictly_monotone = r.monotone_margin > 0.0;
    r.lambda_min_paper = reduced_lambda_min(ell, k, C, N, MVariant::paper);
    r.lambda_min_symmetrized = reduced_lambda_min(ell, k, C, N, MVariant::symmetrized);
    return r;
}

double lyapunov_W(const SystemState& state, const EquilibriumResult& ref) {
    if (state.x.size() != ref.xbar.size() || state.sigma.size() != ref.sigmabar.size()) {
        throw DimensionError("lyapunov_W: state and reference sizes differ");
    }
    return 0.5 * (state.x - ref.xbar).squaredNorm() + 0.5 * (state.sigma - ref.sigmabar).squaredNorm();
}

StorageTerms storage_terms(const GameSpec& game, const SystemState& state, const Vector& u,
                           const EquilibriumResult& ref) {
    check_state_dims(game, state);
    if (u.size() != state.x.size() || ref.xbar.size() != state.x.size()) {
        throw DimensionError("storage_terms: u and xbar must be stacked like x");
    }
    const Eigen::Index n = game.dim();
    const Vector ubar_block = -(game.coupling() * ref.sigmabar);
    StorageTerms t;
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        const Agent& a = game.agent(i);
        const auto xi = agent_block(state.x, i, n);
        const auto xbar_i = agent_block(ref.xbar, i, n);
        const auto ui = agent_block(u, i, n);
        const Vector gi = grad_f(a.cost, xi);
        const Vector deviation = xi - xbar_i;
        t.lhs += deviation.dot(tangent_project(a.set, xi, -gi + ui));
        t.rhs -= deviation.dot(gi - grad_f(a.cost, xbar_i) - (ui - ubar_block));
    }
    return t;
}

bool storage_inequality_check(const GameSpec& game, const SystemState& state, const Vector& u,
                              const EquilibriumResult& ref) {
    return storage_terms(game, state, u, ref).holds();
}

DecayReport decay_report(const Trajectory& traj, const EquilibriumResult& ref, const CertificateReport& cert) {
    if (traj.size() < 10) throw std::invalid_argument("decay_report: need at least 10 samples");
    if (!(ref.vi_gap_value <= kReferenceTol)) {
        throw std::invalid_argument("decay_report: reference equilibrium is not verified");
    }

    std::vector<double> W(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) W[j] = lyapunov_W(traj.states[j], ref);

    DecayReport rep;
    rep.W0 = W.front();
    // Increases below 1e-9 W0 are rounding at the fixed point, not oscillation.
    const double slack = kMonotoneRelTol * rep.W0;
    for (std::size_t j = 1; j < W.size(); ++j) {
        if (W[j] > W[j - 1] + slack) {
            rep.monotone = false;
            break;
        }
    }

    if (rep.W0 > 0.0) {
        std::size_t end = W.size();
        for (std::size_t j = 1; j < W.size(); ++j) {
            if (W[j] <= 0.5 * rep.W0) {
                end = j + 1;
                break;
            }
        }
        double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
        std::size_t m = 0;
        for (std::size_t j = 0; j < end; ++j) {
            if (!(W[j] > 0.0)) continue;
            const double t = traj.times[j];
            const double y = std::log(W[j]);
            st += t;
            sy += y;
            stt += t * t;
            sty += t * y;
            ++m;
        }
        const double denom = static_cast<double>(m) * stt - st * st;
        if (m >= 2 && denom > 0.0) rep.fitted_rate = -(static_cast<double>(m) * sty - st * sy) / denom;
    }

    if (cert.lambda_min_symmetrized > 0.0) {
        const double rate = cert.lambda_min_symmetrized;
        rep.certificate_rate = rate;
        bool ok = true;
        double worst = 0.0;
        for (std::size_t j = 0; j < W.size(); ++j) {
            const double bound = rep.W0 * std::exp(-rate * traj.times[j]);
            if (W[j] > bound * (1.0 + kGronwallSlack)) ok = false;
            if (bound > 0.0) worst = std::max(worst, W[j] / bound);
        }
        rep.certified = ok;
        rep.worst_bound_ratio = worst;
    }
    return rep;
}

}  // namespace aggseek
