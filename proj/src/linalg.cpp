#include "aggseek/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aggseek::linalg {

Vector jacobi_eigenvalues(const Matrix& symmetric, double tol, int max_sweeps) {
    if (symmetric.rows() != symmetric.cols()) throw std::invalid_argument("jacobi: matrix must be square");
    Matrix a = 0.5 * (symmetric + symmetric.transpose());
    const Eigen::Index n = a.rows();
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        }
        if (std::sqrt(off) <= tol * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle that annihilates a(p,q); t is the smaller root.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = c * arp - s * arq;
                    a(r, q) = s * arp + c * arq;
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double apr = a(p, r);
                    const double aqr = a(q, r);
                    a(p, r) = c * apr - s * aqr;
                    a(q, r) = s * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    Vector eig = a.diagonal();
    std::sort(eig.begin(), eig.end());
    return eig;
}

Vector dense_eigenvalues(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolve did not converge");
    return solver.eigenvalues();
}

double induced_inf_norm(const Matrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

double spectral_norm(const Matrix& a) {
    // sqrt of the largest eigenvalue of A^T A.
    const Vector eig = jacobi_eigenvalues(a.transpose() * a);
    return std::sqrt(std::max(eig[eig.size() - 1], 0.0));
}

}  // namespace aggseek::linalg
