#pragma once

#include "aggseek/geometry.hpp"

namespace aggseek::linalg {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Meant for the small blocks used in certificates; O(n^3) per sweep.
[[nodiscard]] Vector jacobi_eigenvalues(const Matrix& symmetric, double tol = 1e-15, int max_sweeps = 100);

/// Eigenvalues of a symmetric matrix via a tridiagonal QR eigensolver, ascending.
[[nodiscard]] Vector dense_eigenvalues(const Matrix& symmetric);

/// Induced infinity norm: max absolute row sum.
[[nodiscard]] double induced_inf_norm(const Matrix& a);

/// Spectral norm (largest singular value).
[[nodiscard]] double spectral_norm(const Matrix& a);

}  // namespace aggseek::linalg
