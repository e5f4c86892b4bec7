// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <optional>

#include "nicert/types.hpp"

namespace nicert {

/// Eigendecomposition of a symmetric matrix, eigenvalues in descending order.
struct SymEig {
  Vec values;
  Mat vectors;  // columns match values
};

/// Symmetrizes the input and decomposes it. Reconstruction V diag(w) V^T is
/// accurate to ~1e-10 * ||M||_F for well-scaled inputs.
SymEig sym_eig(const Mat& M);

/// max over real unit vectors a of |a^T X a|. Since a^T X a only sees the
/// symmetric part, this is the largest absolute eigenvalue of (X + X^T)/2.
/// Throws NonSquare.
double numerical_radius(const Mat& X);

/// Euclidean projection of a symmetric matrix onto {S >= 0} or, with a cap,
/// onto {S >= 0, tr S <= cap}: eigenvalues are clipped at zero and then
/// uniformly shifted down (simplex projection) if the trace budget is exceeded.
Mat psd_project(const Mat& M, std::optional<double> trace_cap = std::nullopt);

/// Inverse of [[A11, A12], [A21, A22]] assembled from the blocks:
///   [[A11^-1, 0], [0, 0]] + [A11^-1 A12; -I] (A22 - A21 A11^-1 A12)^-1 [A21 A11^-1, -I].
/// Throws SingularBlock when A11 or the Schur complement is not invertible.
Mat block_inverse(const Mat& A11, const Mat& A12, const Mat& A21, const Mat& A22);

struct LeastSquares {
  Mat solution;     // minimum-norm least-squares A with B * A ~= C
  double residual;  // ||B * A - C||_F
};

/// Minimum-norm least-squares solve of B * A = C (the vectorized Kronecker
/// system I (x) B vec(A) = vec(C)). The residual tells the caller whether an
/// exact solution exists.
LeastSquares kron_vec_solve(const Mat& B, const Mat& C);

/// Moore-Penrose pseudo-inverse with the kPinvCutoff relative threshold.
Mat pinv(const Mat& M);

/// log det of a symmetric positive definite matrix.
double logdet_spd(const Mat& M);

/// Symmetric inverse square root M^(-1/2); requires M positive definite.
Mat inv_sqrt_spd(const Mat& M);

/// Smallest eigenvalue of the symmetrized input.
double min_eigenvalue(const Mat& M);

}  // namespace nicert
