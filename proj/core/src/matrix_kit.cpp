// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/matrix_kit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace nicert {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroDirectLink: return "ZeroDirectLink";
    case ErrorCode::NonpositivePower: return "NonpositivePower";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::SingularMiddle: return "SingularMiddle";
    case ErrorCode::NotAZic: return "NotAZic";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InfeasibleSplit: return "InfeasibleSplit";
    case ErrorCode::InvalidGenie: return "InvalidGenie";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

SymEig sym_eig(const Mat& M) {
  Mat sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const auto n = sym.rows();
  SymEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  (void)n;
  return out;
}

double numerical_radius(const Mat& X) {
  if (X.rows() != X.cols()) {
    throw Error(ErrorCode::NonSquare, "numerical_radius needs a square matrix");
  }
  if (X.size() == 0) return 0.0;
  SymEig e = sym_eig(X);
  return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
}

Mat psd_project(const Mat& M, std::optional<double> trace_cap) {
  SymEig e = sym_eig(M);
  Vec w = e.values.cwiseMax(0.0);
  if (trace_cap && w.sum() > *trace_cap) {
    const double cap = std::max(*trace_cap, 0.0);
    // w is descending; find the water level tau with sum max(w_i - tau, 0) = cap
    double cumsum = 0.0;
    double tau = 0.0;
    for (int i = 0; i < w.size(); ++i) {
      cumsum += w(i);
      const double t = (cumsum - cap) / (i + 1);
      if (w(i) - t > 0) tau = t;
    }
    w = (w.array() - tau).cwiseMax(0.0);
  }
  return e.vectors * w.asDiagonal() * e.vectors.transpose();
}

namespace {

bool invertible(const Eigen::FullPivLU<Mat>& lu, const Mat& M) {
  if (M.size() == 0) return true;
  const double scale = M.cwiseAbs().maxCoeff();
  Eigen::FullPivLU<Mat> copy = lu;
  copy.setThreshold(1e-12 * std::max(1.0, scale));
  return copy.isInvertible();
}

}  // namespace

Mat block_inverse(const Mat& A11, const Mat& A12, const Mat& A21, const Mat& A22) {
  if (A11.rows() != A11.cols() || A22.rows() != A22.cols() ||
      A12.rows() != A11.rows() || A12.cols() != A22.cols() ||
      A21.rows() != A22.rows() || A21.cols() != A11.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "block_inverse: inconsistent block shapes");
  }
  Eigen::FullPivLU<Mat> lu11(A11);
  if (!invertible(lu11, A11)) {
    throw Error(ErrorCode::SingularBlock, "block_inverse: A11 singular");
  }
  const Mat A11inv = lu11.inverse();
  const Mat schur = A22 - A21 * A11inv * A12;
  Eigen::FullPivLU<Mat> lus(schur);
  if (!invertible(lus, schur)) {
    throw Error(ErrorCode::SingularBlock, "block_inverse: Schur complement singular");
  }
  const Mat schur_inv = lus.inverse();

  const auto n1 = A11.rows();
  const auto n2 = A22.rows();
  Mat out = Mat::Zero(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = A11inv;
  Mat left(n1 + n2, n2);
  left.topRows(n1) = A11inv * A12;
  left.bottomRows(n2) = -Mat::Identity(n2, n2);
  Mat right(n2, n1 + n2);
  right.leftCols(n1) = A21 * A11inv;
  right.rightCols(n2) = -Mat::Identity(n2, n2);
  out += left * schur_inv * right;
  return out;
}

Mat pinv(const Mat& M) {
  if (M.size() == 0) return M.transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cut = tol::kPinvCutoff * (s.size() > 0 ? s(0) : 0.0);
  Vec sinv = Vec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > cut) sinv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

LeastSquares kron_vec_solve(const Mat& B, const Mat& C) {
  if (B.rows() != C.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "kron_vec_solve: B and C row counts differ");
  }
  LeastSquares out;
  out.solution = pinv(B) * C;
  out.residual = (B * out.solution - C).norm();
  return out;
}

double logdet_spd(const Mat& M) {
  Mat sym = 0.5 * (M + M.transpose());
  Eigen::LLT<Mat> llt(sym);
  if (llt.info() == Eigen::Success) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
  // near-singular fallback
  SymEig e = sym_eig(sym);
  double acc = 0.0;
  for (int i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= 0.0) {
      throw Error(ErrorCode::SingularBlock, "logdet_spd: matrix not positive definite");
    }
    acc += std::log(e.values(i));
  }
  return acc;
}

Mat inv_sqrt_spd(const Mat& M) {
  SymEig e = sym_eig(M);
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw Error(ErrorCode::SingularBlock, "inv_sqrt_spd: matrix not positive definite");
  }
  return e.vectors * e.values.cwiseSqrt().cwiseInverse().asDiagonal() * e.vectors.transpose();
}

double min_eigenvalue(const Mat& M) {
  if (M.size() == 0) return 0.0;
  SymEig e = sym_eig(M);
  return e.values(e.values.size() - 1);
}

}  // namespace nicert
