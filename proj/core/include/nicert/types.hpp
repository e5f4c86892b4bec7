// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace nicert {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class ErrorCode {
  DimensionMismatch,
  ZeroDirectLink,
  NonpositivePower,
  NonSquare,
  SingularBlock,
  SingularSigma,
  SingularMiddle,
  NotAZic,
  HypothesisViolated,
  InfeasibleSplit,
  InvalidGenie,
  ParseError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

namespace tol {
// Classification treats X as zero when ||X||_F <= kZero * (1 + scale).
inline constexpr double kZero = 1e-12;
// Singular values below kPinvCutoff * sigma_max are treated as zero.
inline constexpr double kPinvCutoff = 1e-10;
// Certificate ladder: residuals relative 1e-6, eigenvalue margins -1e-6,
// bound gap 1e-6 relative.
inline constexpr double kCertMargin = 1e-6;
// Fixed-point residual for the coupled Sigma equations.
inline constexpr double kRiccatiResidual = 1e-10;
inline constexpr int kRiccatiMaxIters = 10000;
// Eigenvalues below kRankCut * trace count as zero when ranks are reported.
inline constexpr double kRankCut = 1e-6;
}  // namespace tol

}  // namespace nicert
