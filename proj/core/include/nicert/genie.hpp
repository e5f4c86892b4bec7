// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include "nicert/tin.hpp"

namespace nicert {

/// Side-information parameters: receiver i additionally observes
/// F_i x_i + n_i where [z_i; n_i] ~ N(0, E_i), E_i = [[I, A_i], [A_i^T, Sigma_i]].
/// A1: r1 x r2, Sigma1: r2 x r2, A2: r2 x r1, Sigma2: r1 x r1.
struct GenieParameters {
  Mat A1, A2, Sigma1, Sigma2;
};

struct GenieValidation {
  double e1_margin = 0.0;      // lambda_min(Sigma_1 - A_1^T A_1), must be > 0
  double e2_margin = 0.0;
  double sigma1_margin = 0.0;  // lambda_min(I - A_2 Sigma_2^-1 A_2^T - Sigma_1)
  double sigma2_margin = 0.0;

  bool ok() const {
    return e1_margin >= 1e-9 && e2_margin >= 1e-9 && sigma1_margin >= -1e-9 &&
           sigma2_margin >= -1e-9;
  }
};

/// Condition margins for a genie against a channel's dimensions.
/// Throws SingularSigma when a Sigma block is not invertible, and
/// DimensionMismatch when the blocks do not fit the channel.
GenieValidation validate_genie(const MimoChannel& ch, const GenieParameters& g);

/// The O_i comparison matrices (t_i x t_i, PSD for valid genies).
struct OMatrices {
  Mat O1, O2;
};

struct GenieRates {
  double r1 = 0.0;
  double r2 = 0.0;
  /// Largest discrepancy between the reduced evaluation and the raw
  /// block-determinant evaluation; kept as a permanent cross-check of the
  /// block-inverse algebra.
  double cross_check_delta = 0.0;

  double sum() const { return r1 + r2; }
};

/// Per-user genie-aided rates at S. Evaluated in the reduced form
///   R_iu = 1/2 log |I + S_i H_i^T (I+F_j S_j F_j^T)^-1 H_i + 2 S_i Obar_i|
/// and cross-checked against the raw stacked-channel determinant.
GenieRates genie_rates(const MimoChannel& ch, const CovariancePair& S,
                       const GenieParameters& g);

struct UpperSolution {
  CovariancePair S;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Maximizes the concave genie-aided sum rate over the trace ball by projected
/// gradient ascent from the deterministic isotropic start.
UpperSolution solve_upper(const MimoChannel& ch, const GenieParameters& g,
                          const SolverConfig& cfg = {});

struct SaddleReport {
  double worst_input_violation = 0.0;  // max over sampled S of R(S) - R(S*)
  double worst_genie_violation = 0.0;  // max over sampled g of R(g*) - R(g)
  int input_samples = 0;
  int genie_samples = 0;
};

/// Samples feasible inputs and valid genies around a certified pair and
/// reports the worst violation of the saddle inequalities (positive values
/// mean a violation).
SaddleReport saddle_check(const MimoChannel& ch, const CovariancePair& S_star,
                          const GenieParameters& g_star, int samples = 200,
                          std::uint64_t seed = 0);

}  // namespace nicert
