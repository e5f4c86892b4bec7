// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <cstdint>

#include "nicert/channel.hpp"

namespace nicert {

struct CovariancePair {
  Mat S1, S2;
};

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
  double sum() const { return r1 + r2; }
};

struct SolverConfig {
  int restarts = 16;
  int max_iters = 5000;
  double grad_tol = 1e-8;      // stop when ||proj-grad|| <= grad_tol * (1 + |objective|)
  double step_shrink = 0.5;
  double armijo_c = 1e-4;
  std::uint64_t seed = 0;
};

/// Single-user-detection rates (nats):
///   R_il = 1/2 log |I + H_i S_i H_i^T (I + F_j S_j F_j^T)^-1|.
RatePair tin_rates(const MimoChannel& ch, const CovariancePair& S);

struct TinGradients {
  Mat dR1_dS1;  // PSD
  Mat dR1_dS2;  // negative semidefinite
  Mat dR2_dS1;  // negative semidefinite
  Mat dR2_dS2;  // PSD
};

TinGradients tin_gradients(const MimoChannel& ch, const CovariancePair& S);

/// Multipliers witnessing stationarity of S for the sum-rate problem:
/// G_i is the negated total gradient, W_i = G_i + lambda_i I, with lambda_i
/// from the active-constraint rule (zero when tr(S_i) < P_i).
struct KktCertificate {
  Mat G1, G2;
  double lambda1 = 0.0, lambda2 = 0.0;
  Mat W1, W2;
  double stationarity_residual = 0.0;   // ||S - proj(S + grad)||_F
  double complementarity_residual = 0.0; // max_i |tr(S_i W_i)|
  double psd_violation = 0.0;           // max_i max(0, -lambda_min(W_i))
};

KktCertificate kkt_certificate(const MimoChannel& ch, const CovariancePair& S);

struct TinSolution {
  CovariancePair S;
  double sum_rate = 0.0;
  KktCertificate kkt;
  bool converged = false;
  int iterations = 0;
  int tied_restarts = 0;  // restarts that reached the same value within tolerance
};

/// Projected gradient ascent with Armijo backtracking from multiple starts
/// (full-power isotropic, dominant-eigenvector beamforming, seeded random
/// draws). Best value wins; ties break by stationarity residual, then by
/// lexicographically smallest vec(S1). The result is always returned; the
/// converged flag records whether the residual target was met.
TinSolution solve_tin(const MimoChannel& ch, const SolverConfig& cfg = {});

struct MisoTinSolution {
  double phi1 = 0.0, phi2 = 0.0;
  CovariancePair S;
  double sum_rate = 0.0;
};

/// Beamforming-angle maximization for MISO standard forms: dense grid over
/// (phi1, phi2) in [0, |pi/2 - theta_i|] plus local refinement. S_i* is the
/// rank-one full-power covariance for the optimal angles.
MisoTinSolution solve_tin_miso(const StandardMiso& std_form, const SolverConfig& cfg = {});

}  // namespace nicert
