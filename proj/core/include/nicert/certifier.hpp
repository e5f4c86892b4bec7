// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nicert/genie.hpp"

namespace nicert {

/// One checked condition. A verdict passes iff every margin >= -1e-6 (the
/// certificate margin convention: margins are normalized so that zero sits on
/// the condition boundary).
struct Condition {
  std::string name;
  double value = 0.0;
  double margin = 0.0;
};

struct NoisyVerdict {
  bool passed = false;
  std::optional<double> sum_capacity;  // nats, present iff passed
  std::vector<Condition> conditions;
  double lower = 0.0;
  std::optional<double> upper;
  CovariancePair S;
  KktCertificate kkt;
  std::optional<GenieParameters> genie;
  std::optional<CovariancePair> upper_argmax;
  std::optional<OMatrices> O;
  std::optional<double> radius_phi1;
  std::optional<double> radius_phi2;
  std::string note;

  const Condition* find(const std::string& name) const;
};

/// Side-information mixing matrices solved from the covariance-range
/// conditions S_i F_i^T = S_i H_i^T (I + F_j S_j F_j^T)^-1 A_i. Among the
/// affine family of exact solutions, the returned A_i minimizes the residual
/// of the full-column equation F_i^T = H_i^T (I + F_j S_j F_j^T)^-1 A_i, which
/// drives O_i to zero whenever the direct link has full column rank. residual_i
/// is the (range-restricted) constraint violation.
struct ASolve {
  Mat A1, A2;
  double residual1 = 0.0;
  double residual2 = 0.0;
};

ASolve solve_A(const MimoChannel& ch, const CovariancePair& S_star);

struct RiccatiSolution {
  Mat Sigma1, Sigma2;
  int iterations = 0;
  double residual = 0.0;
};

struct RiccatiOutcome {
  enum class Status { Solved, Nonexistent, DidNotConverge };
  Status status = Status::Nonexistent;
  std::optional<RiccatiSolution> solution;
  double radius_phi1 = 0.0;  // NaN-free: 0 when Phi is undefined
  double radius_phi2 = 0.0;
  bool phi_defined = false;
  bool radius_gate = false;  // radius(Phi_1) <= 1/2 or radius(Phi_2) <= 1/2
  std::string reason;
};

/// Solves the coupled equations Sigma_1 = I - A_2 Sigma_2^-1 A_2^T,
/// Sigma_2 = I - A_1 Sigma_1^-1 A_1^T by fixed point from Sigma_1 = I.
/// The numerical-radius gate is sufficient for existence; when it fails the
/// fixed point is still attempted and convergence to a PD pair decides.
RiccatiOutcome solve_sigma(const Mat& A1, const Mat& A2);

/// The comparison matrices O_i of the converse argument. Throws SingularMiddle
/// when Sigma_i - A_i^T (I + F_j S_j F_j^T)^-1 A_i is not positive definite.
OMatrices compute_O(const MimoChannel& ch, const CovariancePair& S_star, const Mat& A1,
                    const Mat& A2, const Mat& Sigma1, const Mat& Sigma2);

/// Full certification pipeline for a general channel: TIN solve, KKT
/// multipliers, A and Sigma construction, W_i vs O_i comparison, and the
/// genie-bound gap check. Every condition is listed with its margin whether or
/// not the verdict passes.
NoisyVerdict certify_mimo(const MimoChannel& ch, const SolverConfig& cfg = {});

/// Specialization for channels with F1 = 0 (receiver 2 clean): uses A1 = 0,
/// Sigma1 = I - A2 A2^T, Sigma2 = I. Throws NotAZic.
NoisyVerdict certify_mimo_z(const MimoChannel& ch, const SolverConfig& cfg = {});

}  // namespace nicert
