// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include "nicert/certifier.hpp"

namespace nicert {

/// Scalar quantities of the closed-form MISO test.
struct MisoConditions {
  double A1 = 0.0, A2 = 0.0;
  double sigma1_sq = 0.0, sigma2_sq = 0.0;      // larger roots of the coupled quadratics
  double bar_sigma1_sq = 0.0, bar_sigma2_sq = 0.0;
  bool existence_ok = false;                    // |A1| + |A2| <= 1
  double k1 = 0.0, k2 = 0.0;                    // W_i scaling constants
};

struct MisoCertification {
  NoisyVerdict verdict;
  MisoConditions conditions;
};

/// Closed-form noisy-interference test for a MISO standard form at the TIN
/// optimum. Throws HypothesisViolated when cos(theta_i) = 0 or f_i = 0 (those
/// cases route to certify_miso_z) and when S* = 0.
MisoCertification certify_miso(const StandardMiso& std_form, const MisoTinSolution& tin);

/// One-sided MISO test for theta1 = pi/2 or f1 = 0. Throws NotAZic.
NoisyVerdict certify_miso_z(const StandardMiso& std_form, const MisoTinSolution& tin);

/// Existence test for SIMO standard forms: tries the closed-form mixing
/// matrices and a grid of direction-parametrized candidates, passing when any
/// candidate keeps radius(Phi_1) <= 1/2 or radius(Phi_2) <= 1/2 with the inner
/// definiteness requirements. On pass the capacity is the full-power TIN value.
NoisyVerdict certify_simo(const StandardSimo& std_form);

/// SIMO with varphi2 = pi/2 or f1 = 0: passes iff a2 <= 1. Throws NotAZic.
NoisyVerdict certify_simo_z(const StandardSimo& std_form);

/// Two-branch closed form for symmetric SIMO channels (theta in [0, pi/2]).
bool symmetric_simo_closed_form(double theta, double a, double P);

/// Private/common covariance split for the rate-splitting comparison.
struct HkSplit {
  Mat Sp, Sc;
};

/// Achievable sum rate of the three-constraint rate-splitting region at the
/// given split of user 2's power on a MISO channel whose receiver 2 is clean:
/// min(R1 cap + R2 cap, joint cap). Throws InfeasibleSplit / NotAZic.
double hk_sum_rate_miso_z(const StandardMiso& std_form, const HkSplit& split);

struct HkSearchResult {
  HkSplit split;
  double sum_rate = 0.0;
};

/// Maximizes hk_sum_rate_miso_z over rank-one private/common splits
/// (power fraction plus two beam angles), by multiscale grid refinement.
HkSearchResult hk_best_split_miso_z(const StandardMiso& std_form);

/// Largest a2 for which the one-sided MISO test still passes at the given
/// operating point, by bisection at the stated resolution. Values are capped
/// at a2_cap (the condition can hold for every a2, e.g. theta2 = pi/2).
double max_noisy_a2_miso_z(double P1, double P2, double theta2, double resolution,
                           double a2_cap = 64.0);

/// Builds a standard form directly from angle/gain parameters (identity
/// reductions, unit direct gains).
StandardMiso make_standard_miso(double theta1, double theta2, double a1, double a2,
                                double P1, double P2);
StandardSimo make_standard_simo(double varphi1, double varphi2, double a1, double a2,
                                double P1, double P2);

}  // namespace nicert
