// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/miso_simo.hpp"

#include <algorithm>
#include <cmath>

#include "nicert/matrix_kit.hpp"

namespace nicert {

namespace {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

double quad(const Vec2& x, const Mat& S, const Vec2& y) { return x.dot(S * y); }

bool margins_pass(const std::vector<Condition>& conditions) {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const Condition& c) { return c.margin >= -tol::kCertMargin; });
}

double min_eig2(const Mat2& M) {
  const double tr = M(0, 0) + M(1, 1);
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return tr / 2.0 - disc;
}

double radius2(const Mat2& X) {
  const Mat2 S = 0.5 * (X + X.transpose());
  const double tr = S(0, 0) + S(1, 1);
  const double det = S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return std::max(std::abs(tr / 2.0 + disc), std::abs(tr / 2.0 - disc));
}

Mat2 inv_sqrt2(const Mat2& M) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(M);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

// Worst of the two existence radii for a candidate mixing pair, or a failing
// margin when the definiteness requirements do not hold.
struct CandidateScore {
  double margin = -1.0;     // max(0.5 - radius_phi1, 0.5 - radius_phi2), or eig deficit
  double radius_phi1 = 0.0;
  double radius_phi2 = 0.0;
  double m1_min = 0.0, m2_min = 0.0;
  bool feasible = false;
};

CandidateScore score_candidate(const Mat2& A1, const Mat2& A2) {
  CandidateScore s;
  const Mat2 M1 = Mat2::Identity() - A1.transpose() * A1 - A2 * A2.transpose();
  const Mat2 M2 = Mat2::Identity() - A1 * A1.transpose() - A2.transpose() * A2;
  s.m1_min = min_eig2(M1);
  s.m2_min = min_eig2(M2);
  const Mat2 cross = A1.transpose() * A2.transpose();
  const double eig_floor = std::min(s.m1_min, s.m2_min);
  if (eig_floor <= 1e-12) {
    if (cross.norm() <= 1e-14) {
      // degenerate one-sided case: Phi vanishes, only semidefiniteness matters
      s.feasible = eig_floor >= -tol::kCertMargin;
      s.margin = s.feasible ? 0.5 : eig_floor;
      return s;
    }
    s.margin = eig_floor;
    return s;
  }
  const Mat2 W1 = inv_sqrt2(M1);
  const Mat2 W2 = inv_sqrt2(M2);
  s.radius_phi1 = radius2(W1 * cross * W1);
  s.radius_phi2 = radius2(W2 * cross.transpose() * W2);
  s.margin = 0.5 - std::min(s.radius_phi1, s.radius_phi2);
  s.feasible = true;
  return s;
}

}  // namespace

StandardMiso make_standard_miso(double theta1, double theta2, double a1, double a2,
                                double P1, double P2) {
  StandardMiso s;
  s.theta1 = theta1;
  s.theta2 = theta2;
  s.a1 = a1;
  s.a2 = a2;
  s.P1 = P1;
  s.P2 = P2;
  s.rho1 = theta1 <= M_PI / 2 ? 1 : -1;
  s.rho2 = theta2 <= M_PI / 2 ? 1 : -1;
  s.reduction1 = Mat::Identity(2, 2);
  s.reduction2 = Mat::Identity(2, 2);
  s.h_norm1 = 1.0;
  s.h_norm2 = 1.0;
  return s;
}

StandardSimo make_standard_simo(double varphi1, double varphi2, double a1, double a2,
                                double P1, double P2) {
  StandardSimo s;
  s.varphi1 = varphi1;
  s.varphi2 = varphi2;
  s.a1 = a1;
  s.a2 = a2;
  s.P1 = P1;
  s.P2 = P2;
  s.reduction1 = Mat::Identity(2, 2);
  s.reduction2 = Mat::Identity(2, 2);
  s.h_norm1 = 1.0;
  s.h_norm2 = 1.0;
  return s;
}

MisoCertification certify_miso(const StandardMiso& s, const MisoTinSolution& tin) {
  const double c1 = std::cos(s.theta1), c2 = std::cos(s.theta2);
  if (std::abs(c1) <= 1e-12 || std::abs(c2) <= 1e-12 || s.a1 <= 0.0 || s.a2 <= 0.0) {
    throw Error(ErrorCode::HypothesisViolated,
                "certify_miso needs cos(theta_i) != 0 and f_i != 0; use certify_miso_z");
  }
  if (tin.S.S1.trace() <= 1e-12 || tin.S.S2.trace() <= 1e-12) {
    throw Error(ErrorCode::HypothesisViolated, "certify_miso needs S* != 0");
  }
  const Vec2 h1 = s.h1(), h2 = s.h2(), f1 = s.f1(), f2 = s.f2();
  const Mat& S1 = tin.S.S1;
  const Mat& S2 = tin.S.S2;

  const double h1s1h1 = quad(h1, S1, h1), h2s2h2 = quad(h2, S2, h2);
  const double f1s1f1 = quad(f1, S1, f1), f2s2f2 = quad(f2, S2, f2);
  const double r1 = quad(f1, S1, h1) / h1s1h1;
  const double r2 = quad(f2, S2, h2) / h2s2h2;

  MisoConditions mc;
  mc.A1 = r1 * (1.0 + f2s2f2);
  mc.A2 = r2 * (1.0 + f1s1f1);
  mc.existence_ok = std::abs(mc.A1) + std::abs(mc.A2) <= 1.0 + tol::kCertMargin;
  const double q1 = 1.0 + mc.A1 * mc.A1 - mc.A2 * mc.A2;
  const double q2 = 1.0 + mc.A2 * mc.A2 - mc.A1 * mc.A1;
  const double disc1 = q1 * q1 - 4.0 * mc.A1 * mc.A1;
  const double disc2 = q2 * q2 - 4.0 * mc.A2 * mc.A2;
  mc.sigma1_sq = 0.5 * (q1 + std::sqrt(std::max(0.0, disc1)));
  mc.sigma2_sq = 0.5 * (q2 + std::sqrt(std::max(0.0, disc2)));
  mc.bar_sigma1_sq = -f2s2f2 + std::sqrt(s.a2) / c2 * (1.0 + h2s2h2 + f1s1f1) * r2;
  mc.bar_sigma2_sq = -f1s1f1 + std::sqrt(s.a1) / c1 * (1.0 + h1s1h1 + f2s2f2) * r1;
  mc.k1 = -c1 / (2.0 * (1.0 + h1s1h1 + f2s2f2) * r1 * (r1 * c1 - std::sqrt(s.a1)));
  mc.k2 = -c2 / (2.0 * (1.0 + h2s2h2 + f1s1f1) * r2 * (r2 * c2 - std::sqrt(s.a2)));

  MisoCertification out;
  out.conditions = mc;
  NoisyVerdict& v = out.verdict;
  v.S = tin.S;
  v.lower = tin.sum_rate;
  v.kkt = kkt_certificate(s.reduced_channel(), tin.S);
  const double exist_margin = 1.0 - std::abs(mc.A1) - std::abs(mc.A2);
  v.conditions.push_back({"existence_abs_a", std::abs(mc.A1) + std::abs(mc.A2), exist_margin});
  v.conditions.push_back({"sigma1_geq_bar", mc.sigma1_sq - mc.bar_sigma1_sq,
                          mc.sigma1_sq - mc.bar_sigma1_sq});
  v.conditions.push_back({"sigma2_geq_bar", mc.sigma2_sq - mc.bar_sigma2_sq,
                          mc.sigma2_sq - mc.bar_sigma2_sq});
  v.passed = margins_pass(v.conditions);
  if (v.passed) v.sum_capacity = v.lower;
  return out;
}

NoisyVerdict certify_miso_z(const StandardMiso& s, const MisoTinSolution& tin) {
  const bool theta1_orthogonal = std::abs(std::cos(s.theta1)) <= 1e-12;
  if (!theta1_orthogonal && s.a1 > 0.0) {
    throw Error(ErrorCode::NotAZic, "certify_miso_z needs theta1 = pi/2 or f1 = 0");
  }
  const Vec2 h2 = s.h2(), f2 = s.f2();
  const Mat& S2 = tin.S.S2;
  const double h2s2h2 = quad(h2, S2, h2);
  const double f2s2f2 = quad(f2, S2, f2);
  const double f2s2h2 = quad(f2, S2, h2);
  const double c2sq = std::pow(std::cos(s.theta2), 2);

  NoisyVerdict v;
  v.S = tin.S;
  v.lower = tin.sum_rate;
  v.kkt = kkt_certificate(s.reduced_channel(), tin.S);
  v.conditions.push_back(
      {"weak_interference", f2s2f2, h2s2h2 - f2s2f2});
  double align = 0.0;
  if (h2s2h2 > 0.0) {
    const double ratio = f2s2h2 * (1.0 + h2s2h2) / (h2s2h2 * (1.0 + f2s2f2));
    align = s.a2 * ratio * ratio;
  }
  v.conditions.push_back({"alignment_cos_bound", align, c2sq - align});
  v.passed = margins_pass(v.conditions);
  if (v.passed) v.sum_capacity = v.lower;
  return v;
}

NoisyVerdict certify_simo(const StandardSimo& s) {
  const Vec2 h1 = s.h1(), h2 = s.h2(), f1 = s.f1(), f2 = s.f2();
  const Mat2 G1 = Mat2::Identity() + s.P2 * f2 * f2.transpose();  // at receiver 1
  const Mat2 G2 = Mat2::Identity() + s.P1 * f1 * f1.transpose();
  const Mat2 G1inv = G1.inverse();
  const Mat2 G2inv = G2.inverse();

  // candidate mixing matrices: A_i = v f_i^T / (v^T G_i^-1 h_i), which keeps
  // f_i = A_i^T G_i^-1 h_i for any direction v with nonzero denominator
  const auto candidate1 = [&](const Vec2& v) -> Mat2 {
    const double den = v.dot(G1inv * h1);
    return Mat2((v * f1.transpose()) / den);
  };
  const auto candidate2 = [&](const Vec2& v) -> Mat2 {
    const double den = v.dot(G2inv * h2);
    return Mat2((v * f2.transpose()) / den);
  };

  struct Best {
    CandidateScore score;
    Mat2 A1 = Mat2::Zero(), A2 = Mat2::Zero();
    bool valid = false;
  } best;
  const auto consider = [&](const Mat2& A1, const Mat2& A2) {
    const CandidateScore sc = score_candidate(A1, A2);
    if (!best.valid || sc.margin > best.score.margin) {
      best.score = sc;
      best.A1 = A1;
      best.A2 = A2;
      best.valid = true;
    }
  };

  // closed-form choice first
  consider(Mat2(G1 * h1 * f1.transpose()), Mat2(G2 * h2 * f2.transpose()));

  if (best.score.margin < 0.0) {
    constexpr int kDirections = 360;
    std::vector<Mat2> c1s, c2s;
    std::vector<double> angles;
    c1s.reserve(kDirections);
    c2s.reserve(kDirections);
    for (int k = 0; k < kDirections; ++k) {
      const double ang = M_PI * k / kDirections;  // v and -v give the same candidate
      const Vec2 v(std::cos(ang), std::sin(ang));
      if (std::abs(v.dot(G1inv * h1)) < 1e-9 || std::abs(v.dot(G2inv * h2)) < 1e-9) continue;
      angles.push_back(ang);
      c1s.push_back(candidate1(v));
      c2s.push_back(candidate2(v));
    }
    double best_a1 = 0.0, best_a2 = 0.0;
    double coarse_margin = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < c1s.size(); ++i) {
      for (size_t j = 0; j < c2s.size(); ++j) {
        const CandidateScore sc = score_candidate(c1s[i], c2s[j]);
        if (sc.margin > coarse_margin) {
          coarse_margin = sc.margin;
          best_a1 = angles[i];
          best_a2 = angles[j];
        }
      }
    }
    // local refinement around the best grid cell
    double w = M_PI / kDirections;
    while (w > 1e-10) {
      double local_best = coarse_margin;
      double la1 = best_a1, la2 = best_a2;
      for (int i = -4; i <= 4; ++i) {
        for (int j = -4; j <= 4; ++j) {
          const double a1 = best_a1 + w * i / 4.0;
          const double a2 = best_a2 + w * j / 4.0;
          const Vec2 v1(std::cos(a1), std::sin(a1));
          const Vec2 v2(std::cos(a2), std::sin(a2));
          if (std::abs(v1.dot(G1inv * h1)) < 1e-9 || std::abs(v2.dot(G2inv * h2)) < 1e-9)
            continue;
          const CandidateScore sc = score_candidate(candidate1(v1), candidate2(v2));
          if (sc.margin > local_best) {
            local_best = sc.margin;
            la1 = a1;
            la2 = a2;
          }
        }
      }
      coarse_margin = local_best;
      best_a1 = la1;
      best_a2 = la2;
      w *= 0.25;
    }
    const Vec2 v1(std::cos(best_a1), std::sin(best_a1));
    const Vec2 v2(std::cos(best_a2), std::sin(best_a2));
    consider(candidate1(v1), candidate2(v2));
  }

  NoisyVerdict v;
  const MimoChannel reduced = s.reduced_channel();
  const Mat P1m = Mat::Constant(1, 1, s.P1);
  const Mat P2m = Mat::Constant(1, 1, s.P2);
  const RatePair full = tin_rates(reduced, {P1m, P2m});
  v.S = {P1m, P2m};
  v.lower = full.sum();
  v.kkt = kkt_certificate(reduced, v.S);
  v.radius_phi1 = best.score.radius_phi1;
  v.radius_phi2 = best.score.radius_phi2;
  v.genie = GenieParameters{best.A1, best.A2, Mat(), Mat()};
  if (const RiccatiOutcome ric = solve_sigma(best.A1, best.A2);
      ric.status == RiccatiOutcome::Status::Solved) {
    v.genie->Sigma1 = ric.solution->Sigma1;
    v.genie->Sigma2 = ric.solution->Sigma2;
  } else {
    v.genie.reset();
  }
  v.conditions.push_back({"m1_psd", best.score.m1_min, best.score.m1_min});
  v.conditions.push_back({"m2_psd", best.score.m2_min, best.score.m2_min});
  v.conditions.push_back(
      {"radius_gate", std::min(best.score.radius_phi1, best.score.radius_phi2),
       best.score.margin});
  v.passed = margins_pass(v.conditions);
  if (v.passed) v.sum_capacity = v.lower;
  return v;
}

NoisyVerdict certify_simo_z(const StandardSimo& s) {
  const bool orthogonal = std::abs(std::cos(s.varphi2)) <= 1e-12;
  if (!orthogonal && s.a1 > 0.0) {
    throw Error(ErrorCode::NotAZic, "certify_simo_z needs varphi2 = pi/2 or f1 = 0");
  }
  const Vec2 h1 = s.h1(), h2 = s.h2(), f2 = s.f2();
  const Mat2 N1 = Mat2::Identity() + s.P2 * f2 * f2.transpose();
  const double cap1 =
      0.5 * std::log((N1 + s.P1 * h1 * h1.transpose()).determinant() / N1.determinant());
  const double cap2 =
      0.5 * std::log((Mat2::Identity() + s.P2 * h2 * h2.transpose()).determinant());

  NoisyVerdict v;
  v.lower = cap1 + cap2;
  v.S = {Mat::Constant(1, 1, s.P1), Mat::Constant(1, 1, s.P2)};
  v.conditions.push_back({"weak_interference", s.a2, 1.0 - s.a2});
  v.passed = margins_pass(v.conditions);
  if (v.passed) v.sum_capacity = v.lower;
  return v;
}

bool symmetric_simo_closed_form(double theta, double a, double P) {
  const double c = std::cos(theta), s = std::sin(theta);
  if (c / (1.0 + a * P) <= s) {
    return a <= s * s;
  }
  const double u = c / (1.0 + a * P);
  return u * u - 2.0 * std::sqrt(a) * u + s * s >= 0.0;
}

double hk_sum_rate_miso_z(const StandardMiso& s, const HkSplit& split) {
  if (std::abs(std::cos(s.theta1)) > 1e-12 && s.a1 > 0.0) {
    throw Error(ErrorCode::NotAZic, "hk_sum_rate_miso_z needs a clean receiver 2");
  }
  if (split.Sp.rows() != 2 || split.Sc.rows() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "split covariances must be 2x2");
  }
  if (min_eigenvalue(split.Sp) < -1e-9 || min_eigenvalue(split.Sc) < -1e-9) {
    throw Error(ErrorCode::InfeasibleSplit, "split covariances must be PSD");
  }
  if (split.Sp.trace() + split.Sc.trace() > s.P2 + 1e-9 * (1.0 + s.P2)) {
    throw Error(ErrorCode::InfeasibleSplit, "split exceeds the power budget");
  }
  const Vec2 h2 = s.h2(), f2 = s.f2();
  const double p = quad(f2, split.Sp, f2);
  const double c = quad(f2, split.Sc, f2);
  const double hp = quad(h2, split.Sp, h2);
  const double hall = hp + quad(h2, split.Sc, h2);
  const double cap_r1 = 0.5 * std::log1p(s.P1 / (1.0 + p));
  const double cap_r2 = 0.5 * std::log1p(hall);
  const double cap_sum = 0.5 * std::log1p(hp) + 0.5 * std::log1p((s.P1 + c) / (1.0 + p));
  return std::min(cap_r1 + cap_r2, cap_sum);
}

HkSearchResult hk_best_split_miso_z(const StandardMiso& s) {
  const auto beam = [](double angle) {
    return Vec2(std::sin(angle), std::cos(angle));
  };
  const auto evaluate = [&](double beta, double ap, double ac) {
    const Vec2 up = beam(ap), uc = beam(ac);
    HkSplit split{Mat(beta * s.P2 * up * up.transpose()),
                  Mat((1.0 - beta) * s.P2 * uc * uc.transpose())};
    return std::pair<double, HkSplit>(hk_sum_rate_miso_z(s, split), std::move(split));
  };

  double best = -1.0, bb = 0.5, bp = 0.0, bc = 0.0;
  const int nb = 40, na = 48;
  for (int i = 0; i <= nb; ++i) {
    const double beta = double(i) / nb;
    for (int j = 0; j < na; ++j) {
      for (int k = 0; k < na; ++k) {
        const double ap = M_PI * j / na, ac = M_PI * k / na;
        const double value = evaluate(beta, ap, ac).first;
        if (value > best) { best = value; bb = beta; bp = ap; bc = ac; }
      }
    }
  }
  double wb = 1.0 / nb, wa = M_PI / na;
  while (std::max(wb, wa) > 1e-10) {
    double lb = best, nbb = bb, nbp = bp, nbc = bc;
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        for (int k = -4; k <= 4; ++k) {
          const double beta = std::clamp(bb + wb * i / 4.0, 0.0, 1.0);
          const double ap = bp + wa * j / 4.0;
          const double ac = bc + wa * k / 4.0;
          const double value = evaluate(beta, ap, ac).first;
          if (value > lb) { lb = value; nbb = beta; nbp = ap; nbc = ac; }
        }
      }
    }
    best = lb;
    bb = nbb;
    bp = nbp;
    bc = nbc;
    wb *= 0.25;
    wa *= 0.25;
  }
  auto [value, split] = evaluate(bb, bp, bc);
  return HkSearchResult{std::move(split), value};
}

double max_noisy_a2_miso_z(double P1, double P2, double theta2, double resolution,
                           double a2_cap) {
  const auto passes = [&](double a2) {
    const StandardMiso s = make_standard_miso(M_PI / 2, theta2, 0.0, a2, P1, P2);
    const MisoTinSolution tin = solve_tin_miso(s);
    return certify_miso_z(s, tin).passed;
  };
  double lo = 0.0;
  double hi = 0.5;
  while (hi < a2_cap && passes(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= a2_cap) return a2_cap;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nicert
