// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/tin.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nicert/matrix_kit.hpp"

namespace nicert {

namespace {

Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

double gaussian(std::mt19937_64& rng) {
  // Box-Muller on raw uniforms keeps the stream identical across toolchains
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = 0.0;
  do { a = u(rng); } while (a <= 1e-300);
  const double b = u(rng);
  return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
}

Mat random_psd(std::mt19937_64& rng, Eigen::Index n, double trace_cap) {
  Mat X(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) X(i, j) = gaussian(rng);
  return psd_project(X * X.transpose(), trace_cap);
}

Vec dominant_eigvec(const Mat& M) {
  SymEig e = sym_eig(M);
  return e.vectors.col(0);
}

bool lex_less(const Mat& A, const Mat& B) {
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      if (A(i, j) < B(i, j)) return true;
      if (A(i, j) > B(i, j)) return false;
    }
  return false;
}

struct Ascent {
  CovariancePair S;
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Shared projected-gradient ascent used by both bound solvers.
template <typename ObjFn, typename GradFn>
Ascent ascend(CovariancePair S, double P1, double P2, const ObjFn& objective,
              const GradFn& gradients, const SolverConfig& cfg) {
  Ascent st;
  double f = objective(S);
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    auto [g1, g2] = gradients(S);
    const Mat r1 = psd_project(S.S1 + g1, P1) - S.S1;
    const Mat r2 = psd_project(S.S2 + g2, P2) - S.S2;
    st.residual = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
    if (st.residual <= cfg.grad_tol * (1.0 + std::abs(f))) {
      st.converged = true;
      break;
    }
    CovariancePair next;
    double step = 1.0;
    bool improved = false;
    while (step > 1e-18) {
      next.S1 = psd_project(S.S1 + step * g1, P1);
      next.S2 = psd_project(S.S2 + step * g2, P2);
      const double nf = objective(next);
      const double decrease = (g1.array() * (next.S1 - S.S1).array()).sum() +
                              (g2.array() * (next.S2 - S.S2).array()).sum();
      if (nf >= f + cfg.armijo_c * decrease) {
        improved = true;
        f = nf;
        break;
      }
      step *= cfg.step_shrink;
    }
    if (!improved) break;
    S = next;
  }
  st.S = std::move(S);
  st.value = f;
  st.iterations = it;
  return st;
}

}  // namespace

RatePair tin_rates(const MimoChannel& ch, const CovariancePair& S) {
  RatePair out;
  const Mat N1 = eye(ch.r1()) + ch.F2 * S.S2 * ch.F2.transpose();
  const Mat N2 = eye(ch.r2()) + ch.F1 * S.S1 * ch.F1.transpose();
  out.r1 = 0.5 * (logdet_spd(N1 + ch.H1 * S.S1 * ch.H1.transpose()) - logdet_spd(N1));
  out.r2 = 0.5 * (logdet_spd(N2 + ch.H2 * S.S2 * ch.H2.transpose()) - logdet_spd(N2));
  return out;
}

TinGradients tin_gradients(const MimoChannel& ch, const CovariancePair& S) {
  const Mat N1 = eye(ch.r1()) + ch.F2 * S.S2 * ch.F2.transpose();
  const Mat N2 = eye(ch.r2()) + ch.F1 * S.S1 * ch.F1.transpose();
  const Mat T1 = (N1 + ch.H1 * S.S1 * ch.H1.transpose()).inverse();
  const Mat T2 = (N2 + ch.H2 * S.S2 * ch.H2.transpose()).inverse();
  const Mat N1inv = N1.inverse();
  const Mat N2inv = N2.inverse();
  TinGradients g;
  g.dR1_dS1 = 0.5 * ch.H1.transpose() * T1 * ch.H1;
  g.dR1_dS2 = -0.5 * ch.F2.transpose() * (N1inv - T1) * ch.F2;
  g.dR2_dS1 = -0.5 * ch.F1.transpose() * (N2inv - T2) * ch.F1;
  g.dR2_dS2 = 0.5 * ch.H2.transpose() * T2 * ch.H2;
  return g;
}

KktCertificate kkt_certificate(const MimoChannel& ch, const CovariancePair& S) {
  const TinGradients g = tin_gradients(ch, S);
  KktCertificate k;
  k.G1 = -(g.dR1_dS1 + g.dR2_dS1);
  k.G2 = -(g.dR1_dS2 + g.dR2_dS2);
  const auto active = [](double trace, double budget) {
    return trace >= budget - tol::kCertMargin * (1.0 + budget);
  };
  k.lambda1 = active(S.S1.trace(), ch.P1) ? -(S.S1 * k.G1).trace() / ch.P1 : 0.0;
  k.lambda2 = active(S.S2.trace(), ch.P2) ? -(S.S2 * k.G2).trace() / ch.P2 : 0.0;
  k.W1 = k.G1 + k.lambda1 * eye(ch.t1());
  k.W2 = k.G2 + k.lambda2 * eye(ch.t2());
  k.complementarity_residual =
      std::max(std::abs((S.S1 * k.W1).trace()), std::abs((S.S2 * k.W2).trace()));
  k.psd_violation = std::max({0.0, -min_eigenvalue(k.W1), -min_eigenvalue(k.W2)});
  const Mat r1 = psd_project(S.S1 - k.G1, ch.P1) - S.S1;
  const Mat r2 = psd_project(S.S2 - k.G2, ch.P2) - S.S2;
  k.stationarity_residual = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  return k;
}

TinSolution solve_tin(const MimoChannel& ch, const SolverConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const Eigen::Index t1 = ch.t1(), t2 = ch.t2();

  std::vector<CovariancePair> starts;
  starts.push_back({ch.P1 / double(t1) * eye(t1), ch.P2 / double(t2) * eye(t2)});
  {
    const Vec v1 = dominant_eigvec(ch.H1.transpose() * ch.H1);
    const Vec v2 = dominant_eigvec(ch.H2.transpose() * ch.H2);
    starts.push_back({ch.P1 * v1 * v1.transpose(), ch.P2 * v2 * v2.transpose()});
  }
  while (static_cast<int>(starts.size()) < std::max(cfg.restarts, 2)) {
    starts.push_back({random_psd(rng, t1, ch.P1), random_psd(rng, t2, ch.P2)});
  }

  const auto objective = [&](const CovariancePair& S) { return tin_rates(ch, S).sum(); };
  const auto gradients = [&](const CovariancePair& S) {
    const TinGradients g = tin_gradients(ch, S);
    return std::pair<Mat, Mat>(g.dR1_dS1 + g.dR2_dS1, g.dR1_dS2 + g.dR2_dS2);
  };

  TinSolution best;
  double best_value = -1.0;
  double best_residual = 0.0;
  int ties = 0;
  for (const auto& start : starts) {
    Ascent a = ascend(start, ch.P1, ch.P2, objective, gradients, cfg);
    const double value_tol = 1e-9 * (1.0 + std::abs(best_value));
    bool take = false;
    if (best_value < 0.0 || a.value > best_value + value_tol) {
      take = true;
      ties = 0;
    } else if (a.value > best_value - value_tol) {
      ++ties;
      if (a.residual < best_residual ||
          (a.residual == best_residual && lex_less(a.S.S1, best.S.S1))) {
        take = true;
      }
    }
    if (take) {
      best.S = a.S;
      best_value = a.value;
      best_residual = a.residual;
      best.converged = a.converged;
      best.iterations = a.iterations;
    }
  }
  best.sum_rate = best_value;
  best.tied_restarts = ties;
  best.kkt = kkt_certificate(ch, best.S);
  return best;
}

MisoTinSolution solve_tin_miso(const StandardMiso& s, const SolverConfig& cfg) {
  (void)cfg;
  const double hi1 = std::abs(M_PI / 2 - s.theta1);
  const double hi2 = std::abs(M_PI / 2 - s.theta2);
  const auto objective = [&](double p1, double p2) {
    const double sig1 = s.P1 * std::pow(std::sin(s.theta1 + s.rho1 * p1), 2);
    const double sig2 = s.P2 * std::pow(std::sin(s.theta2 + s.rho2 * p2), 2);
    const double i1 = s.a2 * s.P2 * std::pow(std::sin(p2), 2);
    const double i2 = s.a1 * s.P1 * std::pow(std::sin(p1), 2);
    return 0.5 * std::log1p(sig1 / (1.0 + i1)) + 0.5 * std::log1p(sig2 / (1.0 + i2));
  };

  const int n = 400;
  double best = -1.0, b1 = 0.0, b2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double p1 = hi1 * i / n, p2 = hi2 * j / n;
      const double v = objective(p1, p2);
      if (v > best) { best = v; b1 = p1; b2 = p2; }
    }
  }
  // shrink the grid around the incumbent until the cell size is negligible
  double w1 = hi1 / n, w2 = hi2 / n;
  while (std::max(w1, w2) > 1e-12) {
    const double lo1 = std::max(0.0, b1 - w1), up1 = std::min(hi1, b1 + w1);
    const double lo2 = std::max(0.0, b2 - w2), up2 = std::min(hi2, b2 + w2);
    for (int i = 0; i <= 16; ++i) {
      for (int j = 0; j <= 16; ++j) {
        const double p1 = lo1 + (up1 - lo1) * i / 16.0;
        const double p2 = lo2 + (up2 - lo2) * j / 16.0;
        const double v = objective(p1, p2);
        if (v > best) { best = v; b1 = p1; b2 = p2; }
      }
    }
    w1 *= 0.25;
    w2 *= 0.25;
  }

  MisoTinSolution out;
  out.phi1 = b1;
  out.phi2 = b2;
  out.sum_rate = best;
  const auto beam = [](double P, double phi, int rho) {
    const double sn = std::sin(phi), cs = std::cos(phi);
    Mat S(2, 2);
    S << sn * sn, rho * sn * cs, rho * sn * cs, cs * cs;
    return Mat(P * S);
  };
  out.S = {beam(s.P1, b1, s.rho1), beam(s.P2, b2, s.rho2)};
  return out;
}

}  // namespace nicert
