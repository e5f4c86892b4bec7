// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/genie.hpp"

#include <cmath>
#include <random>

#include "nicert/matrix_kit.hpp"

namespace nicert {

namespace {

Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

Mat spd_inverse(const Mat& M, ErrorCode code, const char* what) {
  SymEig e = sym_eig(M);
  const double cut = 1e-12 * (1.0 + std::abs(e.values(0)));
  if (e.values(e.values.size() - 1) <= cut) throw Error(code, what);
  return e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose();
}

Mat psd_sqrt(const Mat& M) {
  SymEig e = sym_eig(M);
  return e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

// Stacked observation [H_i; F_i] and the padded interference [F_j; 0] for
// one user's side-information channel.
struct Stacked {
  Mat M;  // (r_i + r_j) x t_i
  Mat N;  // (r_i + r_j) x t_j
  Mat E;  // noise covariance of [z_i; n_i]
};

Stacked stack_user1(const MimoChannel& ch, const GenieParameters& g) {
  Stacked s;
  s.M.resize(ch.r1() + ch.r2(), ch.t1());
  s.M << ch.H1, ch.F1;
  s.N = Mat::Zero(ch.r1() + ch.r2(), ch.t2());
  s.N.topRows(ch.r1()) = ch.F2;
  s.E.resize(ch.r1() + ch.r2(), ch.r1() + ch.r2());
  s.E << eye(ch.r1()), g.A1, g.A1.transpose(), g.Sigma1;
  return s;
}

Stacked stack_user2(const MimoChannel& ch, const GenieParameters& g) {
  Stacked s;
  s.M.resize(ch.r2() + ch.r1(), ch.t2());
  s.M << ch.H2, ch.F2;
  s.N = Mat::Zero(ch.r2() + ch.r1(), ch.t1());
  s.N.topRows(ch.r2()) = ch.F1;
  s.E.resize(ch.r2() + ch.r1(), ch.r2() + ch.r1());
  s.E << eye(ch.r2()), g.A2, g.A2.transpose(), g.Sigma2;
  return s;
}

double raw_rate(const Stacked& s, const Mat& S_own, const Mat& S_other) {
  const Mat base = s.E + s.N * S_other * s.N.transpose();
  return 0.5 * (logdet_spd(base + s.M * S_own * s.M.transpose()) - logdet_spd(base));
}

// 1/2 log|I + S (H^T N^-1 H + 2 Obar)| evaluated through the symmetric
// square root of S.
double reduced_rate(const Mat& H, const Mat& F_own, const Mat& N_inv, const Mat& A,
                    const Mat& Sigma, const Mat& S_own) {
  const Mat D = A.transpose() * N_inv * H - F_own;
  const Mat mid = Sigma - A.transpose() * N_inv * A;
  const Mat mid_inv = spd_inverse(mid, ErrorCode::SingularMiddle,
                                  "genie rate: Sigma - A^T N^-1 A not positive definite");
  const Mat obar = 0.5 * D.transpose() * mid_inv * D;
  const Mat core = H.transpose() * N_inv * H + 2.0 * obar;
  const Mat root = psd_sqrt(S_own);
  const Mat inner = Mat::Identity(S_own.rows(), S_own.cols()) + root * core * root;
  return 0.5 * logdet_spd(inner);
}

void check_genie_dims(const MimoChannel& ch, const GenieParameters& g) {
  if (g.A1.rows() != ch.r1() || g.A1.cols() != ch.r2() || g.A2.rows() != ch.r2() ||
      g.A2.cols() != ch.r1() || g.Sigma1.rows() != ch.r2() || g.Sigma1.cols() != ch.r2() ||
      g.Sigma2.rows() != ch.r1() || g.Sigma2.cols() != ch.r1()) {
    throw Error(ErrorCode::DimensionMismatch, "genie blocks do not fit the channel");
  }
}

}  // namespace

GenieValidation validate_genie(const MimoChannel& ch, const GenieParameters& g) {
  check_genie_dims(ch, g);
  GenieValidation v;
  v.e1_margin = min_eigenvalue(g.Sigma1 - g.A1.transpose() * g.A1);
  v.e2_margin = min_eigenvalue(g.Sigma2 - g.A2.transpose() * g.A2);
  const Mat s2inv = spd_inverse(g.Sigma2, ErrorCode::SingularSigma, "Sigma2 not invertible");
  const Mat s1inv = spd_inverse(g.Sigma1, ErrorCode::SingularSigma, "Sigma1 not invertible");
  v.sigma1_margin =
      min_eigenvalue(eye(ch.r2()) - g.A2 * s2inv * g.A2.transpose() - g.Sigma1);
  v.sigma2_margin =
      min_eigenvalue(eye(ch.r1()) - g.A1 * s1inv * g.A1.transpose() - g.Sigma2);
  return v;
}

GenieRates genie_rates(const MimoChannel& ch, const CovariancePair& S,
                       const GenieParameters& g) {
  check_genie_dims(ch, g);
  const Mat N1 = eye(ch.r1()) + ch.F2 * S.S2 * ch.F2.transpose();
  const Mat N2 = eye(ch.r2()) + ch.F1 * S.S1 * ch.F1.transpose();
  GenieRates out;
  out.r1 = reduced_rate(ch.H1, ch.F1, N1.inverse(), g.A1, g.Sigma1, S.S1);
  out.r2 = reduced_rate(ch.H2, ch.F2, N2.inverse(), g.A2, g.Sigma2, S.S2);
  const double raw1 = raw_rate(stack_user1(ch, g), S.S1, S.S2);
  const double raw2 = raw_rate(stack_user2(ch, g), S.S2, S.S1);
  out.cross_check_delta = std::max(std::abs(out.r1 - raw1), std::abs(out.r2 - raw2));
  return out;
}

UpperSolution solve_upper(const MimoChannel& ch, const GenieParameters& g,
                          const SolverConfig& cfg) {
  check_genie_dims(ch, g);
  const Stacked s1 = stack_user1(ch, g);
  const Stacked s2 = stack_user2(ch, g);

  const auto objective = [&](const CovariancePair& S) {
    return raw_rate(s1, S.S1, S.S2) + raw_rate(s2, S.S2, S.S1);
  };
  const auto gradients = [&](const CovariancePair& S) {
    const Mat X1 = (s1.E + s1.M * S.S1 * s1.M.transpose() + s1.N * S.S2 * s1.N.transpose())
                       .inverse();
    const Mat Y1 = (s1.E + s1.N * S.S2 * s1.N.transpose()).inverse();
    const Mat X2 = (s2.E + s2.M * S.S2 * s2.M.transpose() + s2.N * S.S1 * s2.N.transpose())
                       .inverse();
    const Mat Y2 = (s2.E + s2.N * S.S1 * s2.N.transpose()).inverse();
    Mat g1 = 0.5 * s1.M.transpose() * X1 * s1.M - 0.5 * s2.N.transpose() * (Y2 - X2) * s2.N;
    Mat g2 = 0.5 * s2.M.transpose() * X2 * s2.M - 0.5 * s1.N.transpose() * (Y1 - X1) * s1.N;
    return std::pair<Mat, Mat>(std::move(g1), std::move(g2));
  };

  // the objective is concave, one deterministic start suffices
  CovariancePair S{ch.P1 / double(ch.t1()) * eye(ch.t1()),
                   ch.P2 / double(ch.t2()) * eye(ch.t2())};
  double f = objective(S);
  UpperSolution out;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    auto [g1, g2] = gradients(S);
    const Mat r1 = psd_project(S.S1 + g1, ch.P1) - S.S1;
    const Mat r2 = psd_project(S.S2 + g2, ch.P2) - S.S2;
    if (std::sqrt(r1.squaredNorm() + r2.squaredNorm()) <= cfg.grad_tol * (1.0 + std::abs(f))) {
      out.converged = true;
      break;
    }
    CovariancePair next;
    double step = 1.0;
    bool improved = false;
    while (step > 1e-18) {
      next.S1 = psd_project(S.S1 + step * g1, ch.P1);
      next.S2 = psd_project(S.S2 + step * g2, ch.P2);
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
  out.S = std::move(S);
  out.value = f;
  out.iterations = it;
  return out;
}

SaddleReport saddle_check(const MimoChannel& ch, const CovariancePair& S_star,
                          const GenieParameters& g_star, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto gauss = [&]() {
    double a;
    do { a = uni(rng); } while (a <= 1e-300);
    return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * uni(rng));
  };
  const auto random_psd = [&](Eigen::Index n, double cap) {
    Mat X(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) X(i, j) = gauss();
    return psd_project(X * X.transpose(), cap * uni(rng));
  };

  SaddleReport rep;
  const double base = genie_rates(ch, S_star, g_star).sum();

  for (int k = 0; k < samples; ++k) {
    CovariancePair S{random_psd(ch.t1(), ch.P1), random_psd(ch.t2(), ch.P2)};
    rep.worst_input_violation =
        std::max(rep.worst_input_violation, genie_rates(ch, S, g_star).sum() - base);
    ++rep.input_samples;
  }

  int accepted = 0;
  int attempts = 0;
  while (accepted < samples && attempts < samples * 20) {
    ++attempts;
    const double scale = 0.02 + 0.3 * uni(rng);
    GenieParameters g = g_star;
    for (Eigen::Index i = 0; i < g.A1.rows(); ++i)
      for (Eigen::Index j = 0; j < g.A1.cols(); ++j) g.A1(i, j) += scale * gauss();
    for (Eigen::Index i = 0; i < g.A2.rows(); ++i)
      for (Eigen::Index j = 0; j < g.A2.cols(); ++j) g.A2(i, j) += scale * gauss();
    // keep Sigma on the equality surface of the dominance constraints
    Mat sigma1 = g.Sigma1, sigma2 = g.Sigma2;
    bool ok = true;
    for (int it = 0; it < 500 && ok; ++it) {
      Mat s1inv, s2inv;
      try {
        s1inv = spd_inverse(sigma1, ErrorCode::SingularSigma, "sampled Sigma1 singular");
        sigma2 = eye(ch.r1()) - g.A1 * s1inv * g.A1.transpose();
        s2inv = spd_inverse(sigma2, ErrorCode::SingularSigma, "sampled Sigma2 singular");
        sigma1 = eye(ch.r2()) - g.A2 * s2inv * g.A2.transpose();
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) continue;
    g.Sigma1 = sigma1;
    g.Sigma2 = sigma2;
    try {
      if (!validate_genie(ch, g).ok()) continue;
      const double value = genie_rates(ch, S_star, g).sum();
      rep.worst_genie_violation = std::max(rep.worst_genie_violation, base - value);
      ++accepted;
    } catch (const Error&) {
      continue;
    }
  }
  rep.genie_samples = accepted;
  return rep;
}

}  // namespace nicert
