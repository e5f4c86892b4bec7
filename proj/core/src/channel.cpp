// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include "nicert/channel.hpp"

#include <cmath>
#include <vector>

#include "nicert/matrix_kit.hpp"

namespace nicert {

namespace {

bool near_zero(const Mat& M, double scale) {
  return M.norm() <= tol::kZero * (1.0 + scale);
}

bool is_diagonal(const Mat& M, double scale) {
  if (M.rows() != M.cols()) return false;
  Mat off = M;
  off.diagonal().setZero();
  return near_zero(off, scale);
}

// Orthonormal basis whose first rows are the given seed directions.
// Seeds must already be orthonormal; remaining rows come from Gram-Schmidt
// over the coordinate axes.
Mat complete_basis(const std::vector<Vec>& seeds, Eigen::Index dim) {
  std::vector<Vec> rows = seeds;
  for (Eigen::Index k = 0; k < dim && static_cast<Eigen::Index>(rows.size()) < dim; ++k) {
    Vec v = Vec::Zero(dim);
    v(k) = 1.0;
    for (const Vec& q : rows) v -= (q.dot(v)) * q;
    const double n = v.norm();
    if (n > 1e-8) rows.push_back(v / n);
  }
  Mat Q(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) Q.row(i) = rows[static_cast<size_t>(i)].transpose();
  return Q;
}

// Rotation mapping primary -> e1 and, when secondary has a component
// orthogonal to primary, that component -> e2.
Mat rotation_for(const Vec& primary, const Vec& secondary) {
  const Eigen::Index dim = primary.size();
  std::vector<Vec> seeds;
  const double np = primary.norm();
  if (np > 0) {
    Vec q1 = primary / np;
    seeds.push_back(q1);
    Vec perp = secondary - (q1.dot(secondary)) * q1;
    const double nperp = perp.norm();
    if (nperp > 1e-12 * (1.0 + secondary.norm())) seeds.push_back(perp / nperp);
  }
  return complete_basis(seeds, dim);
}

double angle_between(const Vec& u, const Vec& v) {
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

MimoChannel validate_channel(Mat H1, Mat F1, Mat H2, Mat F2, double P1, double P2) {
  if (H1.size() == 0 || H2.size() == 0 || F1.size() == 0 || F2.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "empty channel matrix");
  }
  if (F2.rows() != H1.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "H1 and F2 must have the same row count (receiver 1)");
  }
  if (F1.rows() != H2.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "H2 and F1 must have the same row count (receiver 2)");
  }
  if (F1.cols() != H1.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "H1 and F1 must have the same column count (transmitter 1)");
  }
  if (F2.cols() != H2.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "H2 and F2 must have the same column count (transmitter 2)");
  }
  const double scale = std::max(H1.norm(), H2.norm());
  if (near_zero(H1, scale)) throw Error(ErrorCode::ZeroDirectLink, "H1 is zero");
  if (near_zero(H2, scale)) throw Error(ErrorCode::ZeroDirectLink, "H2 is zero");
  if (!(P1 > 0.0)) throw Error(ErrorCode::NonpositivePower, "P1 must be positive");
  if (!(P2 > 0.0)) throw Error(ErrorCode::NonpositivePower, "P2 must be positive");
  return MimoChannel{std::move(H1), std::move(F1), std::move(H2), std::move(F2), P1, P2};
}

ChannelKind ChannelClass::kind() const {
  if (miso) return symmetric ? ChannelKind::SymmetricMiso : ChannelKind::Miso;
  if (simo) return symmetric ? ChannelKind::SymmetricSimo : ChannelKind::Simo;
  if (parallel) return ChannelKind::Parallel;
  if (zic_f1_zero) return ChannelKind::ZicF1Zero;
  return ChannelKind::GeneralMimo;
}

const char* channel_kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::GeneralMimo: return "general_mimo";
    case ChannelKind::ZicF1Zero: return "zic_f1_zero";
    case ChannelKind::Miso: return "miso";
    case ChannelKind::Simo: return "simo";
    case ChannelKind::Parallel: return "parallel";
    case ChannelKind::SymmetricMiso: return "symmetric_miso";
    case ChannelKind::SymmetricSimo: return "symmetric_simo";
  }
  return "unknown";
}

ChannelClass classify(const MimoChannel& ch) {
  ChannelClass out;
  const double scale = std::max(ch.H1.norm(), ch.H2.norm());
  out.miso = ch.r1() == 1 && ch.r2() == 1;
  out.simo = ch.t1() == 1 && ch.t2() == 1;
  out.zic_f1_zero = near_zero(ch.F1, scale);
  out.parallel = is_diagonal(ch.H1, scale) && is_diagonal(ch.H2, scale) &&
                 is_diagonal(ch.F1, scale) && is_diagonal(ch.F2, scale);
  out.symmetric = ch.H1.rows() == ch.H2.rows() && ch.H1.cols() == ch.H2.cols() &&
                  near_zero(ch.H1 - ch.H2, scale) && near_zero(ch.F1 - ch.F2, scale) &&
                  std::abs(ch.P1 - ch.P2) <= tol::kZero * (1.0 + std::abs(ch.P1));
  return out;
}

MimoChannel StandardMiso::reduced_channel() const {
  return MimoChannel{h1().transpose(), f1().transpose(), h2().transpose(), f2().transpose(),
                     P1, P2};
}

StandardMiso StandardMiso::swapped() const {
  StandardMiso s;
  s.theta1 = theta2; s.theta2 = theta1;
  s.a1 = a2; s.a2 = a1;
  s.P1 = P2; s.P2 = P1;
  s.rho1 = rho2; s.rho2 = rho1;
  s.reduction1 = reduction2; s.reduction2 = reduction1;
  s.h_norm1 = h_norm2; s.h_norm2 = h_norm1;
  return s;
}

MimoChannel StandardSimo::reduced_channel() const {
  return MimoChannel{h1(), f1(), h2(), f2(), P1, P2};
}

std::pair<StandardMiso, MimoChannel> reduce_miso(const MimoChannel& ch) {
  if (ch.r1() != 1 || ch.r2() != 1) {
    throw Error(ErrorCode::HypothesisViolated, "reduce_miso needs a row-vector channel");
  }
  StandardMiso s;
  auto reduce_user = [](const Vec& h_hat, const Vec& f_hat, double P_hat, double& theta,
                        double& a, double& P, Mat& Q, double& h_norm) {
    h_norm = h_hat.norm();
    const double f_norm = f_hat.norm();
    a = (f_norm * f_norm) / (h_norm * h_norm);
    P = P_hat * h_norm * h_norm;
    if (f_norm <= tol::kZero * (1.0 + h_norm)) {
      // no cross link: the angle is free, align the direct vector with e1
      a = 0.0;
      theta = 0.0;
      Q = rotation_for(h_hat, h_hat);
    } else {
      theta = angle_between(h_hat, f_hat);
      Q = rotation_for(f_hat, h_hat);
    }
  };
  reduce_user(ch.H1.row(0).transpose(), ch.F1.row(0).transpose(), ch.P1, s.theta1, s.a1, s.P1,
              s.reduction1, s.h_norm1);
  reduce_user(ch.H2.row(0).transpose(), ch.F2.row(0).transpose(), ch.P2, s.theta2, s.a2, s.P2,
              s.reduction2, s.h_norm2);
  s.rho1 = s.theta1 <= M_PI / 2 ? 1 : -1;
  s.rho2 = s.theta2 <= M_PI / 2 ? 1 : -1;
  return {s, s.reduced_channel()};
}

std::pair<StandardSimo, MimoChannel> reduce_simo(const MimoChannel& ch) {
  if (ch.t1() != 1 || ch.t2() != 1) {
    throw Error(ErrorCode::HypothesisViolated, "reduce_simo needs a column-vector channel");
  }
  StandardSimo s;
  // receiver i is rotated so that the interference direction f_hat_j lands on
  // e1 and its own direct vector on span{e1, e2}; inputs are rescaled so the
  // reduced direct vectors have unit norm
  auto reduce_receiver = [](const Vec& h_own, const Vec& f_in, double& varphi, Mat& Q) {
    if (f_in.norm() <= tol::kZero * (1.0 + h_own.norm())) {
      varphi = 0.0;
      Q = rotation_for(h_own, h_own);
    } else {
      varphi = angle_between(h_own, f_in);
      Q = rotation_for(f_in, h_own);
    }
  };
  const Vec h1_hat = ch.H1.col(0), f1_hat = ch.F1.col(0);
  const Vec h2_hat = ch.H2.col(0), f2_hat = ch.F2.col(0);
  s.h_norm1 = h1_hat.norm();
  s.h_norm2 = h2_hat.norm();
  s.a1 = std::pow(f1_hat.norm() / s.h_norm1, 2);
  s.a2 = std::pow(f2_hat.norm() / s.h_norm2, 2);
  s.P1 = ch.P1 * s.h_norm1 * s.h_norm1;
  s.P2 = ch.P2 * s.h_norm2 * s.h_norm2;
  reduce_receiver(h1_hat, f2_hat, s.varphi1, s.reduction1);
  reduce_receiver(h2_hat, f1_hat, s.varphi2, s.reduction2);
  return {s, s.reduced_channel()};
}

Mat lift_covariance(const Mat& S, const StandardMiso& std_form, int user) {
  if (S.rows() != 2 || S.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "lift_covariance expects a 2x2 covariance");
  }
  const Mat& Q = user == 1 ? std_form.reduction1 : std_form.reduction2;
  const double h_norm = user == 1 ? std_form.h_norm1 : std_form.h_norm2;
  const Eigen::Index t = Q.rows();
  Mat padded = Mat::Zero(t, t);
  const Eigen::Index k = std::min<Eigen::Index>(2, t);
  padded.topLeftCorner(k, k) = S.topLeftCorner(k, k);
  return (Q.transpose() * padded * Q) / (h_norm * h_norm);
}

}  // namespace nicert
