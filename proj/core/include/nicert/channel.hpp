// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <string>
#include <utility>

#include "nicert/types.hpp"

namespace nicert {

/// Two-user vector Gaussian interference channel
///   y1 = H1 x1 + F2 x2 + z1,   y2 = H2 x2 + F1 x1 + z2
/// with unit-covariance noise and average power budgets P1, P2.
/// H1: r1 x t1, F1: r2 x t1, H2: r2 x t2, F2: r1 x t2.
struct MimoChannel {
  Mat H1, F1, H2, F2;
  double P1 = 0.0;
  double P2 = 0.0;

  Eigen::Index r1() const { return H1.rows(); }
  Eigen::Index r2() const { return H2.rows(); }
  Eigen::Index t1() const { return H1.cols(); }
  Eigen::Index t2() const { return H2.cols(); }

  /// Same channel with the user roles exchanged.
  MimoChannel swapped() const { return MimoChannel{H2, F2, H1, F1, P2, P1}; }
};

/// Checks shapes and the standing assumptions (H_i != 0, P_i > 0).
/// Throws DimensionMismatch, ZeroDirectLink or NonpositivePower.
MimoChannel validate_channel(Mat H1, Mat F1, Mat H2, Mat F2, double P1, double P2);

enum class ChannelKind {
  GeneralMimo,
  ZicF1Zero,
  Miso,
  Simo,
  Parallel,
  SymmetricMiso,
  SymmetricSimo,
};

struct ChannelClass {
  bool miso = false;        // r1 = r2 = 1
  bool simo = false;        // t1 = t2 = 1
  bool zic_f1_zero = false; // ||F1|| below the zero tolerance
  bool parallel = false;    // all four matrices square diagonal
  bool symmetric = false;   // H1 = H2, F1 = F2, P1 = P2 within tolerance

  ChannelKind kind() const;
};

const char* channel_kind_name(ChannelKind kind);

ChannelClass classify(const MimoChannel& ch);

/// Two-antenna standard form of a MISO channel: unit-norm direct vectors
/// h_i = [cos theta_i, sin theta_i], cross vectors f_i = [sqrt(a_i), 0],
/// powers rescaled by the direct-link gains. reduction_i is the orthonormal
/// Q_i acting on transmitter i's antenna space; h_norm_i = ||hat h_i||.
struct StandardMiso {
  double theta1 = 0.0, theta2 = 0.0;  // in [0, pi]
  double a1 = 0.0, a2 = 0.0;
  double P1 = 0.0, P2 = 0.0;
  int rho1 = 1, rho2 = 1;  // +1 when theta_i <= pi/2, else -1
  Mat reduction1, reduction2;
  double h_norm1 = 0.0, h_norm2 = 0.0;

  Vec h1() const { return (Vec(2) << std::cos(theta1), std::sin(theta1)).finished(); }
  Vec h2() const { return (Vec(2) << std::cos(theta2), std::sin(theta2)).finished(); }
  Vec f1() const { return (Vec(2) << std::sqrt(a1), 0.0).finished(); }
  Vec f2() const { return (Vec(2) << std::sqrt(a2), 0.0).finished(); }

  MimoChannel reduced_channel() const;
  StandardMiso swapped() const;
};

/// Two-antenna standard form of a SIMO channel. varphi_i is the angle between
/// receiver i's direct vector and the interference it sees; reduction_i is the
/// orthonormal rotation applied to receiver i.
struct StandardSimo {
  double varphi1 = 0.0, varphi2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
  double P1 = 0.0, P2 = 0.0;
  Mat reduction1, reduction2;
  double h_norm1 = 0.0, h_norm2 = 0.0;

  Vec h1() const { return (Vec(2) << std::cos(varphi1), std::sin(varphi1)).finished(); }
  Vec h2() const { return (Vec(2) << std::cos(varphi2), std::sin(varphi2)).finished(); }
  Vec f1() const { return (Vec(2) << std::sqrt(a1), 0.0).finished(); }
  Vec f2() const { return (Vec(2) << std::sqrt(a2), 0.0).finished(); }

  MimoChannel reduced_channel() const;
};

/// Antenna reduction for row-vector channels (r1 = r2 = 1). The reduced
/// channel is rate-equivalent to the original under lift_covariance.
std::pair<StandardMiso, MimoChannel> reduce_miso(const MimoChannel& ch);

/// Receive-side reduction for column-vector channels (t1 = t2 = 1).
std::pair<StandardSimo, MimoChannel> reduce_simo(const MimoChannel& ch);

/// Maps a 2x2 covariance for the reduced channel back to the original antenna
/// space of the given user: (1/||hat h||^2) Q^T blockdiag(S, 0) Q.
Mat lift_covariance(const Mat& S, const StandardMiso& std_form, int user);

}  // namespace nicert
