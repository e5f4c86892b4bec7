// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#pragma once

#include <optional>
#include <string>

#include "nicert/miso_simo.hpp"

namespace nicert {

/// Everything one run produces. Serialization is deterministic: fixed key
/// order, every float printed as %.6f, no volatile fields (timing goes to
/// stderr, not into the report).
struct RunReport {
  std::string command;  // "certify" or "bounds"
  MimoChannel channel;
  ChannelClass channel_class;
  SolverConfig config;

  double lower_sum_rate = 0.0;
  CovariancePair lower_S;
  KktCertificate kkt;

  std::optional<double> upper_value;
  std::optional<GenieParameters> genie;
  std::optional<CovariancePair> upper_argmax;

  std::optional<NoisyVerdict> verdict;
  std::optional<HkSearchResult> hk_witness;
  std::optional<CovariancePair> lifted_S;  // original-antenna covariances for MISO runs
  std::string route;                       // which certifier handled the channel

  struct CrossCheck {
    bool passed = false;
    double lower = 0.0;
    std::optional<double> upper;
  };
  std::optional<CrossCheck> cross_check;  // generic pipeline run on the reduced channel

  std::string tool_version = "0.1.0";
};

std::string report_to_json(const RunReport& report);
std::string report_to_text(const RunReport& report);

/// Fixed-format float used across all report surfaces.
std::string format_fixed(double value);

struct SweepRow {
  double P1 = 0.0, P2 = 0.0, theta2 = 0.0, a2_max = 0.0;
};

/// CSV with header "P1,P2,theta2,a2_max"; rows sorted by (P2, theta2).
std::string sweep_to_csv(std::vector<SweepRow> rows);

/// Strict channel file parsing: top-level map with exactly the keys
/// H1, F1, H2, F2 (row-major nested arrays) and P1, P2 (numbers).
/// Throws Error{ParseError} naming the offending key.
MimoChannel load_channel_json(const std::string& text);
MimoChannel load_channel_file(const std::string& path);

/// Genie file: keys A1, A2, Sigma1, Sigma2 (row-major nested arrays).
GenieParameters load_genie_json(const std::string& text);
GenieParameters load_genie_file(const std::string& path);

std::string channel_to_json(const MimoChannel& ch);

}  // namespace nicert
