// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nicert/report.hpp"
#include "nicert/reference_cases.hpp"

namespace {

using namespace nicert;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitNotCertified = 2;

struct CommonFlags {
  SolverConfig cfg;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tol", flags.cfg.grad_tol, "solver stationarity tolerance");
  cmd->add_option("--restarts", flags.cfg.restarts, "gradient-ascent restarts");
  cmd->add_option("--seed", flags.cfg.seed, "random-start seed");
  cmd->add_option("--max-iters", flags.cfg.max_iters, "iteration cap per restart");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
}

void emit(const RunReport& report, const std::string& format) {
  if (format == "json") {
    std::cout << report_to_json(report);
  } else {
    std::cout << report_to_text(report);
  }
}

bool nearly(double a, double b) { return std::abs(a - b) <= 1e-12; }

// Routes a validated channel to the matching certifier and assembles the
// report. Returns the exit code.
int run_certify(const MimoChannel& ch, const CommonFlags& flags, bool cross_check) {
  RunReport rep;
  rep.command = "certify";
  rep.channel = ch;
  rep.channel_class = classify(ch);
  rep.config = flags.cfg;

  NoisyVerdict verdict;

  if (rep.channel_class.miso) {
    auto [std_form, reduced] = reduce_miso(ch);
    const bool z1 = std_form.a1 <= 0.0 || nearly(std::cos(std_form.theta1), 0.0);
    const bool z2 = std_form.a2 <= 0.0 || nearly(std::cos(std_form.theta2), 0.0);
    MisoTinSolution tin = solve_tin_miso(std_form, flags.cfg);
    if (!z1 && !z2) {
      MisoCertification cert = certify_miso(std_form, tin);
      verdict = cert.verdict;
      rep.route = "miso_closed_form";
      if (verdict.passed) {
        // scalar side-information construction gives the matching upper bound
        GenieParameters genie{Mat::Constant(1, 1, cert.conditions.A1),
                              Mat::Constant(1, 1, cert.conditions.A2),
                              Mat::Constant(1, 1, cert.conditions.sigma1_sq),
                              Mat::Constant(1, 1, cert.conditions.sigma2_sq)};
        UpperSolution up = solve_upper(reduced, genie, flags.cfg);
        rep.upper_value = up.value;
        rep.genie = genie;
        rep.upper_argmax = up.S;
      }
    } else if (z1) {
      verdict = certify_miso_z(std_form, tin);
      rep.route = "miso_one_sided";
      if (!verdict.passed) rep.hk_witness = hk_best_split_miso_z(std_form);
    } else {
      const StandardMiso swapped = std_form.swapped();
      MisoTinSolution tin_swapped = solve_tin_miso(swapped, flags.cfg);
      verdict = certify_miso_z(swapped, tin_swapped);
      rep.route = "miso_one_sided_swapped";
      std::swap(verdict.S.S1, verdict.S.S2);
      verdict.kkt = kkt_certificate(reduced, verdict.S);
      if (!verdict.passed) rep.hk_witness = hk_best_split_miso_z(swapped);
    }
    rep.lower_sum_rate = tin.sum_rate;
    rep.lower_S = tin.S;
    rep.kkt = kkt_certificate(reduced, tin.S);
    rep.lifted_S = CovariancePair{lift_covariance(tin.S.S1, std_form, 1),
                                  lift_covariance(tin.S.S2, std_form, 2)};
    if (cross_check) {
      const NoisyVerdict mimo = certify_mimo(reduced, flags.cfg);
      rep.cross_check = RunReport::CrossCheck{mimo.passed, mimo.lower, mimo.upper};
    }
  } else if (rep.channel_class.simo) {
    auto [std_form, reduced] = reduce_simo(ch);
    const bool z_clean_rx2 = std_form.a1 <= 0.0 || nearly(std::cos(std_form.varphi2), 0.0);
    const bool z_clean_rx1 = std_form.a2 <= 0.0 || nearly(std::cos(std_form.varphi1), 0.0);
    if (z_clean_rx2) {
      verdict = certify_simo_z(std_form);
      rep.route = "simo_one_sided";
    } else if (z_clean_rx1) {
      verdict = certify_simo_z(make_standard_simo(std_form.varphi2, std_form.varphi1,
                                                  std_form.a2, std_form.a1, std_form.P2,
                                                  std_form.P1));
      rep.route = "simo_one_sided_swapped";
      std::swap(verdict.S.S1, verdict.S.S2);
    } else {
      verdict = certify_simo(std_form);
      rep.route = "simo_existence";
    }
    const TinSolution tin = solve_tin(reduced, flags.cfg);
    rep.lower_sum_rate = tin.sum_rate;
    rep.lower_S = tin.S;
    rep.kkt = tin.kkt;
    if (verdict.passed && verdict.genie) {
      UpperSolution up = solve_upper(reduced, *verdict.genie, flags.cfg);
      rep.upper_value = up.value;
      rep.genie = verdict.genie;
      rep.upper_argmax = up.S;
    }
    if (cross_check) {
      const NoisyVerdict mimo = certify_mimo(reduced, flags.cfg);
      rep.cross_check = RunReport::CrossCheck{mimo.passed, mimo.lower, mimo.upper};
    }
  } else if (rep.channel_class.zic_f1_zero) {
    verdict = certify_mimo_z(ch, flags.cfg);
    rep.route = "mimo_one_sided";
    rep.lower_sum_rate = verdict.lower;
    rep.lower_S = verdict.S;
    rep.kkt = verdict.kkt;
    rep.upper_value = verdict.upper;
    rep.genie = verdict.genie;
    rep.upper_argmax = verdict.upper_argmax;
  } else {
    verdict = certify_mimo(ch, flags.cfg);
    rep.route = "mimo_general";
    rep.lower_sum_rate = verdict.lower;
    rep.lower_S = verdict.S;
    rep.kkt = verdict.kkt;
    rep.upper_value = verdict.upper;
    rep.genie = verdict.genie;
    rep.upper_argmax = verdict.upper_argmax;
  }

  rep.verdict = verdict;
  emit(rep, flags.format);
  return verdict.passed ? kExitPass : kExitNotCertified;
}

int run_bounds(const MimoChannel& ch, const CommonFlags& flags,
               const std::string& genie_path) {
  RunReport rep;
  rep.command = "bounds";
  rep.channel = ch;
  rep.channel_class = classify(ch);
  rep.config = flags.cfg;

  const TinSolution tin = solve_tin(ch, flags.cfg);
  rep.lower_sum_rate = tin.sum_rate;
  rep.lower_S = tin.S;
  rep.kkt = tin.kkt;

  std::optional<GenieParameters> genie;
  if (!genie_path.empty()) {
    GenieParameters g = load_genie_file(genie_path);
    if (!validate_genie(ch, g).ok()) {
      throw Error(ErrorCode::InvalidGenie, "supplied side-information parameters are invalid");
    }
    genie = std::move(g);
  } else {
    // try the certificate construction from the solved covariances
    const ASolve A = solve_A(ch, tin.S);
    const RiccatiOutcome ric = solve_sigma(A.A1, A.A2);
    if (ric.status == RiccatiOutcome::Status::Solved) {
      GenieParameters g{A.A1, A.A2, ric.solution->Sigma1, ric.solution->Sigma2};
      const double scale1 = 1.0 + (tin.S.S1 * ch.F1.transpose()).norm();
      const double scale2 = 1.0 + (tin.S.S2 * ch.F2.transpose()).norm();
      const bool markov_ok = A.residual1 <= tol::kCertMargin * scale1 &&
                             A.residual2 <= tol::kCertMargin * scale2;
      if (markov_ok && validate_genie(ch, g).ok()) genie = std::move(g);
    }
  }
  if (genie) {
    UpperSolution up = solve_upper(ch, *genie, flags.cfg);
    rep.upper_value = up.value;
    rep.genie = genie;
    rep.upper_argmax = up.S;
  }
  emit(rep, flags.format);
  return kExitPass;
}

int run_sweep(double p1, const std::vector<double>& p2_values, int theta2_grid,
              double a2_resolution, const std::string& mode) {
  if (mode != "miso-z") {
    throw Error(ErrorCode::ParseError, "unsupported sweep mode '" + mode + "'");
  }
  if (p1 <= 0.0 || theta2_grid <= 0 || a2_resolution <= 0.0) {
    throw Error(ErrorCode::ParseError, "sweep grid parameters must be positive");
  }
  std::vector<SweepRow> rows;
  for (double p2 : p2_values) {
    if (p2 <= 0.0) throw Error(ErrorCode::ParseError, "sweep powers must be positive");
    for (int k = 1; k <= theta2_grid; ++k) {
      const double theta2 = (M_PI / 2) * k / (theta2_grid + 1);
      rows.push_back({p1, p2, theta2, max_noisy_a2_miso_z(p1, p2, theta2, a2_resolution)});
    }
  }
  std::cout << sweep_to_csv(std::move(rows));
  return kExitPass;
}

int run_examples(const std::string& format) {
  bool all_pass = true;
  std::string json_out = "[";
  for (int i = 1; i <= reference::case_count(); ++i) {
    const reference::CaseResult res = reference::run_reference_case(i);
    all_pass = all_pass && res.passed;
    if (format == "json") {
      if (i > 1) json_out += ",";
      json_out += "{\"case\":" + std::to_string(res.index) + ",\"title\":\"" + res.title +
                  "\",\"passed\":" + (res.passed ? "true" : "false") + ",\"checks\":[";
      for (size_t r = 0; r < res.rows.size(); ++r) {
        const auto& row = res.rows[r];
        if (r > 0) json_out += ",";
        json_out += "{\"name\":\"" + row.name + "\",\"expected\":" + format_fixed(row.expected) +
                    ",\"actual\":" + format_fixed(row.actual) +
                    ",\"pass\":" + (row.pass ? "true" : "false") + "}";
      }
      json_out += "]}";
    } else {
      std::printf("case %d (%s): %s\n", res.index, res.title.c_str(),
                  res.passed ? "pass" : "FAIL");
      for (const auto& row : res.rows) {
        const char* rel = row.kind == reference::CheckKind::Near
                              ? "~"
                              : (row.kind == reference::CheckKind::Below ? "<" : ">=");
        std::printf("  %-34s %s %s  got %s  [%s]\n", row.name.c_str(), rel,
                    format_fixed(row.expected).c_str(), format_fixed(row.actual).c_str(),
                    row.pass ? "ok" : "FAIL");
      }
    }
  }
  if (format == "json") {
    json_out += "]\n";
    std::cout << json_out;
  }
  return all_pass ? kExitPass : kExitNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-rate bound computation and noisy-interference certification for "
               "two-user Gaussian interference channels"};
  app.require_subcommand(1);

  std::string channel_path, genie_path;
  bool cross_check = false;
  CommonFlags certify_flags, bounds_flags;

  CLI::App* certify = app.add_subcommand(
      "certify", "decide whether single-user detection achieves the sum-rate capacity");
  certify->add_option("channel", channel_path, "channel JSON file")->required();
  certify->add_flag("--cross-check", cross_check,
                    "also run the general pipeline on reduced channels");
  add_common(certify, certify_flags);

  CLI::App* bounds = app.add_subcommand("bounds", "lower and upper sum-rate bounds");
  bounds->add_option("channel", channel_path, "channel JSON file")->required();
  bounds->add_option("--genie", genie_path, "side-information JSON file");
  add_common(bounds, bounds_flags);

  double p1 = 1.0;
  std::vector<double> p2_values{10.0};
  int theta2_grid = 7;
  double a2_resolution = 1e-3;
  std::string mode = "miso-z";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "largest certifiable cross gain over a parameter grid (CSV)");
  sweep->add_option("--p1", p1, "power of the clean user");
  sweep->add_option("--p2", p2_values, "interfering-user powers")->delimiter(',');
  sweep->add_option("--theta2-grid", theta2_grid, "number of theta2 points in (0, pi/2)");
  sweep->add_option("--a2-resolution", a2_resolution, "bisection resolution");
  sweep->add_option("--mode", mode, "sweep mode");

  std::string examples_format = "text";
  CLI::App* examples = app.add_subcommand("examples", "run the embedded reference cases");
  examples->add_option("--format", examples_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  int exit_code = kExitError;
  try {
    if (certify->parsed()) {
      exit_code = run_certify(load_channel_file(channel_path), certify_flags, cross_check);
    } else if (bounds->parsed()) {
      exit_code = run_bounds(load_channel_file(channel_path), bounds_flags, genie_path);
    } else if (sweep->parsed()) {
      exit_code = run_sweep(p1, p2_values, theta2_grid, a2_resolution, mode);
    } else if (examples->parsed()) {
      exit_code = run_examples(examples_format);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            start);
  std::cerr << "elapsed_ms: " << elapsed.count() << "\n";
  return exit_code;
}
