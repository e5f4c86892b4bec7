#include <doctest.h>

#include "nicert/miso_simo.hpp"
#include "nicert/reference_cases.hpp"
#include "test_support.hpp"

using namespace nicert;

TEST_CASE("miso conditions with zero mixing scalars") {
  // beam orthogonal to the cross direction: f^T S h = 0, so A_i = 0 and the
  // sigma quadratics collapse to 1
  const StandardMiso s = make_standard_miso(0.6, 0.6, 0.2, 0.2, 1.0, 1.0);
  MisoTinSolution tin;
  tin.phi1 = 0.0;
  tin.phi2 = 0.0;
  Mat beam(2, 2);
  beam << 0, 0, 0, 1;  // along e2, orthogonal to f = [sqrt(a), 0]
  tin.S = {beam, beam};
  tin.sum_rate = tin_rates(s.reduced_channel(), tin.S).sum();
  const MisoCertification cert = certify_miso(s, tin);
  CHECK(cert.conditions.A1 == doctest::Approx(0.0));
  CHECK(cert.conditions.A2 == doctest::Approx(0.0));
  CHECK(cert.conditions.sigma1_sq == doctest::Approx(1.0));
  CHECK(cert.conditions.sigma2_sq == doctest::Approx(1.0));
  CHECK(cert.conditions.existence_ok);
  CHECK(cert.verdict.passed == (cert.conditions.bar_sigma1_sq <= 1.0 + 1e-9 &&
                                cert.conditions.bar_sigma2_sq <= 1.0 + 1e-9));
}

TEST_CASE("existence gate fails once the mixing scalars exceed the budget") {
  // push the cross gains up until |A1| + |A2| > 1
  bool found = false;
  for (double a = 0.5; a <= 8.0 && !found; a *= 1.3) {
    const StandardMiso s = make_standard_miso(0.35, 0.35, a, a, 8.0, 8.0);
    const MisoTinSolution tin = solve_tin_miso(s);
    if (tin.S.S1.trace() <= 1e-9 || tin.S.S2.trace() <= 1e-9) continue;
    const MisoCertification cert = certify_miso(s, tin);
    if (std::abs(cert.conditions.A1) + std::abs(cert.conditions.A2) > 1.2) {
      found = true;
      CHECK_FALSE(cert.conditions.existence_ok);
      CHECK_FALSE(cert.verdict.passed);
      const Condition* gate = cert.verdict.find("existence_abs_a");
      REQUIRE(gate != nullptr);
      CHECK(gate->margin < -tol::kCertMargin);
    }
  }
  CHECK(found);
}

TEST_CASE("certify_miso rejects degenerate hypotheses") {
  const StandardMiso z = make_standard_miso(M_PI / 2, 0.4, 0.2, 0.2, 1.0, 1.0);
  const MisoTinSolution tin = solve_tin_miso(z);
  CHECK_THROWS_AS(certify_miso(z, tin), Error);
}

TEST_CASE("one-sided miso test accepts a silent interferer") {
  const StandardMiso s = make_standard_miso(M_PI / 2, 0.7, 0.0, 0.0, 1.0, 2.0);
  const MisoTinSolution tin = solve_tin_miso(s);
  const NoisyVerdict v = certify_miso_z(s, tin);
  CHECK(v.passed);
}

TEST_CASE("one-sided miso test matches its own bisection boundary") {
  const double P1 = 1.0, P2 = 10.0, theta2 = M_PI / 4;
  const double a_max = max_noisy_a2_miso_z(P1, P2, theta2, 1e-4);
  CHECK(a_max > 0.0);
  CHECK(a_max < 0.4);
  const auto passes = [&](double a2) {
    const StandardMiso s = make_standard_miso(M_PI / 2, theta2, 0.0, a2, P1, P2);
    return certify_miso_z(s, solve_tin_miso(s)).passed;
  };
  CHECK(passes(a_max - 2e-4));
  CHECK_FALSE(passes(a_max + 2e-4));
  // halving the resolution moves the reported boundary by at most one step
  const double finer = max_noisy_a2_miso_z(P1, P2, theta2, 5e-5);
  CHECK(std::abs(finer - a_max) <= 1.5e-4);
}

TEST_CASE("reference counterexample fails the one-sided test") {
  const StandardMiso s = reference::miso_z_case();
  const MisoTinSolution tin = solve_tin_miso(s);
  CHECK(tin.sum_rate == doctest::Approx(1.3725).epsilon(1e-3));
  CHECK_FALSE(certify_miso_z(s, tin).passed);
}

TEST_CASE("simo certification covers the one-sided case") {
  const StandardSimo z = make_standard_simo(0.4, 0.8, 0.0, 0.6, 1.0, 2.0);
  const NoisyVerdict v = certify_simo(z);
  CHECK(v.passed);
  const NoisyVerdict vz = certify_simo_z(z);
  CHECK(vz.passed);
  CHECK(*v.sum_capacity == doctest::Approx(*vz.sum_capacity).epsilon(1e-9));
}

TEST_CASE("simo one-sided boundary is a2 = 1") {
  const StandardSimo at = make_standard_simo(0.5, 0.9, 0.0, 1.0, 1.0, 1.0);
  CHECK(certify_simo_z(at).passed);
  const StandardSimo beyond = make_standard_simo(0.5, 0.9, 0.0, 1.5, 1.0, 1.0);
  CHECK_FALSE(certify_simo_z(beyond).passed);
  CHECK_THROWS_AS(certify_simo_z(make_standard_simo(0.5, 0.9, 0.3, 0.5, 1.0, 1.0)), Error);
}

TEST_CASE("simo one-sided capacity decouples when both links are clean") {
  const double phi1 = 0.7, phi2 = 1.0, P1 = 1.3, P2 = 0.9;
  const StandardSimo s = make_standard_simo(phi1, phi2, 0.0, 0.0, P1, P2);
  const NoisyVerdict v = certify_simo_z(s);
  REQUIRE(v.passed);
  const double expected = 0.5 * std::log1p(P1) + 0.5 * std::log1p(P2);
  CHECK(*v.sum_capacity == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("symmetric closed form branches") {
  // orthogonal interference: the first branch becomes a <= 1
  CHECK(symmetric_simo_closed_form(M_PI / 2, 1.0, 3.0));
  CHECK_FALSE(symmetric_simo_closed_form(M_PI / 2, 1.01, 3.0));
  // aligned interference: second branch, holds iff 1 >= 2 sqrt(a) (1 + aP)
  const double P = 2.0;
  const auto aligned_ok = [&](double a) { return 1.0 >= 2.0 * std::sqrt(a) * (1.0 + a * P); };
  for (double a : {0.01, 0.05, 0.2, 0.5}) {
    CHECK(symmetric_simo_closed_form(0.0, a, P) == aligned_ok(a));
  }
}

TEST_CASE("symmetric simo: closed form agrees with the search on a small grid") {
  const double P = 2.0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      const double theta = (M_PI / 2) * i / 11.0;
      const double a = 1.4 * j / 10.0;
      const StandardSimo s = make_standard_simo(theta, theta, a, a, P, P);
      const bool search = certify_simo(s).passed;
      const bool closed = symmetric_simo_closed_form(theta, a, P);
      if (search != closed) {
        // disagreement may only happen within the grid band of the boundary
        double lo = 0.0, hi = 2.0;
        for (int it = 0; it < 40; ++it) {
          const double mid = 0.5 * (lo + hi);
          (symmetric_simo_closed_form(theta, mid, P) ? lo : hi) = mid;
        }
        CHECK(std::abs(a - 0.5 * (lo + hi)) <= 0.05);
      }
    }
  }
}

TEST_CASE("simo pass implies the bound is tight at full power") {
  std::mt19937_64 rng(307);
  std::uniform_real_distribution<double> u(0.2, 1.3);
  int exercised = 0;
  for (int trial = 0; trial < 20 && exercised < 5; ++trial) {
    const StandardSimo s = make_standard_simo(u(rng), u(rng), 0.05 + 0.2 * u(rng),
                                              0.05 + 0.2 * u(rng), 1.0 + u(rng), 1.0 + u(rng));
    const NoisyVerdict v = certify_simo(s);
    if (!v.passed || !v.genie) continue;
    const MimoChannel reduced = s.reduced_channel();
    const UpperSolution up = solve_upper(reduced, *v.genie);
    CHECK(std::abs(up.value - *v.sum_capacity) <= 1e-6 * (1.0 + *v.sum_capacity));
    CHECK(up.S.S1(0, 0) == doctest::Approx(s.P1).epsilon(1e-5));
    CHECK(up.S.S2(0, 0) == doctest::Approx(s.P2).epsilon(1e-5));
    ++exercised;
  }
  CHECK(exercised == 5);
}

TEST_CASE("rate-split evaluation: no common message reproduces the baseline") {
  const StandardMiso s = reference::miso_z_case();
  const MisoTinSolution tin = solve_tin_miso(s);
  const double value = hk_sum_rate_miso_z(s, {tin.S.S2, Mat::Zero(2, 2)});
  CHECK(value == doctest::Approx(1.3725).epsilon(1e-3));
  CHECK(value == doctest::Approx(tin.sum_rate).epsilon(1e-9));
}

TEST_CASE("rate-split evaluation rejects infeasible splits") {
  const StandardMiso s = reference::miso_z_case();
  CHECK_THROWS_AS(hk_sum_rate_miso_z(s, {Mat::Identity(2, 2) * 8.0, Mat::Identity(2, 2) * 8.0}),
                  Error);
  Mat indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(hk_sum_rate_miso_z(s, {indefinite, Mat::Zero(2, 2)}), Error);
}

TEST_CASE("rate-split search dominates hand-picked splits") {
  const StandardMiso s = reference::miso_z_case();
  const HkSearchResult best = hk_best_split_miso_z(s);
  const MisoTinSolution tin = solve_tin_miso(s);
  CHECK(best.sum_rate >= tin.sum_rate);
  // all-common split along the direct link
  Mat common = s.P2 * s.h2() * s.h2().transpose();
  CHECK(best.sum_rate >= hk_sum_rate_miso_z(s, {Mat::Zero(2, 2), common}) - 1e-9);
  CHECK(best.sum_rate >= hk_sum_rate_miso_z(s, {reference::miso_z_reference_split().Sp,
                                                reference::miso_z_reference_split().Sc}) -
                             1e-9);
}
