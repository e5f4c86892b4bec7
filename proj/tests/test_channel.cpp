#include <doctest.h>

#include "nicert/channel.hpp"
#include "nicert/reference_cases.hpp"
#include "nicert/tin.hpp"
#include "test_support.hpp"

using namespace nicert;
using testsupport::random_matrix;
using testsupport::random_psd;

TEST_CASE("validate_channel accepts the reference dimensions") {
  const MimoChannel ch = reference::mimo_case();
  CHECK(ch.r1() == 3);
  CHECK(ch.r2() == 2);
  CHECK(ch.t1() == 2);
  CHECK(ch.t2() == 3);
}

TEST_CASE("validate_channel rejects bad inputs") {
  std::mt19937_64 rng(3);
  const Mat h = random_matrix(rng, 2, 2);
  CHECK_THROWS_WITH_AS(validate_channel(Mat::Zero(2, 2), h, h, h, 1.0, 1.0),
                       doctest::Contains("H1"), Error);
  // F2 row count must match H1
  CHECK_THROWS_AS(validate_channel(random_matrix(rng, 3, 2), random_matrix(rng, 2, 2),
                                   random_matrix(rng, 2, 2), random_matrix(rng, 2, 2), 1.0, 1.0),
                  Error);
  CHECK_THROWS_AS(validate_channel(h, h, h, h, 0.0, 1.0), Error);
  CHECK_THROWS_AS(validate_channel(h, h, h, h, 1.0, -2.0), Error);
}

TEST_CASE("classify flags") {
  std::mt19937_64 rng(5);
  const MimoChannel miso = validate_channel(random_matrix(rng, 1, 3), random_matrix(rng, 1, 3),
                                            random_matrix(rng, 1, 2), random_matrix(rng, 1, 2),
                                            1.0, 2.0);
  CHECK(classify(miso).miso);
  CHECK(classify(miso).kind() == ChannelKind::Miso);

  const MimoChannel simo = validate_channel(random_matrix(rng, 3, 1), random_matrix(rng, 2, 1),
                                            random_matrix(rng, 2, 1), random_matrix(rng, 3, 1),
                                            1.0, 2.0);
  CHECK(classify(simo).simo);

  Mat d1 = Mat::Zero(2, 2), d2 = Mat::Zero(2, 2);
  d1.diagonal() << 1.0, 2.0;
  d2.diagonal() << 0.3, 0.4;
  const MimoChannel parallel = validate_channel(d1, d2, d1, d2, 1.0, 1.0);
  CHECK(classify(parallel).parallel);
  CHECK(classify(parallel).symmetric);

  // one-sided interference combines with the antenna flags
  const MimoChannel miso_z = validate_channel(random_matrix(rng, 1, 2), Mat::Zero(1, 2),
                                              random_matrix(rng, 1, 2), random_matrix(rng, 1, 2),
                                              1.0, 1.0);
  const ChannelClass cls = classify(miso_z);
  CHECK(cls.miso);
  CHECK(cls.zic_f1_zero);
  CHECK(cls.kind() == ChannelKind::Miso);
}

TEST_CASE("reduce_miso angle conventions") {
  std::mt19937_64 rng(9);
  const Vec h = random_matrix(rng, 4, 1).col(0);

  // collinear cross link
  const MimoChannel collinear =
      validate_channel(h.transpose(), (2.0 * h).transpose(), random_matrix(rng, 1, 2),
                       random_matrix(rng, 1, 2), 1.0, 1.0);
  const auto [s_col, reduced_col] = reduce_miso(collinear);
  CHECK(s_col.theta1 == doctest::Approx(0.0).epsilon(1e-10));

  // orthogonal cross link
  Vec hp = random_matrix(rng, 4, 1).col(0);
  hp -= (h.dot(hp) / h.squaredNorm()) * h;
  const MimoChannel orth = validate_channel(h.transpose(), hp.transpose(),
                                            random_matrix(rng, 1, 2), random_matrix(rng, 1, 2),
                                            1.0, 1.0);
  const auto [s_orth, reduced_orth] = reduce_miso(orth);
  CHECK(s_orth.theta1 == doctest::Approx(M_PI / 2));

  CHECK(s_orth.theta1 >= 0.0);
  CHECK(s_orth.theta1 <= M_PI);
  CHECK(s_orth.a1 >= 0.0);
}

TEST_CASE("miso reductions are orthonormal and rate preserving") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index t1 = 2 + trial % 3, t2 = 2 + (trial / 3) % 3;
    const MimoChannel ch = validate_channel(
        random_matrix(rng, 1, t1), random_matrix(rng, 1, t1, 0.5), random_matrix(rng, 1, t2),
        random_matrix(rng, 1, t2, 0.5), 1.0 + trial % 3, 2.0);
    const auto [s, reduced] = reduce_miso(ch);
    CHECK((s.reduction1.transpose() * s.reduction1 - Mat::Identity(t1, t1)).norm() <= 1e-10);
    CHECK((s.reduction2.transpose() * s.reduction2 - Mat::Identity(t2, t2)).norm() <= 1e-10);

    const CovariancePair S{random_psd(rng, 2, s.P1), random_psd(rng, 2, s.P2)};
    const CovariancePair lifted{lift_covariance(S.S1, s, 1), lift_covariance(S.S2, s, 2)};
    const RatePair in_reduced = tin_rates(reduced, S);
    const RatePair in_original = tin_rates(ch, lifted);
    CHECK(in_reduced.r1 == doctest::Approx(in_original.r1).epsilon(1e-9));
    CHECK(in_reduced.r2 == doctest::Approx(in_original.r2).epsilon(1e-9));
    // trace scaling of the lift
    CHECK(lifted.S1.trace() ==
          doctest::Approx(S.S1.trace() / (s.h_norm1 * s.h_norm1)).epsilon(1e-12));
  }
}

TEST_CASE("simo reduction preserves rates under the power rescaling") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index r1 = 2 + trial % 3, r2 = 2 + (trial / 3) % 3;
    const MimoChannel ch = validate_channel(
        random_matrix(rng, r1, 1), random_matrix(rng, r2, 1, 0.5), random_matrix(rng, r2, 1),
        random_matrix(rng, r1, 1, 0.5), 1.5, 0.8);
    const auto [s, reduced] = reduce_simo(ch);
    CHECK((s.reduction1.transpose() * s.reduction1 - Mat::Identity(r1, r1)).norm() <= 1e-10);
    CHECK((s.reduction2.transpose() * s.reduction2 - Mat::Identity(r2, r2)).norm() <= 1e-10);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s1 = u(rng) * ch.P1, s2 = u(rng) * ch.P2;
    const CovariancePair original{Mat::Constant(1, 1, s1), Mat::Constant(1, 1, s2)};
    const CovariancePair rescaled{Mat::Constant(1, 1, s1 * s.h_norm1 * s.h_norm1),
                                  Mat::Constant(1, 1, s2 * s.h_norm2 * s.h_norm2)};
    const RatePair a = tin_rates(ch, original);
    const RatePair b = tin_rates(reduced, rescaled);
    CHECK(a.r1 == doctest::Approx(b.r1).epsilon(1e-9));
    CHECK(a.r2 == doctest::Approx(b.r2).epsilon(1e-9));
  }
}

TEST_CASE("simo reduction angle is between the direct and interfering vectors") {
  std::mt19937_64 rng(19);
  const Vec h1 = random_matrix(rng, 3, 1).col(0);
  Vec f2 = random_matrix(rng, 3, 1).col(0);
  f2 -= (h1.dot(f2) / h1.squaredNorm()) * h1;  // orthogonal pair
  const MimoChannel ch = validate_channel(h1, random_matrix(rng, 4, 1, 0.5),
                                          random_matrix(rng, 4, 1), f2, 1.0, 1.0);
  const auto [s, reduced] = reduce_simo(ch);
  CHECK(s.varphi1 == doctest::Approx(M_PI / 2));
}

TEST_CASE("simo reduction with a vanishing cross link") {
  std::mt19937_64 rng(21);
  const MimoChannel ch = validate_channel(random_matrix(rng, 3, 1), Mat::Zero(4, 1),
                                          random_matrix(rng, 4, 1), random_matrix(rng, 3, 1, 0.4),
                                          1.0, 1.0);
  const auto [s, reduced] = reduce_simo(ch);
  CHECK(s.a1 == 0.0);
  CHECK(classify(reduced).zic_f1_zero);
}

TEST_CASE("lift_covariance basics") {
  StandardMiso s = make_standard_miso(0.4, 0.7, 0.2, 0.3, 1.0, 1.0);
  CHECK(lift_covariance(Mat::Zero(2, 2), s, 1).norm() == 0.0);
  CHECK((lift_covariance(Mat::Identity(2, 2), s, 1) - Mat::Identity(2, 2)).norm() <= 1e-12);
}
