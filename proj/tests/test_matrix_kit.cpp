#include <doctest.h>

#include "nicert/matrix_kit.hpp"
#include "test_support.hpp"

using namespace nicert;
using testsupport::random_matrix;

TEST_CASE("sym_eig reconstructs symmetric inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const Mat x = random_matrix(rng, n, n);
    const Mat m = x + x.transpose();
    const SymEig e = sym_eig(m);
    const Mat rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rec - m).norm() <= 1e-10 * (1.0 + m.norm()));
    for (int i = 0; i + 1 < e.values.size(); ++i) CHECK(e.values(i) >= e.values(i + 1));
  }
}

TEST_CASE("numerical radius on known matrices") {
  CHECK(numerical_radius(Mat::Identity(2, 2)) == doctest::Approx(1.0));
  Mat nilpotent(2, 2);
  nilpotent << 0, 1, 0, 0;
  CHECK(numerical_radius(nilpotent) == doctest::Approx(0.5));
  CHECK_THROWS_AS(numerical_radius(Mat::Zero(2, 3)), Error);
}

TEST_CASE("numerical radius dominates random Rayleigh quotients") {
  std::mt19937_64 rng(11);
  for (int m = 0; m < 8; ++m) {
    const Eigen::Index n = 2 + m % 4;
    const Mat x = random_matrix(rng, n, n);
    const double r = numerical_radius(x);
    for (int k = 0; k < 10000; ++k) {
      Vec a = random_matrix(rng, n, 1).col(0);
      a /= a.norm();
      CHECK(r >= std::abs(a.dot(x * a)) - 1e-12);
    }
    CHECK(numerical_radius(Mat(x.transpose())) == doctest::Approx(r).epsilon(1e-12));
    CHECK(numerical_radius(Mat(-2.5 * x)) == doctest::Approx(2.5 * r).epsilon(1e-12));
  }
}

TEST_CASE("psd projection clips and water-shifts") {
  Mat d = Mat::Zero(2, 2);
  d.diagonal() << 2.0, -1.0;
  const Mat clipped = psd_project(d);
  CHECK(clipped(0, 0) == doctest::Approx(2.0));
  CHECK(clipped(1, 1) == doctest::Approx(0.0));

  d.diagonal() << 2.0, 2.0;
  const Mat capped = psd_project(d, 2.0);
  CHECK(capped(0, 0) == doctest::Approx(1.0));
  CHECK(capped(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("psd projection matches the active-set oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 3;
    const Mat x = random_matrix(rng, n, n);
    const Mat m = x + x.transpose();
    const double cap = 1.0;
    const Mat p = psd_project(m, cap);
    const SymEig e = sym_eig(m);
    const Vec w = testsupport::simplex_cap_project_bruteforce(e.values, cap);
    const Mat oracle = e.vectors * w.asDiagonal() * e.vectors.transpose();
    CHECK((p - oracle).norm() <= 1e-9 * (1.0 + m.norm()));
  }
}

TEST_CASE("psd projection is idempotent and non-expansive") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const Mat a = random_matrix(rng, n, n);
    const Mat b = random_matrix(rng, n, n);
    const Mat sa = a + a.transpose();
    const Mat sb = b + b.transpose();
    const Mat pa = psd_project(sa, 2.0);
    const Mat pb = psd_project(sb, 2.0);
    CHECK((psd_project(pa, 2.0) - pa).norm() <= 1e-10 * (1.0 + pa.norm()));
    CHECK((pa - pb).norm() <= (sa - sb).norm() + 1e-10);
  }
}

TEST_CASE("block inverse equals the dense inverse") {
  const Mat id = Mat::Identity(2, 2);
  CHECK((block_inverse(Mat::Identity(1, 1), Mat::Zero(1, 1), Mat::Zero(1, 1),
                       Mat::Identity(1, 1)) -
         id)
            .norm() <= 1e-14);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat a = random_matrix(rng, 4, 4) + 4.0 * Mat::Identity(4, 4);
    const Mat direct = a.inverse();
    const Mat assembled = block_inverse(a.topLeftCorner(2, 2), a.topRightCorner(2, 2),
                                        a.bottomLeftCorner(2, 2), a.bottomRightCorner(2, 2));
    CHECK((assembled - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
  }
}

TEST_CASE("block inverse rejects a singular Schur complement") {
  const Mat a11 = Mat::Identity(2, 2);
  std::mt19937_64 rng(37);
  const Mat a12 = random_matrix(rng, 2, 2);
  const Mat a21 = random_matrix(rng, 2, 2);
  const Mat a22 = a21 * a11.inverse() * a12;  // Schur complement exactly zero
  CHECK_THROWS_AS(block_inverse(a11, a12, a21, a22), Error);
}

TEST_CASE("determinant identity |I + CD| = |I + DC|") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 2 + trial % 3, n = 2 + (trial / 3) % 3;
    const Mat c = random_matrix(rng, m, n, 0.6);
    const Mat d = random_matrix(rng, n, m, 0.6);
    const double lhs = (Mat::Identity(m, m) + c * d).determinant();
    const double rhs = (Mat::Identity(n, n) + d * c).determinant();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("kron_vec_solve basics") {
  std::mt19937_64 rng(43);
  const Mat b = random_matrix(rng, 3, 3) + 3.0 * Mat::Identity(3, 3);
  const LeastSquares same = kron_vec_solve(b, b);
  CHECK((same.solution - Mat::Identity(3, 3)).norm() <= 1e-10);
  CHECK(same.residual <= 1e-10);

  const Mat c = random_matrix(rng, 3, 2);
  const LeastSquares zero = kron_vec_solve(Mat::Zero(3, 3), c);
  CHECK(zero.solution.norm() <= 1e-12);
  CHECK(zero.residual == doctest::Approx(c.norm()));

  // consistent overdetermined system recovers the generator
  const Mat tall = random_matrix(rng, 5, 2);
  const Mat a0 = random_matrix(rng, 2, 3);
  const LeastSquares rec = kron_vec_solve(tall, tall * a0);
  CHECK(rec.residual <= 1e-10);
  CHECK((rec.solution - a0).norm() <= 1e-8);
}

TEST_CASE("pinv uses the relative cutoff") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-14;  // below cutoff relative to sigma_max
  const Mat p = pinv(m);
  CHECK(p(0, 0) == doctest::Approx(1.0));
  CHECK(p(1, 1) == doctest::Approx(0.0));
}
