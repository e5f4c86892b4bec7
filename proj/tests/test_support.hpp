// Shared helpers and independent oracles for the test suites. Everything in
// here is deliberately implemented without reusing the library's internal
// code paths so the checks stay independent.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nicert/certifier.hpp"

namespace testsupport {

using nicert::Mat;
using nicert::Vec;

inline double gaussian(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = 0.0;
  do { a = u(rng); } while (a <= 1e-300);
  return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * u(rng));
}

inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                         double scale = 1.0) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = scale * gaussian(rng);
  return m;
}

inline Mat random_psd(std::mt19937_64& rng, Eigen::Index n, double trace_budget) {
  const Mat x = random_matrix(rng, n, n);
  Mat s = x * x.transpose();
  const double tr = s.trace();
  if (tr > 0) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    s *= trace_budget * u(rng) / tr;
  }
  return s;
}

inline nicert::MimoChannel random_channel(std::mt19937_64& rng, Eigen::Index r1,
                                          Eigen::Index t1, Eigen::Index r2, Eigen::Index t2,
                                          double cross_scale = 0.4) {
  return nicert::validate_channel(random_matrix(rng, r1, t1), random_matrix(rng, r2, t1, cross_scale),
                                  random_matrix(rng, r2, t2), random_matrix(rng, r1, t2, cross_scale),
                                  0.5 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng),
                                  0.5 + 2.0 * std::uniform_real_distribution<double>(0, 1)(rng));
}

// Central finite differences of a scalar function of a symmetric matrix,
// taken along symmetric coordinate directions. The slope along the direction
// d = e_i e_j^T + e_j e_i^T equals <grad, d>, i.e. 2 g_ij off the diagonal.
template <typename Fn>
Mat finite_difference_gradient(const Fn& f, const Mat& S, double h = 1e-5) {
  Mat g(S.rows(), S.cols());
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      Mat d = Mat::Zero(S.rows(), S.cols());
      d(i, j) = 1.0;
      d(j, i) = 1.0;
      const double slope = (f(Mat(S + h * d)) - f(Mat(S - h * d))) / (2 * h);
      if (i == j) {
        g(i, i) = slope;
      } else {
        g(i, j) = slope / 2.0;
        g(j, i) = slope / 2.0;
      }
    }
  }
  return g;
}

// Water-filling capacity for a single-user channel y = H x + z under a trace
// budget, via the closed-form level search on the singular values.
inline double water_filling_capacity(const Mat& H, double P) {
  Eigen::JacobiSVD<Mat> svd(H);
  std::vector<double> gains;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    if (s > 1e-12) gains.push_back(s * s);
  }
  std::sort(gains.begin(), gains.end(), std::greater<>());
  // find the water level mu with sum max(mu - 1/g, 0) = P
  double best = 0.0;
  for (size_t k = 1; k <= gains.size(); ++k) {
    double inv_sum = 0.0;
    for (size_t i = 0; i < k; ++i) inv_sum += 1.0 / gains[i];
    const double mu = (P + inv_sum) / double(k);
    if (k < gains.size() && mu > 1.0 / gains[k]) continue;  // next mode should be active
    if (mu < 1.0 / gains[k - 1]) continue;                  // last active mode dried out
    double cap = 0.0;
    for (size_t i = 0; i < k; ++i) cap += 0.5 * std::log(mu * gains[i]);
    best = cap;
    break;
  }
  return best;
}

// Euclidean projection of a vector onto {x >= 0, sum x <= cap} by active-set
// enumeration; exponential in the dimension, fine for the small sizes here.
inline Vec simplex_cap_project_bruteforce(const Vec& lambda, double cap) {
  const int n = static_cast<int>(lambda.size());
  Vec best = Vec::Zero(n);
  double best_dist = lambda.squaredNorm();
  if (cap >= 0) {
    // try every zero-pattern, budget active and inactive
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> free;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) free.push_back(i);
      // budget inactive: x_free = lambda_free (clip handled by feasibility check)
      {
        Vec x = Vec::Zero(n);
        bool ok = true;
        double sum = 0.0;
        for (int i : free) {
          x(i) = lambda(i);
          if (x(i) < -1e-12) ok = false;
          sum += x(i);
        }
        if (ok && sum <= cap + 1e-12) {
          const double d = (x - lambda).squaredNorm();
          if (d < best_dist) { best_dist = d; best = x; }
        }
      }
      // budget active: x_free = lambda_free - mu
      if (!free.empty()) {
        double mu = 0.0;
        for (int i : free) mu += lambda(i);
        mu = (mu - cap) / double(free.size());
        if (mu >= -1e-12) {
          Vec x = Vec::Zero(n);
          bool ok = true;
          for (int i : free) {
            x(i) = lambda(i) - mu;
            if (x(i) < -1e-12) ok = false;
          }
          if (ok) {
            const double d = (x - lambda).squaredNorm();
            if (d < best_dist) { best_dist = d; best = x; }
          }
        }
      }
    }
  }
  return best;
}

// A valid genie sampled by shrinking random mixing matrices until the coupled
// Sigma equations admit a positive definite solution.
inline std::optional<nicert::GenieParameters> random_valid_genie(std::mt19937_64& rng,
                                                                 const nicert::MimoChannel& ch) {
  for (int attempt = 0; attempt < 60; ++attempt) {
    const double scale = 0.45 / (1 << (attempt / 12));
    nicert::GenieParameters g;
    g.A1 = random_matrix(rng, ch.r1(), ch.r2(), scale);
    g.A2 = random_matrix(rng, ch.r2(), ch.r1(), scale);
    const nicert::RiccatiOutcome ric = nicert::solve_sigma(g.A1, g.A2);
    if (ric.status != nicert::RiccatiOutcome::Status::Solved) continue;
    g.Sigma1 = ric.solution->Sigma1;
    g.Sigma2 = ric.solution->Sigma2;
    try {
      if (nicert::validate_genie(ch, g).ok()) return g;
    } catch (const nicert::Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace testsupport
