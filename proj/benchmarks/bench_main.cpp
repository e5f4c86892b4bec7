// SPDX-License-Identifier: Apache-2.0
// Copyright (c) nicert contributors

#include <benchmark/benchmark.h>

#include "nicert/reference_cases.hpp"

namespace {

using namespace nicert;

void NumericalRadius(benchmark::State& state) {
  const auto n = state.range(0);
  Mat X(n, n);
  std::uint32_t s = 12345;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      s = s * 1664525u + 1013904223u;
      X(i, j) = (s >> 8) / double(1 << 24) - 0.5;
    }
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerical_radius(X));
  }
}
BENCHMARK(NumericalRadius)->Arg(2)->Arg(4)->Arg(8);

void PsdProject(benchmark::State& state) {
  const auto n = state.range(0);
  Mat X(n, n);
  std::uint32_t s = 999;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      s = s * 1664525u + 1013904223u;
      X(i, j) = (s >> 8) / double(1 << 24) - 0.5;
    }
  const Mat sym = X + X.transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(psd_project(sym, 1.0));
  }
}
BENCHMARK(PsdProject)->Arg(2)->Arg(4)->Arg(8);

void SolveTinReference(benchmark::State& state) {
  const MimoChannel ch = reference::mimo_case();
  SolverConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_tin(ch, cfg));
  }
}
BENCHMARK(SolveTinReference)->Arg(2)->Arg(16)->Unit(benchmark::kMillisecond);

void RiccatiFixedPoint(benchmark::State& state) {
  const MimoChannel ch = reference::mimo_case();
  const TinSolution tin = solve_tin(ch);
  const ASolve A = solve_A(ch, tin.S);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_sigma(A.A1, A.A2));
  }
}
BENCHMARK(RiccatiFixedPoint);

void CertifyReference(benchmark::State& state) {
  const MimoChannel ch = reference::mimo_case();
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_mimo(ch));
  }
}
BENCHMARK(CertifyReference)->Unit(benchmark::kMillisecond);

void MisoBeamSearch(benchmark::State& state) {
  const StandardMiso s = reference::miso_z_case();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_tin_miso(s));
  }
}
BENCHMARK(MisoBeamSearch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
