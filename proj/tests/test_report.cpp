#include <doctest.h>

#include "nicert/report.hpp"
#include "nicert/reference_cases.hpp"
#include "test_support.hpp"

using namespace nicert;

namespace {

const char* kChannelJson = R"({
  "H1": [[1.0, 0.2]],
  "F1": [[0.1, 0.0]],
  "H2": [[0.9, -0.3]],
  "F2": [[0.2, 0.1]],
  "P1": 1.5,
  "P2": 2.0
})";

}  // namespace

TEST_CASE("channel files parse and round trip") {
  const MimoChannel ch = load_channel_json(kChannelJson);
  CHECK(ch.t1() == 2);
  CHECK(ch.P1 == 1.5);
  const MimoChannel again = load_channel_json(channel_to_json(ch));
  CHECK((again.H1 - ch.H1).norm() <= 1e-6);
}

TEST_CASE("strict parsing names the offending key") {
  CHECK_THROWS_WITH_AS(load_channel_json(R"({"H1": [[1]], "F1": [[1]], "H2": [[1]],
      "F2": [[1]], "P1": 1, "P2": 1, "extra": 3})"),
                       doctest::Contains("extra"), Error);
  CHECK_THROWS_WITH_AS(load_channel_json(R"({"H1": [[1]], "F1": [[1]], "H2": [[1]],
      "F2": [[1]], "P1": 1})"),
                       doctest::Contains("P2"), Error);
  CHECK_THROWS_WITH_AS(load_channel_json(R"({"H1": [[1],[2,3]], "F1": [[1]], "H2": [[1]],
      "F2": [[1]], "P1": 1, "P2": 1})"),
                       doctest::Contains("H1"), Error);
  CHECK_THROWS_AS(load_channel_json("{ truncated"), Error);
}

TEST_CASE("genie files parse") {
  const GenieParameters g = load_genie_json(R"({
    "A1": [[0.1]], "A2": [[0.2]], "Sigma1": [[0.9]], "Sigma2": [[0.8]]
  })");
  CHECK(g.A1(0, 0) == 0.1);
  CHECK(g.Sigma2(0, 0) == 0.8);
  CHECK_THROWS_AS(load_genie_json(R"({"A1": [[0.1]]})"), Error);
}

TEST_CASE("fixed float formatting") {
  CHECK(format_fixed(1.0) == "1.000000");
  CHECK(format_fixed(-1.25) == "-1.250000");
  CHECK(format_fixed(-1e-9) == "0.000000");  // negative zero normalized
  CHECK(format_fixed(0.1234567) == "0.123457");
}

TEST_CASE("reports serialize deterministically") {
  const MimoChannel ch = load_channel_json(kChannelJson);
  SolverConfig cfg;
  cfg.seed = 3;
  const auto build = [&]() {
    RunReport rep;
    rep.command = "certify";
    rep.channel = ch;
    rep.channel_class = classify(ch);
    rep.config = cfg;
    const TinSolution tin = solve_tin(ch, cfg);
    rep.lower_sum_rate = tin.sum_rate;
    rep.lower_S = tin.S;
    rep.kkt = tin.kkt;
    rep.verdict = certify_mimo(ch, cfg);
    return report_to_json(rep);
  };
  const std::string a = build();
  const std::string b = build();
  CHECK(a == b);
  CHECK(a.find("\"command\":\"certify\"") != std::string::npos);
  CHECK(a.find("nan") == std::string::npos);
}

TEST_CASE("sweep csv is sorted with a fixed header") {
  std::vector<SweepRow> rows{{1.0, 10.0, 0.9, 0.2}, {1.0, 5.0, 0.3, 0.4}, {1.0, 10.0, 0.3, 0.5}};
  const std::string csv = sweep_to_csv(rows);
  CHECK(csv.rfind("P1,P2,theta2,a2_max\n", 0) == 0);
  const auto p5 = csv.find("5.000000");
  const auto p10 = csv.find("10.000000");
  CHECK(p5 < p10);
}

TEST_CASE("embedded reference cases all pass") {
  for (int i = 1; i <= reference::case_count(); ++i) {
    const reference::CaseResult res = reference::run_reference_case(i);
    INFO("case ", i);
    for (const auto& row : res.rows) {
      INFO(row.name, " expected ", row.expected, " actual ", row.actual);
      CHECK(row.pass);
    }
    CHECK(res.passed);
  }
}
