#include "sdr/experiments.hpp"

#include <cmath>

#include "doctest.h"
#include "sdr/error.hpp"

using namespace sdr;
using experiments::Cell;
using experiments::Estimator;
using experiments::PresetOptions;
using experiments::RiskSummary;

namespace {

bool summaries_equal(const RiskSummary& a, const RiskSummary& b) {
  return a.model == b.model && a.mu == b.mu && a.p == b.p && a.H == b.H &&
         a.n == b.n && a.reps == b.reps && a.failures == b.failures &&
         a.mean_loss == b.mean_loss && a.sd_loss == b.sd_loss &&
         a.mean_eigs == b.mean_eigs && a.sd_eigs == b.sd_eigs;
}

}  // namespace

TEST_CASE("run_cell single replication reports zero sd") {
  Cell cell{models::ModelSpec::linear_mu(4, 0.5), 200, 5, Estimator::Sir, 1,
            {1}};
  const RiskSummary sum = experiments::run_cell(cell, 1, 7);
  CHECK(sum.reps == 1);
  CHECK(sum.sd_loss == 0.0);
  CHECK(sum.sd_eigs[0] == 0.0);
  CHECK(sum.mean_eigs.size() == 1);
}

TEST_CASE("run_cell is independent of the thread count") {
  Cell cell{models::ModelSpec::linear_mu(6, 0.3), 500, 10, Estimator::Sir, 1,
            {1}};
  const RiskSummary one = experiments::run_cell(cell, 16, 42, 1);
  const RiskSummary eight = experiments::run_cell(cell, 16, 42, 8);
  CHECK(summaries_equal(one, eight));
}

TEST_CASE("run_cell results do not depend on sibling cells") {
  Cell small{models::ModelSpec::linear_mu(6, 0.3), 300, 5, Estimator::Sir, 1,
             {1}};
  Cell large = small;
  large.n = 600;
  const RiskSummary alone = experiments::run_cell(large, 8, 11);
  experiments::run_cell(small, 8, 11);  // evaluating another cell first
  const RiskSummary after = experiments::run_cell(large, 8, 11);
  CHECK(summaries_equal(alone, after));
}

TEST_CASE("run_cell records failures and aborts past the tolerance") {
  Cell cell{models::ModelSpec::dtsir(2, 30, 0.5, 1), 300, 5, Estimator::DtSir,
            1};
  cell.threshold.explicit_t = 1e9;  // every replication loses all coordinates
  CHECK_THROWS_AS(experiments::run_cell(cell, 5, 3), Error);
}

TEST_CASE("run_cell matches the mid-size eigenvalue study") {
  // mu=.5, n=5000, H=10 has mean eigenvalue 0.479 (sd 0.017).
  Cell cell{models::ModelSpec::linear_mu(10, 0.5), 5000, 10, Estimator::Sir, 1,
            {1}};
  const RiskSummary sum = experiments::run_cell(cell, 20, 2024);
  CHECK(std::abs(sum.mean_eigs[0] - 0.479) <= 0.02);
  CHECK(sum.sd_eigs[0] > 0.0);
}

TEST_CASE("oracle and aggregation estimators run through the harness") {
  Cell oracle{models::ModelSpec::dtsir(1, 20, 0.5, 2), 300, 5,
              Estimator::Oracle, 1};
  const RiskSummary osum = experiments::run_cell(oracle, 4, 5);
  CHECK(osum.failures == 0);
  CHECK(osum.mean_loss >= 0.0);

  Cell agg{models::ModelSpec::dtsir(1, 8, 0.5, 2), 200, 5,
           Estimator::Aggregation, 1};
  agg.aggregation.k = 3;
  const RiskSummary asum = experiments::run_cell(agg, 4, 5);
  CHECK(asum.failures == 0);
  CHECK(asum.mean_loss < 2.0);
}

TEST_CASE("eigenvalue spread shrinks with the sample size") {
  auto sd_at = [](long long n) {
    Cell cell{models::ModelSpec::linear_mu(10, 0.5), n, 10, Estimator::Sir, 1,
              {1}};
    return experiments::run_cell(cell, 30, 13).sd_eigs[0];
  };
  CHECK(sd_at(16000) < sd_at(2000));
}

TEST_CASE("preset_table1 covers the documented grid") {
  PresetOptions opt;
  opt.reps = 2;
  const auto result = experiments::preset_table1(99, opt);
  CHECK(result.preset == "table1");
  CHECK(result.summaries.size() == 3 * 4 * 7);
  // Row order: mu-major, then n, then H.
  CHECK(result.summaries[0].mu == 0.5);
  CHECK(result.summaries[0].n == 5000);
  CHECK(result.summaries[0].H == 2);
  CHECK(result.summaries[6].H == 500);
  CHECK(result.summaries[7].n == 10000);
  for (const auto& s : result.summaries) {
    CHECK(s.p == 10);
    CHECK(s.reps == 2);
    CHECK(s.mean_eigs.size() == 1);
  }
}

TEST_CASE("preset_table2 trims replications at large n") {
  PresetOptions opt;
  opt.reps = 3;
  const auto result = experiments::preset_table2(7, opt);
  CHECK(result.preset == "table2");
  CHECK(result.summaries.size() == 7 * 3);  // no n=10^6 without the flag
  for (const auto& s : result.summaries) {
    CHECK(s.H == 20);
    CHECK(s.d == 2);
    CHECK(s.mean_eigs.size() == 2);
    CHECK(s.reps == 3);
    CHECK(s.n < 1000000);
  }
}

TEST_CASE("preset_dtsir_curves wires kappa to the sample size") {
  PresetOptions opt;
  opt.reps = 1;
  opt.p_list = {100};
  const auto result = experiments::preset_dtsir_curves(3, opt);
  CHECK(result.summaries.size() == 4 * 30);
  for (const auto& s : result.summaries) {
    CHECK(s.s == 10);
    CHECK(s.n == models::kappa_to_n(s.kappa, s.s, s.p));
    CHECK(s.mean_kappa_loss ==
          doctest::Approx(s.kappa * s.mean_loss).epsilon(1e-12));
  }
  CHECK(result.summaries[0].model == "dtsir_1");
  CHECK(result.summaries[0].kappa == 3.0);
  CHECK(result.summaries[29].kappa == 61.0);
}

TEST_CASE("config parsing") {
  const auto cfg = experiments::parse_config_text(
      "# comment\n model = linear_mu \n mu=0.5,0.3\n n=500\n reps=2\n");
  CHECK(cfg.at("model") == "linear_mu");
  CHECK(cfg.at("mu") == "0.5,0.3");
  CHECK_THROWS_WITH_AS(experiments::parse_config_text("model linear_mu\n"),
                       doctest::Contains("key=value"), Error);
}

TEST_CASE("run_custom") {
  std::map<std::string, std::string> cfg{{"model", "linear_mu"},
                                         {"mu", "0.5"},
                                         {"p", "6"},
                                         {"n", "400"},
                                         {"H", "5"},
                                         {"reps", "3"}};
  const auto result = experiments::run_custom(cfg, 11, 1);
  CHECK(result.preset == "custom");
  REQUIRE(result.summaries.size() == 1);
  CHECK(result.summaries[0].model == "linear_mu");
  CHECK(result.summaries[0].n == 400);
  CHECK(result.summaries[0].reps == 3);
  CHECK(result.summaries[0].mean_eigs.size() == 1);

  SUBCASE("unknown keys are named") {
    cfg["bogus"] = "1";
    CHECK_THROWS_WITH_AS(experiments::run_custom(cfg, 11, 1),
                         doctest::Contains("bogus"), Error);
  }
  SUBCASE("n and kappa are exclusive") {
    cfg["kappa"] = "3";
    CHECK_THROWS_WITH_AS(experiments::run_custom(cfg, 11, 1),
                         doctest::Contains("kappa"), Error);
  }
  SUBCASE("model is required") {
    cfg.erase("model");
    CHECK_THROWS_WITH_AS(experiments::run_custom(cfg, 11, 1),
                         doctest::Contains("model"), Error);
  }
  SUBCASE("kappa grids need a sparse model") {
    cfg.erase("n");
    cfg["model"] = "dtsir_2";
    cfg["p"] = "50";
    cfg["kappa"] = "20,30";
    cfg["estimator"] = "dtsir";
    const auto curves = experiments::run_custom(cfg, 11, 1);
    CHECK(curves.summaries.size() == 2);
    CHECK(curves.summaries[0].n ==
          models::kappa_to_n(20, curves.summaries[0].s, 50));
  }
}
