// Exercises the shared-library surface end to end: handles, error codes,
// and the file formats reachable through it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "sdr/sdr.h"

namespace {

std::filesystem::path tmp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sdr_capi_test_" + name);
}

}  // namespace

TEST_CASE("version and error state") {
  CHECK(std::string(sdr_version()) == "0.1.0");
  CHECK(sdr_last_error() != nullptr);
}

TEST_CASE("dataset lifecycle and validation") {
  const double x[] = {1, 2, 3, 4, 5, 6};
  const double y[] = {1, 2, 3};
  sdr_dataset* data = nullptr;
  REQUIRE(sdr_dataset_create(3, 2, x, y, &data) == SDR_OK);
  CHECK(sdr_dataset_n(data) == 3);
  CHECK(sdr_dataset_p(data) == 2);

  const auto path = tmp_path("data.csv");
  REQUIRE(sdr_dataset_save_csv(data, path.string().c_str()) == SDR_OK);
  sdr_dataset* back = nullptr;
  REQUIRE(sdr_dataset_load_csv(path.string().c_str(), &back) == SDR_OK);
  CHECK(sdr_dataset_n(back) == 3);
  sdr_dataset_free(back);
  sdr_dataset_free(data);
  std::filesystem::remove(path);

  const double bad[] = {1, std::nan(""), 3, 4, 5, 6};
  sdr_dataset* rejected = nullptr;
  CHECK(sdr_dataset_create(3, 2, bad, y, &rejected) == SDR_ERR_INVALID_ARG);
  CHECK(std::string(sdr_last_error()).find("finite") != std::string::npos);
  CHECK(sdr_dataset_load_csv("/nonexistent/file.csv", &rejected) ==
        SDR_ERR_IO);
}

TEST_CASE("model generation and SIR fit recover a planted direction") {
  sdr_model* model = nullptr;
  REQUIRE(sdr_model_linear_mu(8, 0.5, &model) == SDR_OK);
  CHECK(sdr_model_p(model) == 8);
  CHECK(sdr_model_d(model) == 1);

  std::vector<double> truth(8);
  REQUIRE(sdr_model_true_v(model, truth.data()) == SDR_OK);
  CHECK(truth[0] == 1.0);

  sdr_dataset* data = nullptr;
  REQUIRE(sdr_model_generate(model, 5000, 42, &data) == SDR_OK);

  sdr_fit* fit = nullptr;
  REQUIRE(sdr_fit_sir(data, 10, 1, 0, &fit) == SDR_OK);
  CHECK(sdr_fit_p(fit) == 8);
  CHECK(sdr_fit_d(fit) == 1);

  std::vector<double> v(8);
  REQUIRE(sdr_fit_loadings(fit, v.data()) == SDR_OK);
  double loss = -1.0;
  REQUIRE(sdr_projection_loss(8, 1, v.data(), truth.data(), &loss) == SDR_OK);
  CHECK(loss < 0.05);

  double eig = 0.0;
  REQUIRE(sdr_fit_eigenvalues(fit, &eig) == SDR_OK);
  CHECK(eig > 0.3);
  CHECK(eig < 0.7);

  // Self distance through the same buffer is exactly zero.
  REQUIRE(sdr_projection_loss(8, 1, v.data(), v.data(), &loss) == SDR_OK);
  CHECK(loss == 0.0);

  sdr_fit_free(fit);
  sdr_dataset_free(data);
  sdr_model_free(model);
}

TEST_CASE("validation failures map to status codes") {
  sdr_model* model = nullptr;
  CHECK(sdr_model_linear_mu(8, 1.5, &model) == SDR_ERR_CONFIG);

  REQUIRE(sdr_model_linear_mu(8, 0.5, &model) == SDR_OK);
  sdr_dataset* data = nullptr;
  REQUIRE(sdr_model_generate(model, 100, 1, &data) == SDR_OK);

  sdr_fit* fit = nullptr;
  CHECK(sdr_fit_sir(data, 2000, 1, 0, &fit) == SDR_ERR_CONFIG);
  CHECK(std::string(sdr_last_error()).find("H exceeds sample count") !=
        std::string::npos);
  CHECK(sdr_fit_sir(nullptr, 10, 1, 0, &fit) == SDR_ERR_INVALID_ARG);

  sdr_dataset_free(data);
  sdr_model_free(model);
}

TEST_CASE("dtsir oracle and aggregation fits through the C surface") {
  sdr_model* model = nullptr;
  REQUIRE(sdr_model_dtsir(2, 30, 0.5, 3, &model) == SDR_OK);
  sdr_dataset* data = nullptr;
  REQUIRE(sdr_model_generate(model, 2000, 9, &data) == SDR_OK);

  sdr_fit* dt = nullptr;
  REQUIRE(sdr_fit_dtsir(data, 10, 2.0, -1.0, &dt) == SDR_OK);
  int32_t support[30];
  int32_t slen = 30;
  REQUIRE(sdr_fit_support(dt, support, &slen) == SDR_OK);
  CHECK(slen >= 1);
  const auto fit_path = tmp_path("fit.csv");
  REQUIRE(sdr_fit_write_csv(dt, fit_path.string().c_str()) == SDR_OK);
  CHECK(std::filesystem::file_size(fit_path) > 0);
  std::filesystem::remove(fit_path);
  sdr_fit_free(dt);

  const int32_t S[] = {0, 1, 2, 3, 4};
  sdr_fit* oracle = nullptr;
  REQUIRE(sdr_fit_oracle(data, 10, 1, S, 5, 0, &oracle) == SDR_OK);
  sdr_fit_free(oracle);

  sdr_fit* agg = nullptr;
  REQUIRE(sdr_fit_aggregate(data, 10, 1, 3, 1, 8, 0, 7, &agg) == SDR_OK);
  int32_t asup[30];
  slen = 30;
  REQUIRE(sdr_fit_support(agg, asup, &slen) == SDR_OK);
  CHECK(slen == 3);
  sdr_fit_free(agg);

  sdr_dataset_free(data);
  sdr_model_free(model);
}

TEST_CASE("custom experiments and summary access") {
  const auto cfg_path = tmp_path("exp.cfg");
  {
    std::ofstream out(cfg_path);
    out << "model=linear_mu\nmu=0.5\np=6\nn=400\nH=5\nreps=4\nseed=3\n";
  }
  sdr_summaries* sums = nullptr;
  REQUIRE(sdr_experiment_custom(cfg_path.string().c_str(), "reps=2\n", 0, 1,
                                &sums) == SDR_OK);
  REQUIRE(sdr_summaries_count(sums) == 1);
  sdr_summary_row row;
  REQUIRE(sdr_summaries_get(sums, 0, &row) == SDR_OK);
  CHECK(std::string(row.model) == "linear_mu");
  CHECK(row.reps == 2);  // override wins
  CHECK(row.n == 400);
  CHECK(row.num_eigs == 1);
  CHECK(sdr_summaries_get(sums, 5, &row) == SDR_ERR_DIMENSION);

  const auto csv_path = tmp_path("custom.csv");
  REQUIRE(sdr_summaries_write_csv(sums, csv_path.string().c_str()) == SDR_OK);
  CHECK(std::filesystem::file_size(csv_path) > 0);
  std::filesystem::remove(csv_path);
  sdr_summaries_free(sums);
  std::filesystem::remove(cfg_path);

  sdr_summaries* missing = nullptr;
  CHECK(sdr_experiment_custom("/nonexistent.cfg", nullptr, 0, 1, &missing) ==
        SDR_ERR_IO);
}
