// Command-line front end for the sdr shared library. Links only the C API.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdr/sdr.h"

namespace {

constexpr int kExitFailure = 1;  // runtime/estimation/io failures
constexpr int kExitUsage = 2;    // invalid flags or configuration

int exit_code_for(sdr_status status) {
  switch (status) {
    case SDR_OK:
      return 0;
    case SDR_ERR_CONFIG:
    case SDR_ERR_DIMENSION:
    case SDR_ERR_INVALID_ARG:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

[[noreturn]] void die(sdr_status status) {
  std::cerr << "sdrlab: error: " << sdr_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(sdr_status status) {
  if (status != SDR_OK) die(status);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SDRLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "sdrlab: error: SDRLAB_SEED is not an integer: " << env
                << "\n";
      std::exit(kExitUsage);
    }
  }
  return 0;
}

struct DatasetHandle {
  sdr_dataset* ptr = nullptr;
  ~DatasetHandle() { sdr_dataset_free(ptr); }
};

struct FitHandle {
  sdr_fit* ptr = nullptr;
  ~FitHandle() { sdr_fit_free(ptr); }
};

struct SummariesHandle {
  sdr_summaries* ptr = nullptr;
  ~SummariesHandle() { sdr_summaries_free(ptr); }
};

std::vector<int32_t> parse_index_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<int32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long v = std::stol(item);
      if (v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<int32_t>(v - 1));  // CLI is 1-based
    } catch (const std::exception&) {
      std::cerr << "sdrlab: error: " << flag
                << " expects 1-based indices, got '" << item << "'\n";
      std::exit(kExitUsage);
    }
  }
  if (out.empty()) {
    std::cerr << "sdrlab: error: " << flag << " is empty\n";
    std::exit(kExitUsage);
  }
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "sdrlab: error: cannot create output directory '" << dir
              << "': " << ec.message() << "\n";
    std::exit(kExitFailure);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdrlab: sliced-inverse-regression estimators and experiments"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  int threads = 0;
  app.add_option("--seed", seed_flag,
                 "RNG seed (falls back to SDRLAB_SEED, then 0)");
  app.add_option("--threads", threads, "worker threads, 0 = auto");

  // Global flags are accepted after subcommand names as well.
  const auto allow_parent_flags = [](CLI::App* cmd) { cmd->fallthrough(); };

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "fit an estimator to a CSV dataset");
  allow_parent_flags(fit);
  fit->require_subcommand(1);
  std::string input, output;
  int H = 10, d = 1;
  bool centered = false;

  auto add_fit_common = [&](CLI::App* cmd, bool with_d) {
    cmd->add_option("--input", input, "dataset CSV (header y,x1,...,xp)")
        ->required();
    cmd->add_option("--out", output, "output CSV for the fitted subspace")
        ->required();
    cmd->add_option("--H", H, "slice count");
    if (with_d) cmd->add_option("--d", d, "subspace dimension");
  };

  auto* fit_sir = fit->add_subcommand("sir", "plain SIR subspace");
  allow_parent_flags(fit_sir);
  add_fit_common(fit_sir, true);
  fit_sir->add_flag("--centered", centered, "subtract the overall mean");

  double c1 = 2.0, threshold = -1.0;
  auto* fit_dtsir =
      fit->add_subcommand("dtsir", "diagonal-thresholding SIR (d = 1)");
  allow_parent_flags(fit_dtsir);
  add_fit_common(fit_dtsir, false);
  fit_dtsir->add_option("--c1", c1, "threshold constant in c1*log(p)/n");
  fit_dtsir->add_option("--t", threshold, "explicit threshold (overrides c1)");

  std::string support_text;
  auto* fit_oracle =
      fit->add_subcommand("oracle", "support-restricted SIR subspace");
  allow_parent_flags(fit_oracle);
  add_fit_common(fit_oracle, true);
  fit_oracle
      ->add_option("--support", support_text,
                   "1-based coordinate list, e.g. 1,4,7")
      ->required();
  fit_oracle->add_flag("--centered", centered, "subtract the overall mean");

  int k = 1, screen_m = 20;
  long long cap = 2000000;
  std::string strategy = "exhaustive";
  auto* fit_agg =
      fit->add_subcommand("aggregate", "two-split aggregation estimator");
  allow_parent_flags(fit_agg);
  add_fit_common(fit_agg, true);
  fit_agg->add_option("--k", k, "candidate support size")->required();
  fit_agg->add_option("--strategy", strategy, "exhaustive | screen")
      ->check(CLI::IsMember({"exhaustive", "screen"}));
  fit_agg->add_option("--screen-m", screen_m,
                      "candidate pool size for the screened strategy");
  fit_agg->add_option("--cap", cap, "enumeration cap");

  // ---- experiment ----
  auto* experiment =
      app.add_subcommand("experiment", "run a seeded Monte Carlo study");
  allow_parent_flags(experiment);
  experiment->require_subcommand(1);
  std::string out_dir = ".";
  int reps = 0, p = 0;
  bool allow_large = false;
  std::vector<int> p_list;
  std::string config_path;
  std::vector<std::string> overrides;

  auto add_exp_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--reps", reps, "replications per cell");
  };

  auto* exp_t1 = experiment->add_subcommand(
      "table1", "eigenvalue accuracy of the linear model across H");
  allow_parent_flags(exp_t1);
  add_exp_common(exp_t1);
  exp_t1->add_option("--p", p, "ambient dimension (default 10)");

  auto* exp_t2 = experiment->add_subcommand(
      "table2", "eigenvalue ratios of the two-index model");
  allow_parent_flags(exp_t2);
  add_exp_common(exp_t2);
  exp_t2->add_option("--p", p, "ambient dimension (default 10)");
  exp_t2->add_flag("--allow-large", allow_large, "include the n=10^6 column");

  auto* exp_dt = experiment->add_subcommand(
      "dtsir-curves", "DT-SIR risk against the sampling ratio kappa");
  allow_parent_flags(exp_dt);
  add_exp_common(exp_dt);
  exp_dt->add_option("--p", p_list,
                     "ambient dimensions (default 100 200 300 600 1200)");

  auto* exp_custom =
      experiment->add_subcommand("custom", "run a key=value config file");
  allow_parent_flags(exp_custom);
  add_exp_common(exp_custom);
  exp_custom->add_option("--config", config_path, "config file")->required();
  exp_custom->add_option("--set", overrides,
                         "override config entries, e.g. --set reps=10");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  const std::uint64_t seed = resolve_seed(seed_flag);

  if (fit->parsed()) {
    DatasetHandle data;
    check(sdr_dataset_load_csv(input.c_str(), &data.ptr));
    FitHandle result;
    if (fit_sir->parsed()) {
      check(sdr_fit_sir(data.ptr, H, d, centered ? 1 : 0, &result.ptr));
    } else if (fit_dtsir->parsed()) {
      check(sdr_fit_dtsir(data.ptr, H, c1, threshold, &result.ptr));
    } else if (fit_oracle->parsed()) {
      const auto support = parse_index_list(support_text, "--support");
      check(sdr_fit_oracle(data.ptr, H, d, support.data(),
                           static_cast<int32_t>(support.size()),
                           centered ? 1 : 0, &result.ptr));
    } else {
      check(sdr_fit_aggregate(data.ptr, H, d, k,
                              strategy == "exhaustive" ? 0 : 1, screen_m, cap,
                              seed, &result.ptr));
    }
    check(sdr_fit_write_csv(result.ptr, output.c_str()));
    return 0;
  }

  ensure_dir(out_dir);
  const auto out_path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  SummariesHandle sums;
  if (exp_t1->parsed()) {
    check(sdr_experiment_table1(seed, reps, p, threads, &sums.ptr));
    check(sdr_summaries_write_csv(sums.ptr, out_path("table1.csv").c_str()));
  } else if (exp_t2->parsed()) {
    check(sdr_experiment_table2(seed, reps, p, allow_large ? 1 : 0, threads,
                                &sums.ptr));
    check(sdr_summaries_write_csv(sums.ptr, out_path("table2.csv").c_str()));
  } else if (exp_dt->parsed()) {
    std::vector<int32_t> ps(p_list.begin(), p_list.end());
    if (reps <= 0) reps = 100;
    check(sdr_experiment_dtsir_curves(seed, reps, ps.data(),
                                      static_cast<int32_t>(ps.size()), threads,
                                      &sums.ptr));
    check(sdr_summaries_write_csv(sums.ptr, out_path("dtsir.csv").c_str()));
    check(sdr_summaries_write_svgs(sums.ptr, out_dir.c_str()));
  } else {
    std::string override_text;
    for (const auto& kv : overrides) override_text += kv + "\n";
    if (seed_flag) override_text += "seed=" + std::to_string(seed) + "\n";
    if (reps > 0) override_text += "reps=" + std::to_string(reps) + "\n";
    check(sdr_experiment_custom(config_path.c_str(), override_text.c_str(),
                                seed, threads, &sums.ptr));
    check(sdr_summaries_write_csv(sums.ptr, out_path("custom.csv").c_str()));
  }
  return 0;
}
