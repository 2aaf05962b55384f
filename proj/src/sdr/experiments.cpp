#include "sdr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "sdr/error.hpp"
#include "sdr/rng.hpp"

namespace sdr::experiments {

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Sir: return "sir";
    case Estimator::DtSir: return "dtsir";
    case Estimator::Oracle: return "oracle";
    case Estimator::Aggregation: return "aggregation";
  }
  return "unknown";
}

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  t = std::max(1, std::min(t, count));
  if (t == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([=, &fn] {
      for (int i = w; i < count; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  const int k = static_cast<int>(xs.size());
  if (k == 0) return {0.0, 0.0};
  const double mean = kahan_sum(xs) / k;
  if (k == 1) return {mean, 0.0};
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    sq[i] = (xs[i] - mean) * (xs[i] - mean);
  return {mean, std::sqrt(kahan_sum(sq) / (k - 1))};
}

std::vector<int> true_support(const models::ModelSpec& model) {
  std::vector<int> S;
  const Eigen::MatrixXd& v = model.true_v().mat();
  for (int i = 0; i < v.rows(); ++i)
    if (v.row(i).norm() > 0.0) S.push_back(i);
  return S;
}

struct RepResult {
  bool ok = false;
  double loss = 0.0;
  std::vector<double> eigs;
};

RepResult run_one(const Cell& cell, std::uint64_t data_seed) {
  RepResult out;
  const models::Dataset data =
      models::generate(cell.model, static_cast<int>(cell.n), data_seed);

  int max_eig = 0;
  for (int idx : cell.eig_indices) max_eig = std::max(max_eig, idx);

  sir::SubspaceEstimate fit = [&] {
    switch (cell.estimator) {
      case Estimator::Sir: {
        const auto est = sir::estimate_lambda(sir::slice(data, cell.H),
                                              cell.centered);
        return sir::sir_subspace(est, std::max(cell.fit_d, max_eig));
      }
      case Estimator::DtSir:
        return sparse::dt_sir(data, cell.H, cell.threshold);
      case Estimator::Oracle: {
        const auto est = sir::estimate_lambda(sir::slice(data, cell.H),
                                              cell.centered);
        const std::vector<int> S = cell.oracle_support.empty()
                                       ? true_support(cell.model)
                                       : cell.oracle_support;
        return sparse::oracle_estimator(est, S, cell.fit_d);
      }
      case Estimator::Aggregation: {
        sparse::AggregationConfig cfg = cell.aggregation;
        cfg.H = cell.H;
        cfg.d = cell.fit_d;
        return sparse::aggregation_estimator(
            data, cfg, rng::derive(data_seed, {0x616767ULL}));
      }
    }
    fail(ErrorCode::Config, "unhandled estimator");
  }();

  const Eigen::MatrixXd basis_d = fit.basis.mat().leftCols(cell.fit_d);
  out.loss = linalg::projection_loss(linalg::OrthoMatrix(basis_d),
                                     cell.model.true_v());
  for (int idx : cell.eig_indices) {
    if (idx < 1 || idx > fit.eigenvalues.size())
      fail(ErrorCode::Config,
           "eigenvalue index " + std::to_string(idx) + " not available");
    out.eigs.push_back(fit.eigenvalues(idx - 1));
  }
  out.ok = true;
  return out;
}

}  // namespace

RiskSummary run_cell(const Cell& cell, int reps, std::uint64_t seed,
                     int threads) {
  if (reps < 1) fail(ErrorCode::Config, "reps must be >= 1");
  if (cell.fit_d != cell.model.d())
    fail(ErrorCode::Config,
         "fit_d must equal the model's central-space dimension");

  const std::uint64_t model_key = cell.model.identity_hash();
  std::vector<RepResult> results(reps);
  parallel_for(reps, threads, [&](int r) {
    const std::uint64_t data_seed =
        rng::derive(seed, {0x64617461ULL, model_key, std::uint64_t(r)});
    try {
      results[r] = run_one(cell, data_seed);
    } catch (const Error&) {
      results[r].ok = false;
    }
  });

  RiskSummary sum;
  sum.model = cell.model.name();
  sum.mu = cell.model.mu();
  sum.p = cell.model.p();
  sum.d = cell.model.d();
  sum.s = cell.model.support_size();
  sum.H = cell.H;
  sum.n = cell.n;
  sum.kappa = cell.kappa;
  sum.estimator = estimator_name(cell.estimator);
  sum.reps = reps;
  sum.seed = seed;

  std::vector<double> losses;
  std::vector<std::vector<double>> eigcols(cell.eig_indices.size());
  for (const RepResult& r : results) {
    if (!r.ok) {
      ++sum.failures;
      continue;
    }
    losses.push_back(r.loss);
    for (std::size_t j = 0; j < eigcols.size(); ++j)
      eigcols[j].push_back(r.eigs[j]);
  }
  if (sum.failures * 10 > reps)
    fail(ErrorCode::Estimation,
         "cell failed: " + std::to_string(sum.failures) + " of " +
             std::to_string(reps) + " replications errored");

  std::tie(sum.mean_loss, sum.sd_loss) = mean_sd(losses);
  for (auto& col : eigcols) {
    auto [m, sd] = mean_sd(col);
    sum.mean_eigs.push_back(m);
    sum.sd_eigs.push_back(sd);
  }
  sum.mean_kappa_loss = cell.kappa * sum.mean_loss;
  return sum;
}

PresetResult preset_table1(std::uint64_t seed, const PresetOptions& opt) {
  const std::vector<double> mus = {0.5, 0.3, 0.1};
  const std::vector<long long> ns = {5000, 10000, 50000, 100000};
  const std::vector<int> hs = {2, 5, 10, 50, 100, 200, 500};

  PresetResult out;
  out.preset = "table1";
  for (double mu : mus) {
    const models::ModelSpec model = models::ModelSpec::linear_mu(opt.p, mu);
    for (long long n : ns) {
      for (int H : hs) {
        if (H > n) continue;
        Cell cell{.model = model, .n = n, .H = H,
                  .estimator = Estimator::Sir, .fit_d = 1,
                  .eig_indices = {1}};
        out.summaries.push_back(run_cell(cell, opt.reps, seed, opt.threads));
      }
    }
  }
  return out;
}

PresetResult preset_table2(std::uint64_t seed, const PresetOptions& opt) {
  const std::vector<double> mus = {1.0, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001};
  std::vector<long long> ns = {1000, 10000, 100000};
  if (opt.allow_large) ns.push_back(1000000);

  PresetResult out;
  out.preset = "table2";
  for (double mu : mus) {
    const models::ModelSpec model =
        models::ModelSpec::two_index_conjecture(opt.p, mu);
    for (long long n : ns) {
      // The large-n cells are trimmed for runtime.
      const int reps = n >= 100000 ? std::min(opt.reps, 20) : opt.reps;
      Cell cell{.model = model, .n = n, .H = 20,
                .estimator = Estimator::Sir, .fit_d = 2,
                .eig_indices = {1, 2}};
      out.summaries.push_back(run_cell(cell, reps, seed, opt.threads));
    }
  }
  return out;
}

PresetResult preset_dtsir_curves(std::uint64_t seed,
                                 const PresetOptions& opt) {
  const std::vector<int> ps =
      opt.p_list.empty() ? std::vector<int>{100, 200, 300, 600, 1200}
                         : opt.p_list;
  PresetResult out;
  out.preset = "dtsir_curves";
  for (int variant = 1; variant <= 4; ++variant) {
    for (int p : ps) {
      const models::ModelSpec model = models::ModelSpec::dtsir(
          variant, p, 0.5, rng::derive(seed, {std::uint64_t(variant)}));
      const int s = model.support_size();
      for (int kappa = 3; kappa <= 61; kappa += 2) {
        Cell cell{.model = model,
                  .n = models::kappa_to_n(kappa, s, p),
                  .H = 10, .estimator = Estimator::DtSir, .fit_d = 1,
                  .kappa = double(kappa)};
        out.summaries.push_back(run_cell(cell, opt.reps, seed, opt.threads));
      }
    }
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_num(const std::string& key, const std::string& value);

template <>
double parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Config, "config key '" + key + "': expected a number, got '" +
                                value + "'");
  }
}

template <>
long long parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Config, "config key '" + key +
                                "': expected an integer, got '" + value + "'");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_num<T>(key, item));
  }
  if (out.empty())
    fail(ErrorCode::Config, "config key '" + key + "': empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorCode::Config,
       "config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Config, "config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

PresetResult run_custom(const std::map<std::string, std::string>& config,
                        std::uint64_t default_seed, int threads) {
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = config.find(key);
    if (it == config.end()) return std::nullopt;
    return it->second;
  };

  static const std::vector<std::string> known = {
      "preset",   "model",  "mu",        "p",      "d",       "delta",
      "H",        "n",      "kappa",     "reps",   "seed",    "estimator",
      "c1",       "t",      "k",         "strategy", "screen_m", "cap",
      "centered", "eig",    "noise_sd",  "threads"};
  for (const auto& [key, value] : config) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(ErrorCode::Config, "unknown config key '" + key + "'");
  }

  const std::string model_name = [&] {
    auto m = get("model");
    if (!m) fail(ErrorCode::Config, "config key 'model' is required");
    return *m;
  }();

  const int p = get("p") ? static_cast<int>(parse_num<long long>("p", *get("p")))
                         : 10;
  const double delta =
      get("delta") ? parse_num<double>("delta", *get("delta")) : 0.5;
  const std::uint64_t seed =
      get("seed") ? static_cast<std::uint64_t>(
                        parse_num<long long>("seed", *get("seed")))
                  : default_seed;
  const int reps = get("reps") ? static_cast<int>(
                                     parse_num<long long>("reps", *get("reps")))
                               : 100;
  const int nthreads =
      get("threads")
          ? static_cast<int>(parse_num<long long>("threads", *get("threads")))
          : threads;

  std::vector<double> mus = {0.0};
  if (get("mu")) mus = parse_list<double>("mu", *get("mu"));

  std::vector<int> hs = {10};
  if (get("H")) {
    hs.clear();
    for (long long h : parse_list<long long>("H", *get("H")))
      hs.push_back(static_cast<int>(h));
  }

  Estimator estimator = Estimator::Sir;
  if (auto e = get("estimator")) {
    if (*e == "sir") estimator = Estimator::Sir;
    else if (*e == "dtsir") estimator = Estimator::DtSir;
    else if (*e == "oracle") estimator = Estimator::Oracle;
    else if (*e == "aggregation") estimator = Estimator::Aggregation;
    else
      fail(ErrorCode::Config, "config key 'estimator': unknown value '" + *e +
                                  "'");
  }

  sparse::ThresholdConfig threshold;
  if (get("c1")) threshold.c1 = parse_num<double>("c1", *get("c1"));
  if (get("t")) threshold.explicit_t = parse_num<double>("t", *get("t"));

  sparse::AggregationConfig agg;
  if (get("k")) agg.k = static_cast<int>(parse_num<long long>("k", *get("k")));
  if (get("screen_m"))
    agg.screen_m =
        static_cast<int>(parse_num<long long>("screen_m", *get("screen_m")));
  if (get("cap")) agg.enumeration_cap = parse_num<long long>("cap", *get("cap"));
  if (auto s = get("strategy")) {
    if (*s == "exhaustive") agg.strategy = sparse::CandidateStrategy::Exhaustive;
    else if (*s == "screen")
      agg.strategy = sparse::CandidateStrategy::TopDiagonalScreen;
    else
      fail(ErrorCode::Config, "config key 'strategy': unknown value '" + *s +
                                  "'");
  }

  const bool centered =
      get("centered") ? parse_bool("centered", *get("centered")) : false;
  const double noise_sd =
      get("noise_sd") ? parse_num<double>("noise_sd", *get("noise_sd")) : 1.0;

  const bool has_n = get("n").has_value();
  const bool has_kappa = get("kappa").has_value();
  if (has_n == has_kappa)
    fail(ErrorCode::Config,
         "config requires exactly one of the keys 'n' and 'kappa'");

  PresetResult out;
  out.preset = "custom";
  for (double mu : mus) {
    models::ModelSpec model = [&] {
      if (model_name == "linear_mu") return models::ModelSpec::linear_mu(p, mu);
      if (model_name == "two_index_conjecture")
        return models::ModelSpec::two_index_conjecture(p, mu);
      for (int variant = 1; variant <= 4; ++variant)
        if (model_name == std::string("dtsir_") + std::to_string(variant))
          return models::ModelSpec::dtsir(variant, p, delta,
                                          rng::derive(seed, {0x62ULL}));
      fail(ErrorCode::Config,
           "config key 'model': unknown value '" + model_name + "'");
    }();
    model.set_noise_sd(noise_sd);

    std::vector<int> eig_indices;
    if (auto e = get("eig")) {
      for (long long idx : parse_list<long long>("eig", *e))
        eig_indices.push_back(static_cast<int>(idx));
    } else if (estimator == Estimator::Sir) {
      for (int j = 1; j <= model.d(); ++j) eig_indices.push_back(j);
    }

    std::vector<std::pair<double, long long>> sizes;  // (kappa, n)
    if (has_n) {
      for (long long n : parse_list<long long>("n", *get("n")))
        sizes.emplace_back(0.0, n);
    } else {
      if (model.support_size() < 1 || model.support_size() >= p)
        fail(ErrorCode::Config,
             "config key 'kappa' requires a sparse model with 1 <= s < p");
      for (double kappa : parse_list<double>("kappa", *get("kappa")))
        sizes.emplace_back(kappa,
                           models::kappa_to_n(kappa, model.support_size(), p));
    }

    for (int H : hs) {
      for (auto [kappa, n] : sizes) {
        Cell cell{.model = model, .n = n, .H = H, .estimator = estimator,
                  .fit_d = model.d(), .eig_indices = eig_indices,
                  .centered = centered, .kappa = kappa,
                  .threshold = threshold, .aggregation = agg};
        out.summaries.push_back(run_cell(cell, reps, seed, nthreads));
      }
    }
  }
  return out;
}

}  // namespace sdr::experiments
