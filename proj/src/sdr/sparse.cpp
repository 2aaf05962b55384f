#include "sdr/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdr/error.hpp"
#include "sdr/rng.hpp"

namespace sdr::sparse {

namespace {

// (1/H) sum_h m_S m_S^T accumulated entrywise in slice order, matching the
// arithmetic of estimate_lambda restricted to S.
linalg::SymMatrix restricted_lambda(const sir::SlicedView& view,
                                    const std::vector<int>& S) {
  const int k = static_cast<int>(S.size());
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd m(k);
  for (int h = 0; h < view.H; ++h) {
    for (int a = 0; a < k; ++a) m(a) = view.slice_means(h, S[a]);
    lam.selfadjointView<Eigen::Lower>().rankUpdate(m, 1.0);
  }
  lam = lam.selfadjointView<Eigen::Lower>();
  lam /= static_cast<double>(view.H);
  return linalg::SymMatrix(lam);
}

// Zero-embed a |S| x d frame into R^p on the rows listed in S.
sir::SubspaceEstimate embed(const Eigen::VectorXd& eigs,
                            const linalg::OrthoMatrix& vsub, int p,
                            const std::vector<int>& S) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, vsub.cols());
  for (int a = 0; a < static_cast<int>(S.size()); ++a)
    v.row(S[a]) = vsub.mat().row(a);
  return sir::SubspaceEstimate{linalg::OrthoMatrix(v), eigs, S};
}

sir::SubspaceEstimate restricted_topd(const sir::SlicedView& view,
                                      const std::vector<int>& S, int d,
                                      int p) {
  auto [eigs, vsub] = linalg::sym_eig_topd(restricted_lambda(view, S), d);
  return embed(eigs, vsub, p, S);
}

}  // namespace

double default_threshold(int p, long long n, double c1) {
  if (p < 2 || n < 1)
    fail(ErrorCode::Config, "default_threshold requires p >= 2 and n >= 1");
  if (!(c1 > 0.0)) fail(ErrorCode::Config, "c1 must be positive");
  return c1 * std::log(static_cast<double>(p)) / static_cast<double>(n);
}

sir::SubspaceEstimate dt_sir(const models::Dataset& data, int H,
                             const ThresholdConfig& cfg) {
  const int p = data.p();
  const sir::SlicedView view = sir::slice(data, H);
  const double t = cfg.explicit_t >= 0.0
                       ? cfg.explicit_t
                       : default_threshold(p, data.n(), cfg.c1);

  std::vector<int> S;
  for (int i = 0; i < p; ++i) {
    double diag = 0.0;
    for (int h = 0; h < H; ++h)
      diag += view.slice_means(h, i) * view.slice_means(h, i);
    if (diag / H > t) S.push_back(i);
  }
  if (S.empty())
    fail(ErrorCode::Estimation,
         "threshold eliminated all coordinates (t=" + std::to_string(t) + ")");
  return restricted_topd(view, S, 1, p);
}

sir::SubspaceEstimate oracle_estimator(const sir::CondCovEstimate& est,
                                       const std::vector<int>& S, int d) {
  const int p = est.lambda_hat.dim();
  if (static_cast<int>(S.size()) < d)
    fail(ErrorCode::Config, "support of size " + std::to_string(S.size()) +
                                " cannot carry d=" + std::to_string(d));
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  auto [eigs, vsub] = linalg::sym_eig_topd(est.lambda_hat.restricted(sorted), d);
  return embed(eigs, vsub, p, sorted);
}

namespace {

double binomial_guard(int p, int k, long long cap) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) {
    c *= static_cast<double>(p - i) / (i + 1);
    if (c > 4.0 * static_cast<double>(cap)) break;
  }
  return c;
}

// Visit k-subsets of pool in lexicographic order of their index vectors.
template <typename F>
void for_each_combination(const std::vector<int>& pool, int k, F&& visit) {
  const int m = static_cast<int>(pool.size());
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> B(k);
  while (true) {
    for (int a = 0; a < k; ++a) B[a] = pool[idx[a]];
    visit(B);
    int a = k - 1;
    while (a >= 0 && idx[a] == m - k + a) --a;
    if (a < 0) break;
    ++idx[a];
    for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
  }
}

double restricted_score(const sir::SlicedView& view, const std::vector<int>& S,
                        const Eigen::MatrixXd& v_rows) {
  // Tr(V^T lambda_hat V) over the support rows of V.
  const linalg::SymMatrix lam = restricted_lambda(view, S);
  return (v_rows.transpose() * lam.mat() * v_rows).trace();
}

}  // namespace

std::pair<models::Dataset, models::Dataset> split_halves(
    const models::Dataset& data, std::uint64_t seed) {
  const int n = data.n();
  const int p = data.p();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng::Stream stream(rng::derive(seed, {0x73706c6974ULL}));
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(stream.next_u64() % (i + 1));
    std::swap(perm[i], perm[j]);
  }
  const int half = n / 2;
  auto subset = [&](int begin, int count) {
    models::Dataset d2;
    d2.X.resize(count, p);
    d2.y.resize(count);
    for (int i = 0; i < count; ++i) {
      d2.X.row(i) = data.X.row(perm[begin + i]);
      d2.y(i) = data.y(perm[begin + i]);
    }
    return d2;
  };
  return {subset(0, half), subset(half, half)};
}

sir::SubspaceEstimate aggregation_estimator(const models::Dataset& data,
                                            const AggregationConfig& cfg,
                                            std::uint64_t seed) {
  const int p = data.p();
  const int n = data.n();
  if (cfg.d < 1 || cfg.d > cfg.k || cfg.k > p)
    fail(ErrorCode::Config, "aggregation requires 1 <= d <= k <= p");
  if (n < 2 * cfg.H)
    fail(ErrorCode::Config, "aggregation requires n >= 2H");

  const auto [first, second] = split_halves(data, seed);
  const sir::SlicedView view1 = sir::slice(first, cfg.H);
  const sir::SlicedView view2 = sir::slice(second, cfg.H);

  std::vector<int> pool(p);
  std::iota(pool.begin(), pool.end(), 0);
  if (cfg.strategy == CandidateStrategy::TopDiagonalScreen) {
    const int m = std::min(p, std::max(cfg.screen_m, cfg.k));
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(p);
    for (int h = 0; h < view1.H; ++h)
      diag += view1.slice_means.row(h).cwiseAbs2().transpose();
    std::stable_sort(pool.begin(), pool.end(),
                     [&](int a, int b) { return diag(a) > diag(b); });
    pool.resize(m);
    std::sort(pool.begin(), pool.end());
  }

  const double count =
      binomial_guard(static_cast<int>(pool.size()), cfg.k, cfg.enumeration_cap);
  if (count > static_cast<double>(cfg.enumeration_cap))
    fail(ErrorCode::Config,
         "candidate enumeration exceeds the cap; use the top-diagonal "
         "screened strategy or raise enumeration_cap");

  bool have_best = false;
  double best_score = 0.0;
  std::vector<int> best_B;
  Eigen::MatrixXd best_rows;
  Eigen::VectorXd best_eigs;

  for_each_combination(pool, cfg.k, [&](const std::vector<int>& B) {
    auto [eigs, vsub] = linalg::sym_eig_topd(restricted_lambda(view1, B),
                                             cfg.d);
    const double score = restricted_score(view2, B, vsub.mat());
    if (!have_best || score > best_score ||
        (score == best_score && B < best_B)) {
      have_best = true;
      best_score = score;
      best_B = B;
      best_rows = vsub.mat();
      best_eigs = eigs;
    }
  });

  return embed(best_eigs, linalg::OrthoMatrix(best_rows), p, best_B);
}

int effective_support_size(double s, double q, int p, int d, double n,
                           double lambda) {
  if (!(s >= 1.0) || q < 0.0 || q >= 2.0 || p < 1 || d < 1 || !(n > 0.0) ||
      !(lambda > 0.0))
    fail(ErrorCode::Config, "effective_support_size parameter out of range");
  if (q == 0.0) return std::min(static_cast<int>(std::ceil(s)), p);

  const auto rhs = [&](double x) {
    return s * std::pow(n * lambda /
                            (d + std::log(std::exp(1.0) * p / x)),
                        q / 2.0);
  };
  const auto in_set = [&](double x) { return x <= rhs(x); };

  const double pd = static_cast<double>(p);
  if (in_set(pd)) return p;
  double lo = 1e-12, hi = pd;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (in_set(mid) ? lo : hi) = mid;
  }
  return std::min(static_cast<int>(std::ceil(lo)), p);
}

}  // namespace sdr::sparse
