#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sdr/sir.hpp"

namespace sdr::sparse {

// Diagonal threshold t = c1 * log(p) / n, or an explicit override.
// explicit_t = 0 disables screening entirely (every coordinate survives).
struct ThresholdConfig {
  double c1 = 2.0;
  double explicit_t = -1.0;  // >= 0 to override the default rule
};

double default_threshold(int p, long long n, double c1);

// Diagonal-thresholding SIR: screen coordinates by the diagonal of
// lambda_hat, take the principal eigenvector of the surviving submatrix and
// zero-embed it. Throws an estimation error when the threshold eliminates all
// coordinates. The full p x p matrix is never materialized.
sir::SubspaceEstimate dt_sir(const models::Dataset& data, int H,
                             const ThresholdConfig& cfg = {});

// Top-d eigenvectors of the restriction lambda_hat(S, S), zero-embedded:
// the exact maximizer of Tr(V^T lambda_hat V) over orthonormal V supported
// on S.
sir::SubspaceEstimate oracle_estimator(const sir::CondCovEstimate& est,
                                       const std::vector<int>& S, int d);

// Seeded random equal split used by the aggregation estimator; odd n drops
// the last sample after the shuffle.
std::pair<models::Dataset, models::Dataset> split_halves(
    const models::Dataset& data, std::uint64_t seed);

enum class CandidateStrategy { Exhaustive, TopDiagonalScreen };

struct AggregationConfig {
  int k = 1;
  int d = 1;
  int H = 10;
  long long enumeration_cap = 2'000'000;
  CandidateStrategy strategy = CandidateStrategy::Exhaustive;
  int screen_m = 20;  // candidate pool size under the screened strategy
};

// Two-split estimator: fit support-restricted eigenspaces on the first half,
// select the candidate support maximizing alignment with the second half.
// Ties broken by lexicographically smallest candidate set, so the result is
// independent of enumeration order.
sir::SubspaceEstimate aggregation_estimator(const models::Dataset& data,
                                            const AggregationConfig& cfg,
                                            std::uint64_t seed);

// Effective support size: ceil of the largest x in (0, p] with
// x <= s (n lambda / (d + log(e p / x)))^(q/2), capped at p.
int effective_support_size(double s, double q, int p, int d, double n,
                           double lambda);

}  // namespace sdr::sparse
