#pragma once

#include <cstdint>
#include <vector>

#include "causalpq/dag.hpp"
#include "causalpq/samplers.hpp"

namespace causalpq {

struct QueryOutcome {
  int answer = 0;
  std::int64_t samples_used = 0;
  // Largest observed statistic: L-infinity gap between empirical PMFs for
  // discrete queries, |empirical mean| for continuous ones.
  double max_gap = 0.0;
};

// Sweeps every value of X_i, estimates the PMF of X_j from m draws each, and
// answers 1 iff some pair of empirical PMFs is strictly farther apart than
// `threshold` in L-infinity. Uses exactly |Dom[X_i]| * m samples. Ties at the
// threshold answer 0.
QueryOutcome path_query_discrete(const DiscreteSampler& sampler, int i, int j,
                                 std::int64_t m, double threshold,
                                 std::uint64_t seed);

// Intervenes X_i at z and answers 1 iff |mean of m draws of X_j| > 1/2.
QueryOutcome path_query_continuous(const ContinuousSampler& sampler, int i, int j,
                                   std::int64_t m, double z, std::uint64_t seed);

// For each joint assignment of the blocking set S, sweeps X_i as the discrete
// path query does; answers 1 and stops at the first assignment whose PMF pair
// separates. With S empty this reduces bit-for-bit to path_query_discrete.
QueryOutcome transitive_query_discrete(const DiscreteSampler& sampler, int i, int j,
                                       const std::vector<int>& blocking,
                                       std::int64_t m, double threshold,
                                       std::uint64_t seed);

// Intervenes all of S at z1 and X_i at z2; thresholds |mean| at 1/2.
QueryOutcome transitive_query_continuous(const ContinuousSampler& sampler, int i,
                                         int j, const std::vector<int>& blocking,
                                         std::int64_t m, double z1, double z2,
                                         std::uint64_t seed);

// Path query under interventions that succeed with probability phi: estimates
// each PMF by the conditional MLE over paired (X_i, X_j) samples restricted
// to draws where the intervention took. Zero successful draws for some target
// value is a degenerate-sample error.
QueryOutcome path_query_discrete_imperfect(const DiscreteSampler& sampler, int i,
                                           int j, std::int64_t m, double threshold,
                                           double phi, std::uint64_t seed);

// Noiseless oracles over the true graph, for validation and oracle-mode runs.
QueryOutcome oracle_path_query(const ReachabilityMatrix& reach, int i, int j);
QueryOutcome oracle_transitive_query(const Dag& g, const ReachabilityMatrix& reach,
                                     int i, int j);

}  // namespace causalpq
