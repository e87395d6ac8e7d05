#include "causalpq/queries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"

namespace causalpq {

namespace {

void check_pair(int n, int i, int j) {
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw ValidationError("query node out of range");
  if (i == j) throw ValidationError("path query requires i != j");
}

double linf_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

// Max pairwise gap of the empirical PMFs collected in one value sweep.
double max_pairwise_gap(const std::vector<std::vector<double>>& pmfs) {
  double gap = 0.0;
  for (std::size_t a = 0; a < pmfs.size(); ++a)
    for (std::size_t b = a + 1; b < pmfs.size(); ++b)
      gap = std::max(gap, linf_gap(pmfs[a], pmfs[b]));
  return gap;
}

}  // namespace

QueryOutcome path_query_discrete(const DiscreteSampler& sampler, int i, int j,
                                 std::int64_t m, double threshold,
                                 std::uint64_t seed) {
  return transitive_query_discrete(sampler, i, j, {}, m, threshold, seed);
}

QueryOutcome transitive_query_discrete(const DiscreteSampler& sampler, int i, int j,
                                       const std::vector<int>& blocking,
                                       std::int64_t m, double threshold,
                                       std::uint64_t seed) {
  check_pair(sampler.num_nodes(), i, j);
  if (m < 1) throw ValidationError("sample count must be >= 1");
  if (!(threshold > 0.0)) throw ValidationError("decision threshold must be positive");
  const int di = sampler.domain_size(i);
  if (di < 2 || sampler.domain_size(j) < 2)
    throw ValidationError("query requires domain sizes >= 2");
  for (int s : blocking)
    if (s == i) throw ValidationError("blocking set must not contain the origin");

  std::int64_t assignments = 1;
  for (int s : blocking) {
    assignments *= sampler.domain_size(s);
    if (assignments > 1'000'000)
      throw CapacityError("blocking set spans more than 1e6 joint assignments");
  }

  QueryOutcome out;
  std::vector<int> values(blocking.size(), 0);
  for (std::int64_t batch = 0; batch < assignments; ++batch) {
    // One batch: S fixed, X_i swept over its domain as in the plain query.
    std::vector<std::vector<double>> pmfs;
    pmfs.reserve(di);
    for (int x = 0; x < di; ++x) {
      DiscreteInterventionSpec spec;
      for (std::size_t k = 0; k < blocking.size(); ++k)
        spec.assignments.push_back({blocking[k], values[k], {}});
      spec.assignments.push_back({i, x, {}});
      const auto counts =
          sampler.sample_counts(spec, j, m,
                                derive_seed(seed, {static_cast<std::uint64_t>(batch),
                                                   static_cast<std::uint64_t>(x)}));
      std::vector<double> pmf(counts.size());
      for (std::size_t k = 0; k < counts.size(); ++k)
        pmf[k] = static_cast<double>(counts[k]) / static_cast<double>(m);
      pmfs.push_back(std::move(pmf));
      out.samples_used += m;
    }
    out.max_gap = std::max(out.max_gap, max_pairwise_gap(pmfs));
    if (out.max_gap > threshold) {
      out.answer = 1;
      return out;
    }
    for (std::size_t k = 0; k < blocking.size(); ++k) {
      if (++values[k] < sampler.domain_size(blocking[k])) break;
      values[k] = 0;
    }
  }
  return out;
}

QueryOutcome path_query_continuous(const ContinuousSampler& sampler, int i, int j,
                                   std::int64_t m, double z, std::uint64_t seed) {
  return transitive_query_continuous(sampler, i, j, {}, m, 0.0, z, seed);
}

QueryOutcome transitive_query_continuous(const ContinuousSampler& sampler, int i,
                                         int j, const std::vector<int>& blocking,
                                         std::int64_t m, double z1, double z2,
                                         std::uint64_t seed) {
  check_pair(sampler.num_nodes(), i, j);
  if (m < 1) throw ValidationError("sample count must be >= 1");
  if (!std::isfinite(z1) || !std::isfinite(z2))
    throw ValidationError("intervention values must be finite");
  for (int s : blocking)
    if (s == i) throw ValidationError("blocking set must not contain the origin");
  ContinuousInterventionSpec spec;
  for (int s : blocking) spec.assignments.push_back({s, z1, {}});
  spec.assignments.push_back({i, z2, {}});
  const double mean = sampler.sample_mean(spec, j, m, derive_seed(seed, {0, 0}));
  QueryOutcome out;
  out.samples_used = m;
  out.max_gap = std::abs(mean);
  out.answer = out.max_gap > 0.5 ? 1 : 0;
  return out;
}

QueryOutcome path_query_discrete_imperfect(const DiscreteSampler& sampler, int i,
                                           int j, std::int64_t m, double threshold,
                                           double phi, std::uint64_t seed) {
  check_pair(sampler.num_nodes(), i, j);
  if (m < 1) throw ValidationError("sample count must be >= 1");
  if (!(threshold > 0.0)) throw ValidationError("decision threshold must be positive");
  if (phi < 0.5 || phi > 1.0)
    throw ValidationError("intervention success probability must lie in [1/2, 1]");
  const int di = sampler.domain_size(i);
  const int dj = sampler.domain_size(j);
  if (di < 2 || dj < 2)
    throw ValidationError("query requires domain sizes >= 2");

  QueryOutcome out;
  std::vector<std::vector<double>> pmfs;
  pmfs.reserve(di);
  for (int x = 0; x < di; ++x) {
    DiscreteInterventionSpec spec;
    spec.assignments.push_back({i, x, phi});
    const auto counts = sampler.sample_pair_counts(
        spec, i, j, m, derive_seed(seed, {0, static_cast<std::uint64_t>(x)}));
    out.samples_used += m;
    std::int64_t successes = 0;
    for (int v = 0; v < dj; ++v) successes += counts[static_cast<std::size_t>(x) * dj + v];
    if (successes == 0)
      throw DegenerateSampleError(
          "no draw realized the target value " + std::to_string(x) + " on node " +
          std::to_string(i) + "; raise m");
    std::vector<double> pmf(dj);
    for (int v = 0; v < dj; ++v)
      pmf[v] = static_cast<double>(counts[static_cast<std::size_t>(x) * dj + v]) /
               static_cast<double>(successes);
    pmfs.push_back(std::move(pmf));
  }
  out.max_gap = max_pairwise_gap(pmfs);
  out.answer = out.max_gap > threshold ? 1 : 0;
  return out;
}

QueryOutcome oracle_path_query(const ReachabilityMatrix& reach, int i, int j) {
  QueryOutcome out;
  out.answer = exact_path_query(reach, i, j) ? 1 : 0;
  out.samples_used = 1;
  out.max_gap = out.answer;
  return out;
}

QueryOutcome oracle_transitive_query(const Dag& g, const ReachabilityMatrix& reach,
                                     int i, int j) {
  check_pair(g.n(), i, j);
  QueryOutcome out;
  out.answer = is_transitive_edge(g, reach, i, j) ? 1 : 0;
  out.samples_used = 1;
  out.max_gap = out.answer;
  return out;
}

}  // namespace causalpq
