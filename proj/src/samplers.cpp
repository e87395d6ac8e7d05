#include "causalpq/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"
#include "detail/asgn_plan.hpp"
#include "detail/cbn_plan.hpp"

namespace causalpq {

namespace {

std::string spec_key(const DiscreteInterventionSpec& spec, int target) {
  std::string key = std::to_string(target);
  for (const auto& a : spec.assignments) {
    key += ';';
    key += std::to_string(a.node);
    key += '=';
    key += std::to_string(a.value);
  }
  return key;
}

// Counts of m draws from pmf, distributed as the value counts of m i.i.d.
// samples, via chained binomials.
std::vector<std::int64_t> multinomial_counts(std::int64_t m,
                                             const std::vector<double>& pmf,
                                             Rng& rng) {
  const int d = static_cast<int>(pmf.size());
  std::vector<std::int64_t> counts(d, 0);
  std::int64_t remaining = m;
  double rest = 1.0;
  for (int k = 0; k < d - 1 && remaining > 0; ++k) {
    double q = rest > 0.0 ? pmf[k] / rest : 1.0;
    q = std::clamp(q, 0.0, 1.0);
    std::int64_t c = 0;
    if (q >= 1.0) {
      c = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::int64_t> binom(remaining, q);
      c = binom(rng);
    }
    counts[k] = c;
    remaining -= c;
    rest -= pmf[k];
  }
  counts[d - 1] += remaining;
  return counts;
}

std::vector<int> expand_counts(const std::vector<std::int64_t>& counts) {
  std::vector<int> values;
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  values.reserve(total);
  for (int v = 0; v < static_cast<int>(counts.size()); ++v)
    for (std::int64_t k = 0; k < counts[v]; ++k) values.push_back(v);
  return values;
}

}  // namespace

std::vector<std::int64_t> DiscreteSampler::sample_counts(
    const DiscreteInterventionSpec& spec, int target, std::int64_t m,
    std::uint64_t seed) const {
  std::vector<std::int64_t> counts(domain_size(target), 0);
  for (int v : sample_target(spec, target, m, seed)) ++counts[v];
  return counts;
}

double ContinuousSampler::sample_mean(const ContinuousInterventionSpec& spec,
                                      int target, std::int64_t m,
                                      std::uint64_t seed) const {
  double sum = 0.0;
  for (double x : sample_target(spec, target, m, seed)) sum += x;
  return sum / static_cast<double>(m);
}

std::vector<int> CbnSampler::sample_target(const DiscreteInterventionSpec& spec,
                                           int target, std::int64_t m,
                                           std::uint64_t seed) const {
  const detail::SamplePlan plan = detail::make_plan(*cbn_, spec, {target});
  Rng rng(seed);
  std::vector<int> values(cbn_->n(), 0);
  for (const auto& [node, value] : plan.preset) values[node] = value;
  std::vector<int> out;
  out.reserve(m);
  for (std::int64_t k = 0; k < m; ++k) {
    detail::run_plan(*cbn_, plan, rng, values);
    out.push_back(values[target]);
  }
  return out;
}

std::vector<std::int64_t> CbnSampler::sample_counts(const DiscreteInterventionSpec& spec,
                                                    int target, std::int64_t m,
                                                    std::uint64_t seed) const {
  const detail::SamplePlan plan = detail::make_plan(*cbn_, spec, {target});
  Rng rng(seed);
  std::vector<int> values(cbn_->n(), 0);
  for (const auto& [node, value] : plan.preset) values[node] = value;
  std::vector<std::int64_t> counts(cbn_->domain_size(target), 0);
  for (std::int64_t k = 0; k < m; ++k) {
    detail::run_plan(*cbn_, plan, rng, values);
    ++counts[values[target]];
  }
  return counts;
}

std::vector<std::int64_t> CbnSampler::sample_pair_counts(
    const DiscreteInterventionSpec& spec, int i, int target, std::int64_t m,
    std::uint64_t seed) const {
  if (!spec.intervenes(i))
    throw ValidationError("paired sampling requires an intervention on the origin");
  const detail::SamplePlan plan = detail::make_plan(*cbn_, spec, {i, target});
  Rng rng(seed);
  std::vector<int> values(cbn_->n(), 0);
  for (const auto& [node, value] : plan.preset) values[node] = value;
  const int dj = cbn_->domain_size(target);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cbn_->domain_size(i)) * dj, 0);
  for (std::int64_t k = 0; k < m; ++k) {
    detail::run_plan(*cbn_, plan, rng, values);
    ++counts[static_cast<std::size_t>(values[i]) * dj + values[target]];
  }
  return counts;
}

const std::vector<double>* CbnMultinomialSampler::marginal(
    const DiscreteInterventionSpec& spec, int target) const {
  const std::string key = spec_key(spec, target);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    Pmf pmf = exact_interventional_marginal(*cbn_, target, spec);
    it = cache_.emplace(key, std::make_unique<std::vector<double>>(std::move(pmf.p)))
             .first;
  }
  return it->second.get();
}

std::vector<std::int64_t> CbnMultinomialSampler::sample_counts(
    const DiscreteInterventionSpec& spec, int target, std::int64_t m,
    std::uint64_t seed) const {
  for (const auto& a : spec.assignments)
    if (a.phi && *a.phi < 1.0) return fallback_.sample_counts(spec, target, m, seed);
  const std::vector<double>* pmf = nullptr;
  try {
    pmf = marginal(spec, target);
  } catch (const CapacityError&) {
    return fallback_.sample_counts(spec, target, m, seed);
  }
  Rng rng(seed);
  return multinomial_counts(m, *pmf, rng);
}

std::vector<int> CbnMultinomialSampler::sample_target(
    const DiscreteInterventionSpec& spec, int target, std::int64_t m,
    std::uint64_t seed) const {
  return expand_counts(sample_counts(spec, target, m, seed));
}

std::vector<std::int64_t> CbnMultinomialSampler::sample_pair_counts(
    const DiscreteInterventionSpec& spec, int i, int target, std::int64_t m,
    std::uint64_t seed) const {
  if (!spec.intervenes(i))
    throw ValidationError("paired sampling requires an intervention on the origin");
  const int di = cbn_->domain_size(i);
  const int dj = cbn_->domain_size(target);
  // Joint law of (X_i, X_target): the realized origin value u acts as the
  // intervention, so cell (u, .) carries P(X_i = u) * p(X_target | do(X_i = u)).
  std::vector<double> joint(static_cast<std::size_t>(di) * dj, 0.0);
  try {
    for (const auto& a : spec.assignments) {
      if (a.node != i) continue;
      const double phi = a.phi.value_or(1.0);
      for (int u = 0; u < di; ++u) {
        const double pu = u == a.value ? phi : (1.0 - phi) / (di - 1);
        if (pu == 0.0) continue;
        DiscreteInterventionSpec realized = spec;
        for (auto& b : realized.assignments)
          if (b.node == i) {
            b.value = u;
            b.phi.reset();
          }
        const std::vector<double>* pmf = marginal(realized, target);
        for (int v = 0; v < dj; ++v)
          joint[static_cast<std::size_t>(u) * dj + v] = pu * (*pmf)[v];
      }
    }
  } catch (const CapacityError&) {
    return fallback_.sample_pair_counts(spec, i, target, m, seed);
  }
  Rng rng(seed);
  return multinomial_counts(m, joint, rng);
}

const std::vector<std::vector<int>>& BatchedCbnSampler::batch(
    const DiscreteInterventionSpec& spec, std::int64_t m) const {
  std::string key = spec_key(spec, -1);
  key += '#';
  key += std::to_string(m);
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    std::uint64_t seed = derive_seed(root_seed_, {static_cast<std::uint64_t>(m)});
    for (const auto& a : spec.assignments)
      seed = derive_seed(seed, {static_cast<std::uint64_t>(a.node),
                                static_cast<std::uint64_t>(a.value)});
    it = cache_
             .emplace(key, std::make_unique<std::vector<std::vector<int>>>(
                               sample(*cbn_, spec, m, seed)))
             .first;
    ++batches_drawn_;
  }
  return *it->second;
}

std::vector<int> BatchedCbnSampler::sample_target(const DiscreteInterventionSpec& spec,
                                                  int target, std::int64_t m,
                                                  std::uint64_t /*seed*/) const {
  const auto& rows = batch(spec, m);
  std::vector<int> out;
  out.reserve(m);
  for (const auto& row : rows) out.push_back(row[target]);
  return out;
}

std::vector<std::int64_t> BatchedCbnSampler::sample_pair_counts(
    const DiscreteInterventionSpec& spec, int i, int target, std::int64_t m,
    std::uint64_t /*seed*/) const {
  if (!spec.intervenes(i))
    throw ValidationError("paired sampling requires an intervention on the origin");
  const auto& rows = batch(spec, m);
  const int dj = cbn_->domain_size(target);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(cbn_->domain_size(i)) * dj, 0);
  for (const auto& row : rows)
    ++counts[static_cast<std::size_t>(row[i]) * dj + row[target]];
  return counts;
}

ContinuousInterventionSpec AsgnSampler::effective_spec(
    const ContinuousInterventionSpec& spec) const {
  if (!imperfect_) return spec;
  ContinuousInterventionSpec out = spec;
  for (auto& a : out.assignments) {
    if (!a.variance && net_->intervention_variances())
      a.variance = (*net_->intervention_variances())[a.node];
  }
  return out;
}

std::vector<double> AsgnSampler::sample_target(const ContinuousInterventionSpec& spec,
                                               int target, std::int64_t m,
                                               std::uint64_t seed) const {
  const auto plan = detail::make_plan(*net_, effective_spec(spec), {target});
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool gaussian = net_->noise_kind() == NoiseKind::kGaussian;
  std::vector<double> values(net_->n(), 0.0);
  std::vector<double> out;
  out.reserve(m);
  for (std::int64_t k = 0; k < m; ++k) {
    for (const detail::ContinuousStep& s : plan) {
      double noise;
      if (gaussian) {
        noise = s.sd * gauss(rng);
      } else {
        noise = s.sd * std::sqrt(3.0) * (2.0 * uniform01(rng) - 1.0);
      }
      if (s.intervened) {
        values[s.node] = s.value + noise;
      } else {
        double acc = noise;
        for (int p : net_->dag().parents(s.node))
          acc += net_->weight(s.node, p) * values[p];
        values[s.node] = acc;
      }
    }
    out.push_back(values[target]);
  }
  return out;
}

AsgnAnalyticSampler::AsgnAnalyticSampler(const AsgnNetwork& net, bool imperfect)
    : AsgnSampler(net, imperfect) {
  if (net.noise_kind() != NoiseKind::kGaussian)
    throw ValidationError("analytic sampling requires Gaussian noise");
}

double AsgnAnalyticSampler::sample_mean(const ContinuousInterventionSpec& spec,
                                        int target, std::int64_t m,
                                        std::uint64_t seed) const {
  const Moments mom = analytic_moments(*net_, target, effective_spec(spec));
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  return mom.mean + std::sqrt(mom.variance / static_cast<double>(m)) * gauss(rng);
}

}  // namespace causalpq
