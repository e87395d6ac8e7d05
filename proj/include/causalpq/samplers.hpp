#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalpq/asgn.hpp"
#include "causalpq/discrete_cbn.hpp"

namespace causalpq {

// Interventional sampling capability consumed by the query algorithms.
// Implementations must be pure given identical arguments (seed determinism)
// and safely shareable for concurrent reads. Queries consume value counts,
// the sufficient statistic of the empirical PMFs they build.
class DiscreteSampler {
 public:
  virtual ~DiscreteSampler() = default;

  virtual int num_nodes() const = 0;
  virtual int domain_size(int node) const = 0;

  // m draws of X_target under the intervention.
  virtual std::vector<int> sample_target(const DiscreteInterventionSpec& spec,
                                         int target, std::int64_t m,
                                         std::uint64_t seed) const = 0;

  // Counts of the m draws per domain value of the target.
  virtual std::vector<std::int64_t> sample_counts(const DiscreteInterventionSpec& spec,
                                                  int target, std::int64_t m,
                                                  std::uint64_t seed) const;

  // Joint counts of paired draws (X_i, X_target), row-major d_i x d_target;
  // needed when interventions may fail and the realized X_i must be observed.
  virtual std::vector<std::int64_t> sample_pair_counts(
      const DiscreteInterventionSpec& spec, int i, int target, std::int64_t m,
      std::uint64_t seed) const = 0;
};

class ContinuousSampler {
 public:
  virtual ~ContinuousSampler() = default;

  virtual int num_nodes() const = 0;
  virtual std::vector<double> sample_target(const ContinuousInterventionSpec& spec,
                                            int target, std::int64_t m,
                                            std::uint64_t seed) const = 0;
  // Mean of m draws of the target.
  virtual double sample_mean(const ContinuousInterventionSpec& spec, int target,
                             std::int64_t m, std::uint64_t seed) const;
};

// Per-draw ancestral sampling from a discrete CBN.
class CbnSampler : public DiscreteSampler {
 public:
  explicit CbnSampler(const DiscreteCbn& cbn) : cbn_(&cbn) {}

  int num_nodes() const override { return cbn_->n(); }
  int domain_size(int node) const override { return cbn_->domain_size(node); }
  std::vector<int> sample_target(const DiscreteInterventionSpec& spec, int target,
                                 std::int64_t m, std::uint64_t seed) const override;
  std::vector<std::int64_t> sample_counts(const DiscreteInterventionSpec& spec,
                                          int target, std::int64_t m,
                                          std::uint64_t seed) const override;
  std::vector<std::int64_t> sample_pair_counts(const DiscreteInterventionSpec& spec,
                                               int i, int target, std::int64_t m,
                                               std::uint64_t seed) const override;

 private:
  const DiscreteCbn* cbn_;
};

// Distribution-exact fast path: computes the exact interventional marginal
// once (memoized) and draws the value counts from a multinomial, which is the
// distribution of counts of m ancestral draws. Falls back to per-draw
// sampling when the marginal would exceed the enumeration cap.
class CbnMultinomialSampler : public DiscreteSampler {
 public:
  explicit CbnMultinomialSampler(const DiscreteCbn& cbn)
      : cbn_(&cbn), fallback_(cbn) {}

  int num_nodes() const override { return cbn_->n(); }
  int domain_size(int node) const override { return cbn_->domain_size(node); }
  std::vector<int> sample_target(const DiscreteInterventionSpec& spec, int target,
                                 std::int64_t m, std::uint64_t seed) const override;
  std::vector<std::int64_t> sample_counts(const DiscreteInterventionSpec& spec,
                                          int target, std::int64_t m,
                                          std::uint64_t seed) const override;
  std::vector<std::int64_t> sample_pair_counts(const DiscreteInterventionSpec& spec,
                                               int i, int target, std::int64_t m,
                                               std::uint64_t seed) const override;

 private:
  const std::vector<double>* marginal(const DiscreteInterventionSpec& spec,
                                      int target) const;

  const DiscreteCbn* cbn_;
  CbnSampler fallback_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::unique_ptr<std::vector<double>>> cache_;
};

// Shares one batch of full-vector draws across every target for a fixed
// intervention, the n-single-vertex-interventions reading of the query grid.
// The requested seed is ignored; the stream is a function of the intervention
// alone, so all targets observe the same draws.
class BatchedCbnSampler : public DiscreteSampler {
 public:
  BatchedCbnSampler(const DiscreteCbn& cbn, std::uint64_t root_seed)
      : cbn_(&cbn), root_seed_(root_seed) {}

  int num_nodes() const override { return cbn_->n(); }
  int domain_size(int node) const override { return cbn_->domain_size(node); }
  std::vector<int> sample_target(const DiscreteInterventionSpec& spec, int target,
                                 std::int64_t m, std::uint64_t seed) const override;
  std::vector<std::int64_t> sample_pair_counts(const DiscreteInterventionSpec& spec,
                                               int i, int target, std::int64_t m,
                                               std::uint64_t seed) const override;

  std::int64_t batches_drawn() const { return batches_drawn_; }

 private:
  const std::vector<std::vector<int>>& batch(const DiscreteInterventionSpec& spec,
                                             std::int64_t m) const;

  const DiscreteCbn* cbn_;
  std::uint64_t root_seed_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::unique_ptr<std::vector<std::vector<int>>>> cache_;
  mutable std::int64_t batches_drawn_ = 0;
};

// Per-draw forward sampling from an ASGN network. When built with
// `imperfect`, every intervened node without an explicit variance in the spec
// uses the network's per-node intervention variance.
class AsgnSampler : public ContinuousSampler {
 public:
  explicit AsgnSampler(const AsgnNetwork& net, bool imperfect = false)
      : net_(&net), imperfect_(imperfect) {}

  int num_nodes() const override { return net_->n(); }
  std::vector<double> sample_target(const ContinuousInterventionSpec& spec,
                                    int target, std::int64_t m,
                                    std::uint64_t seed) const override;

 protected:
  ContinuousInterventionSpec effective_spec(const ContinuousInterventionSpec& spec) const;

  const AsgnNetwork* net_;
  bool imperfect_;
};

// Distribution-exact fast path for Gaussian noise: X_target under a fixed
// intervention is Gaussian with the analytic moments, so the mean of m draws
// is a single normal draw.
class AsgnAnalyticSampler : public AsgnSampler {
 public:
  explicit AsgnAnalyticSampler(const AsgnNetwork& net, bool imperfect = false);

  double sample_mean(const ContinuousInterventionSpec& spec, int target,
                     std::int64_t m, std::uint64_t seed) const override;
};

}  // namespace causalpq
