#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causalpq/dag.hpp"

namespace causalpq {

// Probability mass function over domain values 0..d-1.
struct Pmf {
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double linf_distance(const Pmf& other) const;
};

// One forced assignment. `phi` is the per-node success probability of an
// imperfect intervention; absent means the intervention is perfect. When the
// Bernoulli trial fails the node takes a value uniform over the rest of its
// domain, with incoming edges cut either way.
struct DiscreteAssignment {
  int node = 0;
  int value = 0;
  std::optional<double> phi;
};

struct DiscreteInterventionSpec {
  std::vector<DiscreteAssignment> assignments;

  bool intervenes(int node) const;
  static DiscreteInterventionSpec single(int node, int value) {
    return DiscreteInterventionSpec{{DiscreteAssignment{node, value, {}}}};
  }
};

// Conditional probability table of one node, stored row-major: one row per
// parent configuration, one column per domain value. Rows are indexed
// lexicographically over the ascending parent list with the lowest-indexed
// parent varying fastest.
struct Cpt {
  int domain = 0;
  std::vector<int> parents;   // ascending node ids
  std::vector<int> strides;   // row-index stride per parent
  std::int64_t rows = 1;
  std::vector<double> probs;       // rows * domain
  std::vector<double> cumulative;  // per-row prefix sums of probs

  double prob(std::int64_t row, int value) const { return probs[row * domain + value]; }
};

class DiscreteCbn {
 public:
  // domain_sizes[i] >= 2; cpt_rows[i] has prod(parent domains) rows of
  // length domain_sizes[i], each summing to 1 within 1e-9.
  DiscreteCbn(Dag dag, std::vector<int> domain_sizes,
              std::vector<std::vector<std::vector<double>>> cpt_rows);

  const Dag& dag() const { return dag_; }
  int n() const { return dag_.n(); }
  int domain_size(int node) const { return cpts_[node].domain; }
  const std::vector<int>& domain_sizes() const { return domain_sizes_; }
  int max_domain_size() const;
  const Cpt& cpt(int node) const { return cpts_[node]; }

  // Row of node's CPT for the given full assignment of its parents.
  std::int64_t row_index(int node, const std::vector<int>& values) const;

  bool operator==(const DiscreteCbn& other) const;

 private:
  Dag dag_;
  std::vector<int> domain_sizes_;
  std::vector<Cpt> cpts_;
};

struct GammaResult {
  double gamma = 0.0;
  // False when some parent edge (or parent subset) admits no pair of
  // intervention values with distinct target distributions.
  bool faithful = true;
};

// Incoming edges of every target removed; target CPTs replaced by a
// single placeholder row (the value is supplied at sampling time).
DiscreteCbn mutilate(const DiscreteCbn& cbn, const std::vector<int>& targets);

// Ancestral sampling of all n variables over the mutilated graph.
std::vector<std::vector<int>> sample(const DiscreteCbn& cbn,
                                     const DiscreteInterventionSpec& spec,
                                     std::int64_t m, std::uint64_t seed);

// Exact p(X_target | do(spec)) by enumeration over the mutilated ancestral
// set of the target. Enumeration beyond `enumeration_cap` joint states is a
// capacity error.
inline constexpr std::int64_t kEnumerationCap = 10'000'000;

Pmf exact_interventional_marginal(const DiscreteCbn& cbn, int target,
                                  const DiscreteInterventionSpec& spec,
                                  std::int64_t enumeration_cap = kEnumerationCap);

// Identifiability margin over single-parent interventions: the minimum, over
// edges (i, j) and value pairs with distinct p(X_j | do(X_i = .)), of the
// L-infinity gap. Distributions closer than 1e-12 compare equal.
GammaResult compute_gamma(const DiscreteCbn& cbn,
                          std::int64_t enumeration_cap = kEnumerationCap);

// Margin over joint interventions on non-empty parent subsets.
GammaResult compute_gamma_transitive(const DiscreteCbn& cbn,
                                     std::int64_t enumeration_cap = kEnumerationCap);

// Random CPTs (rows uniform on the simplex, domains uniform in {2..r_max}),
// rejection-resampled until compute_gamma >= gamma_floor.
DiscreteCbn random_discrete_cbn(const Dag& g, int r_max, double gamma_floor,
                                std::uint64_t seed, int max_retries = 1000);

}  // namespace causalpq
