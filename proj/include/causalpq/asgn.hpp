#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causalpq/dag.hpp"

namespace causalpq {

enum class NoiseKind { kGaussian, kUniform };

struct ContinuousAssignment {
  int node = 0;
  double value = 0.0;
  // Imperfect intervention: the node becomes a draw with mean `value` and
  // this variance instead of a constant. Incoming edges are cut either way.
  std::optional<double> variance;
};

struct ContinuousInterventionSpec {
  std::vector<ContinuousAssignment> assignments;

  bool intervenes(int node) const;
  static ContinuousInterventionSpec single(int node, double value) {
    return ContinuousInterventionSpec{{ContinuousAssignment{node, value, {}}}};
  }
};

// Linear structural model X = W X + N with independent zero-mean noises.
// weights[j * n + i] is the coefficient of X_i in the equation of X_j and is
// nonzero exactly on reversed edges (i -> j).
class AsgnNetwork {
 public:
  AsgnNetwork(Dag dag, std::vector<double> weights,
              std::vector<double> noise_variances,
              NoiseKind noise_kind = NoiseKind::kGaussian,
              std::optional<std::vector<double>> intervention_variances = {});

  const Dag& dag() const { return dag_; }
  int n() const { return dag_.n(); }
  double weight(int j, int i) const { return weights_[static_cast<std::size_t>(j) * n() + i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& noise_variances() const { return noise_variances_; }
  NoiseKind noise_kind() const { return noise_kind_; }
  const std::optional<std::vector<double>>& intervention_variances() const {
    return intervention_variances_;
  }

  bool operator==(const AsgnNetwork& other) const;

 private:
  Dag dag_;
  std::vector<double> weights_;  // n x n row-major
  std::vector<double> noise_variances_;
  NoiseKind noise_kind_;
  std::optional<std::vector<double>> intervention_variances_;
};

// Copy of W with the rows of all targets zeroed.
std::vector<double> mutilate_weights(const AsgnNetwork& net,
                                     const std::vector<int>& targets);

// Forward sampling in topological order over the mutilated weights.
std::vector<std::vector<double>> sample(const AsgnNetwork& net,
                                        const ContinuousInterventionSpec& spec,
                                        std::int64_t m, std::uint64_t seed);

// Exact mean and variance of X_target under the intervention, from
// (I - mutilated W)^{-1}.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};
Moments analytic_moments(const AsgnNetwork& net, int target,
                         const ContinuousInterventionSpec& spec);

struct AsgnConstants {
  double w_min = 0.0;
  double w_max = 0.0;
  double sigma_ub = 0.0;
  // Intervention magnitude 1/w_min; absent when w_min vanishes (a
  // path-cancellation parameterization).
  std::optional<double> z;
  bool faithful = true;
};

// Single-intervention constants: w_min over edges (i, j) of
// |{(I - mut_i W)^{-1}}_{ji}|; w_max as the largest squared row l2 norm over
// the plain and all single-node-mutilated inverses.
AsgnConstants compute_wmin_wmax(const AsgnNetwork& net);

// Parent-subset variant: w_min over |W_{ji}| of the edges; w_max additionally
// maximized over mutilations of every parent subset. In-degree above 20 is a
// capacity error.
AsgnConstants compute_wmin_wmax_transitive(const AsgnNetwork& net);

// Weights uniform on [-1.25,-0.01] u [0.01,1.25], noise variances uniform on
// [1,5], rejected until the max squared row l2 norm of (I-W)^{-1} is <= 20
// and w_min > 0.
AsgnNetwork random_asgn(const Dag& g, std::uint64_t seed, int max_retries = 1000);

}  // namespace causalpq
