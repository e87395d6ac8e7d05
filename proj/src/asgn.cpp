#include "causalpq/asgn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"
#include "detail/asgn_plan.hpp"

namespace causalpq {

namespace {

constexpr double kWminZeroTolerance = 1e-12;

Eigen::MatrixXd to_matrix(const std::vector<double>& w, int n) {
  Eigen::MatrixXd out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(j, i) = w[static_cast<std::size_t>(j) * n + i];
  return out;
}

Eigen::MatrixXd inverse_of_i_minus(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  return (Eigen::MatrixXd::Identity(n, n) - w).inverse();
}

double max_squared_row_norm(const Eigen::MatrixXd& a) {
  return a.rowwise().squaredNorm().maxCoeff();
}

Eigen::MatrixXd mutilated(const Eigen::MatrixXd& w, const std::vector<int>& targets) {
  Eigen::MatrixXd out = w;
  for (int t : targets) out.row(t).setZero();
  return out;
}

}  // namespace

bool ContinuousInterventionSpec::intervenes(int node) const {
  for (const auto& a : assignments)
    if (a.node == node) return true;
  return false;
}

AsgnNetwork::AsgnNetwork(Dag dag, std::vector<double> weights,
                         std::vector<double> noise_variances, NoiseKind noise_kind,
                         std::optional<std::vector<double>> intervention_variances)
    : dag_(std::move(dag)),
      weights_(std::move(weights)),
      noise_variances_(std::move(noise_variances)),
      noise_kind_(noise_kind),
      intervention_variances_(std::move(intervention_variances)) {
  const int n = dag_.n();
  if (static_cast<std::size_t>(n) * n != weights_.size())
    throw ValidationError("weight matrix must be n x n");
  if (static_cast<int>(noise_variances_.size()) != n)
    throw ValidationError("noise variance list does not match vertex count");
  for (int v = 0; v < n; ++v)
    if (!(noise_variances_[v] > 0.0))
      throw ValidationError("noise variance of node " + std::to_string(v) +
                            " must be positive");
  if (intervention_variances_ &&
      static_cast<int>(intervention_variances_->size()) != n)
    throw ValidationError("intervention variance list does not match vertex count");
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const bool structural = dag_.has_edge(i, j);
      const bool nonzero = weight(j, i) != 0.0;
      if (structural != nonzero)
        throw ValidationError("weight support mismatch at (" + std::to_string(j) +
                              "," + std::to_string(i) + "): W nonzero iff edge i->j");
    }
}

bool AsgnNetwork::operator==(const AsgnNetwork& other) const {
  return dag_ == other.dag_ && weights_ == other.weights_ &&
         noise_variances_ == other.noise_variances_ &&
         noise_kind_ == other.noise_kind_ &&
         intervention_variances_ == other.intervention_variances_;
}

std::vector<double> mutilate_weights(const AsgnNetwork& net,
                                     const std::vector<int>& targets) {
  std::vector<double> out = net.weights();
  const int n = net.n();
  for (int t : targets) {
    if (t < 0 || t >= n) throw ValidationError("mutilation target out of range");
    std::fill(out.begin() + static_cast<std::size_t>(t) * n,
              out.begin() + static_cast<std::size_t>(t + 1) * n, 0.0);
  }
  return out;
}

std::vector<std::vector<double>> sample(const AsgnNetwork& net,
                                        const ContinuousInterventionSpec& spec,
                                        std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw ValidationError("sample count must be >= 1");
  std::vector<int> all(net.n());
  for (int v = 0; v < net.n(); ++v) all[v] = v;
  const auto plan = detail::make_plan(net, spec, all);
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool gaussian = net.noise_kind() == NoiseKind::kGaussian;
  std::vector<double> values(net.n(), 0.0);
  std::vector<std::vector<double>> out;
  out.reserve(m);
  for (std::int64_t k = 0; k < m; ++k) {
    for (const detail::ContinuousStep& s : plan) {
      double noise;
      if (gaussian) {
        noise = s.sd * gauss(rng);
      } else {
        // Centered uniform with matching variance: half-width sd * sqrt(3).
        noise = s.sd * std::sqrt(3.0) * (2.0 * uniform01(rng) - 1.0);
      }
      if (s.intervened) {
        values[s.node] = s.value + noise;
      } else {
        double acc = noise;
        for (int p : net.dag().parents(s.node)) acc += net.weight(s.node, p) * values[p];
        values[s.node] = acc;
      }
    }
    out.push_back(values);
  }
  return out;
}

Moments analytic_moments(const AsgnNetwork& net, int target,
                         const ContinuousInterventionSpec& spec) {
  const int n = net.n();
  if (target < 0 || target >= n) throw ValidationError("target node out of range");
  std::vector<int> targets;
  for (const auto& a : spec.assignments) targets.push_back(a.node);
  const Eigen::MatrixXd w = mutilated(to_matrix(net.weights(), n), targets);
  const Eigen::MatrixXd b = inverse_of_i_minus(w);
  std::vector<char> intervened(n, 0);
  Moments out;
  for (const auto& a : spec.assignments) {
    intervened[a.node] = 1;
    out.mean += b(target, a.node) * a.value;
    if (a.variance)
      out.variance += b(target, a.node) * b(target, a.node) * (*a.variance);
  }
  for (int p = 0; p < n; ++p)
    if (!intervened[p])
      out.variance += b(target, p) * b(target, p) * net.noise_variances()[p];
  return out;
}

AsgnConstants compute_wmin_wmax(const AsgnNetwork& net) {
  const int n = net.n();
  const Eigen::MatrixXd w = to_matrix(net.weights(), n);
  AsgnConstants out;
  out.w_max = max_squared_row_norm(inverse_of_i_minus(w));
  out.w_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd bi = inverse_of_i_minus(mutilated(w, {i}));
    out.w_max = std::max(out.w_max, max_squared_row_norm(bi));
    for (int j : net.dag().children(i))
      out.w_min = std::min(out.w_min, std::abs(bi(j, i)));
  }
  if (net.dag().num_edges() == 0) out.w_min = 0.0;
  double sigma_max = 0.0;
  for (double v : net.noise_variances()) sigma_max = std::max(sigma_max, v);
  out.sigma_ub = sigma_max * out.w_max;
  if (out.w_min > kWminZeroTolerance) {
    out.z = 1.0 / out.w_min;
  } else {
    out.faithful = false;
  }
  return out;
}

AsgnConstants compute_wmin_wmax_transitive(const AsgnNetwork& net) {
  const int n = net.n();
  const Eigen::MatrixXd w = to_matrix(net.weights(), n);
  AsgnConstants out;
  out.w_max = max_squared_row_norm(inverse_of_i_minus(w));
  out.w_min = std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : net.dag().edges())
    out.w_min = std::min(out.w_min, std::abs(net.weight(j, i)));
  if (net.dag().num_edges() == 0) out.w_min = 0.0;

  std::set<std::vector<int>> seen;
  for (int j = 0; j < n; ++j) {
    const std::vector<int>& parents = net.dag().parents(j);
    const int np = static_cast<int>(parents.size());
    if (np > 20)
      throw CapacityError("node " + std::to_string(j) + " has in-degree " +
                          std::to_string(np) + "; subset enumeration capped at 20");
    for (std::uint32_t mask = 1; mask < (1u << np); ++mask) {
      std::vector<int> subset;
      for (int k = 0; k < np; ++k)
        if (mask & (1u << k)) subset.push_back(parents[k]);
      if (!seen.insert(subset).second) continue;
      out.w_max = std::max(out.w_max,
                           max_squared_row_norm(inverse_of_i_minus(mutilated(w, subset))));
    }
  }
  double sigma_max = 0.0;
  for (double v : net.noise_variances()) sigma_max = std::max(sigma_max, v);
  out.sigma_ub = sigma_max * out.w_max;
  if (out.w_min > kWminZeroTolerance) {
    out.z = 1.0 / out.w_min;
  } else {
    out.faithful = false;
  }
  return out;
}

AsgnNetwork random_asgn(const Dag& g, std::uint64_t seed, int max_retries) {
  const int n = g.n();
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    std::vector<double> weights(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& [i, j] : g.edges()) {
      const double magnitude = 0.01 + (1.25 - 0.01) * uniform01(rng);
      const double sign = (rng() & 1u) ? 1.0 : -1.0;
      weights[static_cast<std::size_t>(j) * n + i] = sign * magnitude;
    }
    std::vector<double> variances(n);
    for (double& v : variances) v = 1.0 + 4.0 * uniform01(rng);
    AsgnNetwork candidate(g, std::move(weights), std::move(variances));
    const Eigen::MatrixXd b =
        inverse_of_i_minus(to_matrix(candidate.weights(), n));
    if (max_squared_row_norm(b) > 20.0) continue;
    if (g.num_edges() > 0 && !compute_wmin_wmax(candidate).z) continue;
    return candidate;
  }
  throw GenerationError("no admissible weight matrix found in " +
                        std::to_string(max_retries) + " attempts");
}

}  // namespace causalpq
