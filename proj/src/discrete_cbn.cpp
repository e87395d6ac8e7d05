#include "causalpq/discrete_cbn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"
#include "detail/cbn_plan.hpp"

namespace causalpq {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr double kPmfEqualityTolerance = 1e-12;

Cpt build_cpt(int node, int domain, const std::vector<int>& parents,
              const std::vector<int>& domain_sizes,
              const std::vector<std::vector<double>>& rows) {
  Cpt t;
  t.domain = domain;
  t.parents = parents;
  t.strides.resize(parents.size());
  std::int64_t stride = 1;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    t.strides[k] = static_cast<int>(stride);
    stride *= domain_sizes[parents[k]];
  }
  t.rows = stride;
  if (static_cast<std::int64_t>(rows.size()) != t.rows)
    throw ValidationError("node " + std::to_string(node) + ": expected " +
                          std::to_string(t.rows) + " CPT rows, got " +
                          std::to_string(rows.size()));
  t.probs.reserve(t.rows * domain);
  t.cumulative.reserve(t.rows * domain);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != domain)
      throw ValidationError("node " + std::to_string(node) + ": CPT row length " +
                            std::to_string(row.size()) + " != domain size " +
                            std::to_string(domain));
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0)
        throw ValidationError("node " + std::to_string(node) +
                              ": negative CPT entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw ValidationError("node " + std::to_string(node) + ": CPT row sums to " +
                            std::to_string(sum));
    double acc = 0.0;
    for (double p : row) {
      t.probs.push_back(p);
      acc += p;
      t.cumulative.push_back(acc);
    }
  }
  return t;
}

}  // namespace

double Pmf::linf_distance(const Pmf& other) const {
  const std::size_t d = std::max(p.size(), other.p.size());
  double gap = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < other.p.size() ? other.p[k] : 0.0;
    gap = std::max(gap, std::abs(a - b));
  }
  return gap;
}

bool DiscreteInterventionSpec::intervenes(int node) const {
  for (const auto& a : assignments)
    if (a.node == node) return true;
  return false;
}

DiscreteCbn::DiscreteCbn(Dag dag, std::vector<int> domain_sizes,
                         std::vector<std::vector<std::vector<double>>> cpt_rows)
    : dag_(std::move(dag)), domain_sizes_(std::move(domain_sizes)) {
  const int n = dag_.n();
  if (static_cast<int>(domain_sizes_.size()) != n)
    throw ValidationError("domain size list does not match vertex count");
  if (static_cast<int>(cpt_rows.size()) != n)
    throw ValidationError("CPT list does not match vertex count");
  for (int v = 0; v < n; ++v)
    if (domain_sizes_[v] < 2)
      throw ValidationError("node " + std::to_string(v) + ": domain size must be >= 2");
  cpts_.reserve(n);
  for (int v = 0; v < n; ++v)
    cpts_.push_back(build_cpt(v, domain_sizes_[v], dag_.parents(v), domain_sizes_,
                              cpt_rows[v]));
}

int DiscreteCbn::max_domain_size() const {
  return *std::max_element(domain_sizes_.begin(), domain_sizes_.end());
}

std::int64_t DiscreteCbn::row_index(int node, const std::vector<int>& values) const {
  const Cpt& t = cpts_[node];
  std::int64_t row = 0;
  for (std::size_t k = 0; k < t.parents.size(); ++k)
    row += static_cast<std::int64_t>(t.strides[k]) * values[t.parents[k]];
  return row;
}

bool DiscreteCbn::operator==(const DiscreteCbn& other) const {
  if (!(dag_ == other.dag_) || domain_sizes_ != other.domain_sizes_) return false;
  for (int v = 0; v < n(); ++v)
    if (cpts_[v].probs != other.cpts_[v].probs) return false;
  return true;
}

DiscreteCbn mutilate(const DiscreteCbn& cbn, const std::vector<int>& targets) {
  const int n = cbn.n();
  std::vector<char> is_target(n, 0);
  for (int t : targets) {
    if (t < 0 || t >= n) throw ValidationError("mutilation target out of range");
    is_target[t] = 1;
  }
  std::vector<Edge> kept;
  for (const auto& e : cbn.dag().edges())
    if (!is_target[e.second]) kept.push_back(e);
  std::vector<std::vector<std::vector<double>>> rows(n);
  for (int v = 0; v < n; ++v) {
    const Cpt& t = cbn.cpt(v);
    if (is_target[v]) {
      rows[v] = {std::vector<double>(t.domain, 1.0 / t.domain)};
    } else {
      rows[v].reserve(t.rows);
      for (std::int64_t r = 0; r < t.rows; ++r)
        rows[v].emplace_back(t.probs.begin() + r * t.domain,
                             t.probs.begin() + (r + 1) * t.domain);
    }
  }
  return DiscreteCbn(Dag(n, std::move(kept)), cbn.domain_sizes(), std::move(rows));
}

std::vector<std::vector<int>> sample(const DiscreteCbn& cbn,
                                     const DiscreteInterventionSpec& spec,
                                     std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw ValidationError("sample count must be >= 1");
  std::vector<int> all(cbn.n());
  for (int v = 0; v < cbn.n(); ++v) all[v] = v;
  const detail::SamplePlan plan = detail::make_plan(cbn, spec, all);
  Rng rng(seed);
  std::vector<int> values(cbn.n(), 0);
  for (const auto& [node, value] : plan.preset) values[node] = value;
  std::vector<std::vector<int>> out;
  out.reserve(m);
  for (std::int64_t k = 0; k < m; ++k) {
    detail::run_plan(cbn, plan, rng, values);
    out.push_back(values);
  }
  return out;
}

Pmf exact_interventional_marginal(const DiscreteCbn& cbn, int target,
                                  const DiscreteInterventionSpec& spec,
                                  std::int64_t enumeration_cap) {
  const detail::SamplePlan plan = detail::make_plan(cbn, spec, {target});
  if (plan.has_imperfect())
    throw ValidationError("exact marginal requires perfect interventions");

  std::vector<int> values(cbn.n(), 0);
  for (const auto& [node, value] : plan.preset) values[node] = value;

  Pmf out;
  out.p.assign(cbn.domain_size(target), 0.0);

  // Intervened target: point mass.
  if (plan.steps.empty() || plan.steps.back().node != target) {
    out.p[values[target]] = 1.0;
    return out;
  }

  std::int64_t states = 1;
  for (const detail::PlanStep& s : plan.steps) {
    states *= cbn.domain_size(s.node);
    if (states > enumeration_cap)
      throw CapacityError("joint enumeration needs more than " +
                          std::to_string(enumeration_cap) + " states (" +
                          std::to_string(states) + " and counting)");
  }

  // Odometer over the free nodes with running prefix products of the CPT
  // factors; position k holds the product of factors 0..k.
  const int depth = static_cast<int>(plan.steps.size());
  std::vector<double> prefix(depth, 0.0);
  auto factor = [&](int k) {
    const detail::PlanStep& s = plan.steps[k];
    const Cpt& t = cbn.cpt(s.node);
    std::int64_t row = 0;
    for (std::size_t q = 0; q < t.parents.size(); ++q)
      row += static_cast<std::int64_t>(t.strides[q]) * values[t.parents[q]];
    return t.prob(row, values[s.node]);
  };
  for (int k = 0; k < depth; ++k) values[plan.steps[k].node] = 0;
  for (int k = 0; k < depth; ++k)
    prefix[k] = (k ? prefix[k - 1] : 1.0) * factor(k);

  while (true) {
    out.p[values[target]] += prefix[depth - 1];
    int k = depth - 1;
    while (k >= 0) {
      const int node = plan.steps[k].node;
      if (++values[node] < cbn.domain_size(node)) break;
      values[node] = 0;
      --k;
    }
    if (k < 0) break;
    for (; k < depth; ++k)
      prefix[k] = (k ? prefix[k - 1] : 1.0) * factor(k);
  }
  return out;
}

namespace {

// Minimum pairwise L-infinity gap among distinct PMFs; nullopt if all equal.
std::optional<double> min_unequal_gap(const std::vector<Pmf>& pmfs) {
  std::optional<double> best;
  for (std::size_t a = 0; a < pmfs.size(); ++a) {
    for (std::size_t b = a + 1; b < pmfs.size(); ++b) {
      const double gap = pmfs[a].linf_distance(pmfs[b]);
      if (gap < kPmfEqualityTolerance) continue;
      if (!best || gap < *best) best = gap;
    }
  }
  return best;
}

}  // namespace

GammaResult compute_gamma(const DiscreteCbn& cbn, std::int64_t enumeration_cap) {
  GammaResult result;
  result.gamma = std::numeric_limits<double>::infinity();
  bool any_edge = false;
  for (const auto& [i, j] : cbn.dag().edges()) {
    any_edge = true;
    std::vector<Pmf> pmfs;
    pmfs.reserve(cbn.domain_size(i));
    for (int x = 0; x < cbn.domain_size(i); ++x)
      pmfs.push_back(exact_interventional_marginal(
          cbn, j, DiscreteInterventionSpec::single(i, x), enumeration_cap));
    const auto gap = min_unequal_gap(pmfs);
    if (!gap) {
      result.faithful = false;
      result.gamma = 0.0;
      return result;
    }
    result.gamma = std::min(result.gamma, *gap);
  }
  if (!any_edge) result.gamma = 0.0;
  return result;
}

GammaResult compute_gamma_transitive(const DiscreteCbn& cbn,
                                     std::int64_t enumeration_cap) {
  constexpr std::int64_t kAssignmentCap = 4096;
  GammaResult result;
  result.gamma = std::numeric_limits<double>::infinity();
  bool any_subset = false;
  for (int j = 0; j < cbn.n(); ++j) {
    const std::vector<int>& parents = cbn.dag().parents(j);
    const int np = static_cast<int>(parents.size());
    if (np == 0) continue;
    if (np > 20)
      throw CapacityError("node " + std::to_string(j) + " has in-degree " +
                          std::to_string(np) + "; subset enumeration capped at 20");
    for (std::uint32_t mask = 1; mask < (1u << np); ++mask) {
      std::vector<int> subset;
      std::int64_t assignments = 1;
      for (int k = 0; k < np; ++k) {
        if (mask & (1u << k)) {
          subset.push_back(parents[k]);
          assignments *= cbn.domain_size(parents[k]);
        }
      }
      if (assignments > kAssignmentCap)
        throw CapacityError("node " + std::to_string(j) + ": " +
                            std::to_string(assignments) +
                            " joint assignments exceed the cap of " +
                            std::to_string(kAssignmentCap));
      any_subset = true;
      std::vector<Pmf> pmfs;
      pmfs.reserve(assignments);
      std::vector<int> values(subset.size(), 0);
      while (true) {
        DiscreteInterventionSpec spec;
        for (std::size_t k = 0; k < subset.size(); ++k)
          spec.assignments.push_back({subset[k], values[k], {}});
        pmfs.push_back(exact_interventional_marginal(cbn, j, spec, enumeration_cap));
        std::size_t k = 0;
        for (; k < subset.size(); ++k) {
          if (++values[k] < cbn.domain_size(subset[k])) break;
          values[k] = 0;
        }
        if (k == subset.size()) break;
      }
      const auto gap = min_unequal_gap(pmfs);
      if (!gap) {
        result.faithful = false;
        result.gamma = 0.0;
        return result;
      }
      result.gamma = std::min(result.gamma, *gap);
    }
  }
  if (!any_subset) result.gamma = 0.0;
  return result;
}

DiscreteCbn random_discrete_cbn(const Dag& g, int r_max, double gamma_floor,
                                std::uint64_t seed, int max_retries) {
  if (r_max < 2) throw ValidationError("r_max must be >= 2");
  const int n = g.n();
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    std::vector<int> domains(n);
    for (int v = 0; v < n; ++v)
      domains[v] = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(r_max - 1));
    std::vector<std::vector<std::vector<double>>> rows(n);
    for (int v = 0; v < n; ++v) {
      std::int64_t nrows = 1;
      for (int p : g.parents(v)) nrows *= domains[p];
      rows[v].reserve(nrows);
      for (std::int64_t r = 0; r < nrows; ++r) {
        // Uniform on the simplex via normalized exponentials.
        std::vector<double> row(domains[v]);
        double sum = 0.0;
        for (double& x : row) {
          x = -std::log(1.0 - uniform01(rng));
          sum += x;
        }
        for (double& x : row) x /= sum;
        rows[v].push_back(std::move(row));
      }
    }
    DiscreteCbn candidate(g, std::move(domains), std::move(rows));
    const GammaResult gr = compute_gamma(candidate);
    if (gr.faithful && gr.gamma >= gamma_floor) return candidate;
  }
  throw GenerationError("no CBN with gamma >= " + std::to_string(gamma_floor) +
                        " found in " + std::to_string(max_retries) + " attempts");
}

}  // namespace causalpq
