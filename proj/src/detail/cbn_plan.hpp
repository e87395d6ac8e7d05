#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalpq/discrete_cbn.hpp"
#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"

namespace causalpq::detail {

enum class NodeAction : std::uint8_t { kCpt, kFixed, kImperfect };

struct PlanStep {
  int node;
  NodeAction action;
  int value = 0;     // for kFixed / kImperfect
  double phi = 1.0;  // for kImperfect
};

// Nodes needed to sample the targets under the mutilated graph, in
// topological order. Perfectly intervened nodes are dropped from the steps
// and pre-written into the value buffer instead.
struct SamplePlan {
  std::vector<PlanStep> steps;
  std::vector<std::pair<int, int>> preset;

  bool has_imperfect() const {
    for (const PlanStep& s : steps)
      if (s.action == NodeAction::kImperfect) return true;
    return false;
  }
};

inline SamplePlan make_plan(const DiscreteCbn& cbn,
                            const DiscreteInterventionSpec& spec,
                            const std::vector<int>& targets) {
  const Dag& g = cbn.dag();
  const int n = g.n();
  std::vector<int> assignment_of(n, -1);
  for (std::size_t k = 0; k < spec.assignments.size(); ++k) {
    const auto& a = spec.assignments[k];
    if (a.node < 0 || a.node >= n)
      throw ValidationError("intervention node out of range");
    if (assignment_of[a.node] >= 0)
      throw ValidationError("duplicate intervention on node " + std::to_string(a.node));
    if (a.value < 0 || a.value >= cbn.domain_size(a.node))
      throw ValidationError("intervention value out of domain for node " +
                            std::to_string(a.node));
    if (a.phi && (*a.phi < 0.5 || *a.phi > 1.0))
      throw ValidationError("intervention success probability must lie in [1/2, 1]");
    assignment_of[a.node] = static_cast<int>(k);
  }

  // Ancestors of the targets in the mutilated graph: do not expand past
  // intervened nodes, whose parents are cut.
  std::vector<char> needed(n, 0);
  std::vector<int> stack;
  for (int t : targets) {
    if (t < 0 || t >= n) throw ValidationError("target node out of range");
    if (!needed[t]) {
      needed[t] = 1;
      stack.push_back(t);
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (assignment_of[v] >= 0) continue;
    for (int p : g.parents(v)) {
      if (!needed[p]) {
        needed[p] = 1;
        stack.push_back(p);
      }
    }
  }

  SamplePlan plan;
  for (int v : g.topo_order()) {
    if (!needed[v]) continue;
    if (assignment_of[v] >= 0) {
      const auto& a = spec.assignments[assignment_of[v]];
      if (a.phi && *a.phi < 1.0) {
        plan.steps.push_back({v, NodeAction::kImperfect, a.value, *a.phi});
      } else {
        plan.preset.emplace_back(v, a.value);
      }
    } else {
      plan.steps.push_back({v, NodeAction::kCpt});
    }
  }
  return plan;
}

inline int draw_from_row(const Cpt& t, std::int64_t row, double u) {
  const double* cum = t.cumulative.data() + row * t.domain;
  const int d = t.domain;
  for (int v = 0; v < d - 1; ++v)
    if (u < cum[v]) return v;
  return d - 1;
}

inline void run_plan(const DiscreteCbn& cbn, const SamplePlan& plan, Rng& rng,
                     std::vector<int>& values) {
  for (const PlanStep& s : plan.steps) {
    switch (s.action) {
      case NodeAction::kCpt: {
        const Cpt& t = cbn.cpt(s.node);
        std::int64_t row = 0;
        for (std::size_t k = 0; k < t.parents.size(); ++k)
          row += static_cast<std::int64_t>(t.strides[k]) * values[t.parents[k]];
        values[s.node] = draw_from_row(t, row, uniform01(rng));
        break;
      }
      case NodeAction::kImperfect: {
        if (uniform01(rng) < s.phi) {
          values[s.node] = s.value;
        } else {
          const int d = cbn.domain_size(s.node);
          int v = static_cast<int>(rng() % static_cast<std::uint64_t>(d - 1));
          if (v >= s.value) ++v;
          values[s.node] = v;
        }
        break;
      }
      case NodeAction::kFixed:
        values[s.node] = s.value;
        break;
    }
  }
}

}  // namespace causalpq::detail
