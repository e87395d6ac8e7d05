#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "causalpq/asgn.hpp"
#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"

namespace causalpq::detail {

struct ContinuousStep {
  int node;
  bool intervened;
  double value = 0.0;  // intervention mean
  double sd = 0.0;     // noise or intervention standard deviation
};

// Topologically ordered ancestors of the targets in the mutilated graph.
inline std::vector<ContinuousStep> make_plan(const AsgnNetwork& net,
                                             const ContinuousInterventionSpec& spec,
                                             const std::vector<int>& targets) {
  const Dag& g = net.dag();
  const int n = g.n();
  std::vector<int> assignment_of(n, -1);
  for (std::size_t k = 0; k < spec.assignments.size(); ++k) {
    const auto& a = spec.assignments[k];
    if (a.node < 0 || a.node >= n)
      throw ValidationError("intervention node out of range");
    if (assignment_of[a.node] >= 0)
      throw ValidationError("duplicate intervention on node " + std::to_string(a.node));
    if (!std::isfinite(a.value))
      throw ValidationError("intervention value must be finite");
    if (a.variance && *a.variance < 0.0)
      throw ValidationError("intervention variance must be non-negative");
    assignment_of[a.node] = static_cast<int>(k);
  }
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
    for (int p : g.parents(v))
      if (!needed[p]) {
        needed[p] = 1;
        stack.push_back(p);
      }
  }
  std::vector<ContinuousStep> plan;
  for (int v : g.topo_order()) {
    if (!needed[v]) continue;
    ContinuousStep step{v, false, 0.0, 0.0};
    if (assignment_of[v] >= 0) {
      const auto& a = spec.assignments[assignment_of[v]];
      step.intervened = true;
      step.value = a.value;
      step.sd = a.variance ? std::sqrt(*a.variance) : 0.0;
    } else {
      step.sd = std::sqrt(net.noise_variances()[v]);
    }
    plan.push_back(step);
  }
  return plan;
}

}  // namespace causalpq::detail
