#pragma once

#include <cstdint>
#include <vector>

#include "causalpq/dag.hpp"
#include "causalpq/discrete_cbn.hpp"
#include "causalpq/rng.hpp"

namespace causalpq::testutil {

// Random DAG that may contain transitive edges: i.i.d. edge flips under a
// random vertex permutation, no reduction step.
inline Dag random_dag(int n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> perm(n);
  for (int v = 0; v < n; ++v) perm[v] = v;
  for (int v = n - 1; v > 0; --v) {
    const int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v + 1));
    std::swap(perm[v], perm[u]);
  }
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (uniform01(rng) < density) edges.emplace_back(perm[a], perm[b]);
  return Dag(n, std::move(edges));
}

// Plain DFS reachability, the brute-force oracle for the closure.
inline bool dfs_reaches(const Dag& g, int from, int to) {
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : g.children(v)) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

// Brute-force transitive reduction: drop every edge (i, j) that admits an
// alternate directed i -> j path when the edge itself is removed.
inline Dag brute_force_reduction(const Dag& g) {
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    std::vector<Edge> rest;
    for (const Edge& other : g.edges())
      if (other != e) rest.push_back(other);
    Dag without(g.n(), rest);
    if (!dfs_reaches(without, e.first, e.second)) kept.push_back(e);
  }
  return Dag(g.n(), kept);
}

// Two-node chain 0 -> 1 with P(X1 = 1 | X0 = 1) = 0.8 and strongly separated
// rows; gamma = 0.8.
inline DiscreteCbn chain_cbn() {
  Dag g(2, {{0, 1}});
  return DiscreteCbn(g, {2, 2},
                     {{{0.5, 0.5}},
                      {{0.9, 0.1}, {0.2, 0.8}}});
}

}  // namespace causalpq::testutil
