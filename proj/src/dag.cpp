#include "causalpq/dag.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"

namespace causalpq {

namespace {

std::vector<int> kahn_order(int n, const std::vector<std::vector<int>>& children,
                            const std::vector<std::vector<int>>& parents) {
  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(parents[v].size());
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c : children[v])
      if (--indeg[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != n)
    throw ValidationError("graph contains a directed cycle");
  return order;
}

}  // namespace

Dag::Dag(int n) : Dag(n, {}) {}

Dag::Dag(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 0) throw ValidationError("vertex count must be non-negative");
  words_ = (n_ + 63) / 64;
  std::sort(edges_.begin(), edges_.end());
  parents_.assign(n_, {});
  children_.assign(n_, {});
  adj_bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
  const Edge* prev = nullptr;
  for (const Edge& e : edges_) {
    const auto [i, j] = e;
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
      throw ValidationError("edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range for n=" + std::to_string(n_));
    if (i == j)
      throw ValidationError("self loop at vertex " + std::to_string(i));
    if (prev != nullptr && *prev == e)
      throw ValidationError("duplicate edge (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
    prev = &e;
    children_[i].push_back(j);
    parents_[j].push_back(i);
    adj_bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] |= 1ULL << (j & 63);
  }
  topo_ = kahn_order(n_, children_, parents_);
}

bool Dag::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) return false;
  return (adj_bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1u;
}

ReachabilityMatrix::ReachabilityMatrix(int n, std::vector<std::uint64_t> bits)
    : n_(n), words_((n + 63) / 64), bits_(std::move(bits)) {}

ReachabilityMatrix transitive_closure(const Dag& g) {
  const int n = g.n();
  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(n) * words, 0);
  // reach(v) = union over children c of {c} + reach(c); reverse topological
  // order makes each row final when visited.
  const std::vector<int>& topo = g.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int v = *it;
    std::uint64_t* row = bits.data() + static_cast<std::size_t>(v) * words;
    for (int c : g.children(v)) {
      row[c >> 6] |= 1ULL << (c & 63);
      const std::uint64_t* crow = bits.data() + static_cast<std::size_t>(c) * words;
      for (int w = 0; w < words; ++w) row[w] |= crow[w];
    }
  }
  return ReachabilityMatrix(n, std::move(bits));
}

Dag transitive_reduction(const Dag& g) {
  const ReachabilityMatrix reach = transitive_closure(g);
  std::vector<Edge> kept;
  kept.reserve(g.edges().size());
  for (const auto& [i, j] : g.edges()) {
    bool shadowed = false;
    for (int c : g.children(i)) {
      if (c != j && reach.at(c, j)) {
        shadowed = true;
        break;
      }
    }
    if (!shadowed) kept.emplace_back(i, j);
  }
  return Dag(g.n(), std::move(kept));
}

std::vector<int> topological_order(const Dag& g) { return g.topo_order(); }

bool exact_path_query(const ReachabilityMatrix& reach, int i, int j) {
  if (i < 0 || i >= reach.n() || j < 0 || j >= reach.n())
    throw ValidationError("path query vertex out of range");
  if (i == j) throw ValidationError("path query requires i != j");
  return reach.at(i, j);
}

Dag random_tr_dag(int n, double edge_density, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_tr_dag requires n >= 1");
  if (!(edge_density > 0.0 && edge_density <= 1.0))
    throw ValidationError("edge_density must lie in (0, 1]");
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
      if (uniform01(rng) < edge_density) edges.emplace_back(perm[a], perm[b]);
  return transitive_reduction(Dag(n, std::move(edges)));
}

int count_transitive_edges(const Dag& g) {
  return static_cast<int>(g.num_edges() - transitive_reduction(g).num_edges());
}

bool is_transitive_edge(const Dag& g, const ReachabilityMatrix& reach, int i, int j) {
  if (!g.has_edge(i, j)) return false;
  for (int c : g.children(i))
    if (c != j && reach.at(c, j)) return true;
  return false;
}

}  // namespace causalpq
