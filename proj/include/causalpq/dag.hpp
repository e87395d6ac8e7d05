#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace causalpq {

using Edge = std::pair<int, int>;

// Immutable directed acyclic graph over vertices 0..n-1. Acyclicity, absence
// of self loops and of duplicate edges are enforced at construction, so every
// Dag value in the library is valid by type.
class Dag {
 public:
  explicit Dag(int n);
  Dag(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  std::int64_t num_edges() const { return static_cast<std::int64_t>(edges_.size()); }
  bool has_edge(int i, int j) const;

  const std::vector<Edge>& edges() const { return edges_; }  // sorted (i, j)
  const std::vector<int>& parents(int v) const { return parents_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }

  // Topological order with ties broken by ascending vertex id; computed once
  // at construction.
  const std::vector<int>& topo_order() const { return topo_; }

  bool operator==(const Dag& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<std::uint64_t> adj_bits_;  // row-major n x n membership bitset
  std::vector<int> topo_;
  int words_ = 0;
};

// Boolean reachability matrix: entry (i, j) true iff a directed path of
// length >= 1 leads from i to j. Diagonal is always false.
class ReachabilityMatrix {
 public:
  ReachabilityMatrix(int n, std::vector<std::uint64_t> bits);

  int n() const { return n_; }
  bool at(int i, int j) const {
    const std::uint64_t word =
        bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)];
    return (word >> (j & 63)) & 1u;
  }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

ReachabilityMatrix transitive_closure(const Dag& g);

// Unique minimal graph with the same reachability as g.
Dag transitive_reduction(const Dag& g);

std::vector<int> topological_order(const Dag& g);

// Noiseless path query backed by a precomputed closure. Rejects i == j.
bool exact_path_query(const ReachabilityMatrix& reach, int i, int j);

// Random DAG equal to its own transitive reduction: i.i.d. edge coin flips
// under a random vertex permutation, then reduction.
Dag random_tr_dag(int n, double edge_density, std::uint64_t seed);

int count_transitive_edges(const Dag& g);

// True iff (i, j) is an edge of g shadowed by a longer directed path.
bool is_transitive_edge(const Dag& g, const ReachabilityMatrix& reach, int i, int j);

}  // namespace causalpq
