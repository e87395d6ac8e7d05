#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causalpq/dag.hpp"
#include "causalpq/queries.hpp"

namespace causalpq {

enum class Regime {
  kDiscrete,
  kContinuous,
  kDiscreteImperfect,
  kTransitiveDiscrete,
  kTransitiveContinuous,
};

std::string regime_name(Regime regime);

struct PlanConstants {
  double gamma = 0.0;    // discrete regimes
  int r = 0;             // max domain size, discrete regimes
  double sigma_ub = 0.0; // continuous regimes
  double alpha = 1.0;    // imperfect discrete
};

struct SampleSizePlan {
  std::int64_t m_per_distribution = 0;
  std::int64_t m_per_query = 0;
  Regime regime = Regime::kDiscrete;
  int n = 0;
  double delta = 0.0;
  PlanConstants constants;
  // Paired decision rule: gamma/2 for discrete regimes (the per-PMF
  // estimation target behind m is gamma/8), 1/2 for continuous ones.
  double decision_threshold = 0.0;
};

// Smallest per-distribution sample count under which every query in a full
// n x n grid answers correctly with probability >= 1 - delta, using the
// exact constants of the concentration bounds rather than their O(.) forms:
//   discrete              m = ceil[(128/gamma^2) ln(2 r n^2 / delta)]
//   discrete, imperfect   m = ceil[(256/(alpha gamma^2)) ln(4 r n^2 / delta)]
//   continuous            m = ceil[8 sigma_ub ln(2 n^2 / delta)]
// The transitive regimes reuse the formulas with their own constants.
SampleSizePlan plan_samples(Regime regime, int n, double delta,
                            const PlanConstants& constants);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RecoveryReport {
  std::vector<Edge> learned_edges;
  std::int64_t path_queries_issued = 0;
  std::int64_t transitive_queries_issued = 0;
  std::int64_t total_samples = 0;
  std::optional<Metrics> vs_truth;
  // True when the raw query answers implied a cycle and edges had to be
  // dropped deterministically before reduction; always a recovery failure.
  bool cycle_salvaged = false;
};

using PathQueryFn = std::function<QueryOutcome(int i, int j)>;
using TransitiveQueryFn =
    std::function<QueryOutcome(int i, int j, const std::vector<int>& blocking)>;

struct LearnResult {
  Dag graph;
  RecoveryReport report;
};

// Issues all n(n-1) ordered path queries, inserts edge (i, j) on answer 1,
// and returns the transitive reduction of the answers.
LearnResult learn_tr(int n, const PathQueryFn& query);

// Walks targets in topological order of the reduced graph and origins
// backwards from the target, querying against the growing parent estimate;
// accepted edges join both the result and the estimate. Pairs already joined
// by an edge of `tr` are not queried.
LearnResult learn_transitive_edges(const Dag& tr, const TransitiveQueryFn& tquery);

// Directed-edge precision / recall / F1. An empty learned edge set has
// precision 1 by convention.
Metrics evaluate(const Dag& truth, const Dag& learned);

std::string report_to_json(const RecoveryReport& report);

}  // namespace causalpq
