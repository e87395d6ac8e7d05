#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalpq/learner.hpp"
#include "causalpq/model_io.hpp"

namespace causalpq {

// Phase-transition harness configuration. Per-query sample counts follow the
// grid m = ceil(e^C ln(n r)) for discrete runs and m = ceil(e^C ln n) for
// continuous ones; success is exact recovery of the (transitively reduced)
// generating graph.
struct ExperimentConfig {
  std::string regime = "discrete";  // "discrete" | "continuous"
  bool imperfect = false;
  std::vector<int> n_values{10, 15, 20};
  std::vector<double> c_grid{0.0, 1.5, 3.0, 4.5, 6.0, 7.5, 9.0, 10.5, 12.0};
  int trials = 20;
  double delta = 0.01;
  double edge_density = 0.15;
  int r_max = 5;              // discrete: domains drawn from {2..r_max}
  double gamma_floor = 0.01;  // discrete: generator rejection floor
  double phi = 0.9;           // imperfect discrete: intervention success prob
  bool nu2_equals_sigma2 = true;  // imperfect continuous
  // "exact" draws query statistics from their exact sampling distribution
  // (multinomial counts / analytic normal means); "per-draw" samples every
  // interventional draw individually.
  std::string sampler = "exact";
  std::uint64_t seed = 1;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& config);

std::vector<CurveRow> run_phase_transition(const ExperimentConfig& config);

std::string render_curve_svg(const std::vector<CurveRow>& rows);

struct CensusRow {
  std::string name;
  int vertices = 0;
  int edges = 0;
  int transitive_edges = 0;
  double ratio = 0.0;  // transitive_edges / edges, 0 when edgeless
};

struct CensusResult {
  std::vector<CensusRow> rows;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  std::vector<std::string> errors;  // per-file parse failures, run continues
};

CensusResult run_census(const std::vector<std::string>& paths);
std::string census_to_csv(const CensusResult& result);

struct RecoveryOptions {
  double delta = 0.05;
  bool oracle = false;    // noiseless queries against the true graph
  bool batched = false;   // share draws across targets per intervention
  bool transitive = true; // run the transitive-edge phase after reduction
  bool imperfect = false;
  double phi = 0.9;    // imperfect discrete
  double alpha = 0.9;  // imperfect discrete planner constant
  std::optional<std::int64_t> m_override;
  std::optional<double> gamma_override;
  std::optional<double> sigma_ub_override;
  std::string sampler = "per-draw";
  std::uint64_t seed = 1;
};

struct RecoveryRunResult {
  Dag learned;
  RecoveryReport report;
  // Constants measured from the model when no override was given.
  double gamma = 0.0;
  double gamma_transitive = 0.0;
  double sigma_ub = 0.0;
  double z = 0.0;
  std::int64_t m_path = 0;
  std::int64_t m_transitive = 0;
};

// Full pipeline on a benchmark network: reduction learning, optionally the
// transitive-edge phase, and evaluation against the network's own graph.
// The delta budget is split evenly across the two phases when both run.
RecoveryRunResult run_benchmark_recovery(const NamedNetwork& net,
                                         const RecoveryOptions& options);

std::string recovery_to_json(const NamedNetwork& net, const RecoveryRunResult& run);

}  // namespace causalpq
