// Python bindings for the main operations: graphs, network models, samplers,
// noisy queries, planners, learners, file formats, and the experiment
// harness.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causalpq/asgn.hpp"
#include "causalpq/dag.hpp"
#include "causalpq/discrete_cbn.hpp"
#include "causalpq/errors.hpp"
#include "causalpq/experiments.hpp"
#include "causalpq/learner.hpp"
#include "causalpq/model_io.hpp"
#include "causalpq/queries.hpp"
#include "causalpq/rng.hpp"
#include "causalpq/samplers.hpp"

namespace py = pybind11;
using namespace causalpq;

PYBIND11_MODULE(_causalpq, m) {
  m.doc() = "causal structure learning from interventional path queries";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  // ---------------------------------------------------------------- graphs
  py::class_<Dag>(m, "Dag")
      .def(py::init<int>(), py::arg("n"))
      .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Dag::n)
      .def_property_readonly("num_edges", &Dag::num_edges)
      .def("has_edge", &Dag::has_edge)
      .def("edges", &Dag::edges)
      .def("parents", &Dag::parents)
      .def("children", &Dag::children)
      .def("topo_order", &Dag::topo_order)
      .def("__eq__", [](const Dag& a, const Dag& b) { return a == b; })
      .def("__repr__", [](const Dag& g) {
        return "Dag(n=" + std::to_string(g.n()) + ", edges=" +
               std::to_string(g.num_edges()) + ")";
      });

  py::class_<ReachabilityMatrix>(m, "ReachabilityMatrix")
      .def_property_readonly("n", &ReachabilityMatrix::n)
      .def("at", &ReachabilityMatrix::at);

  m.def("transitive_closure", &transitive_closure);
  m.def("transitive_reduction", &transitive_reduction);
  m.def("topological_order", &topological_order);
  m.def("exact_path_query", &exact_path_query);
  m.def("random_tr_dag", &random_tr_dag, py::arg("n"), py::arg("edge_density"),
        py::arg("seed"));
  m.def("count_transitive_edges", &count_transitive_edges);

  // ---------------------------------------------------------------- models
  py::class_<Pmf>(m, "Pmf")
      .def_readonly("p", &Pmf::p)
      .def("linf_distance", &Pmf::linf_distance);

  py::class_<DiscreteAssignment>(m, "DiscreteAssignment")
      .def(py::init([](int node, int value, std::optional<double> phi) {
             return DiscreteAssignment{node, value, phi};
           }),
           py::arg("node"), py::arg("value"), py::arg("phi") = std::nullopt)
      .def_readwrite("node", &DiscreteAssignment::node)
      .def_readwrite("value", &DiscreteAssignment::value)
      .def_readwrite("phi", &DiscreteAssignment::phi);

  py::class_<DiscreteInterventionSpec>(m, "DiscreteInterventionSpec")
      .def(py::init<>())
      .def(py::init([](const std::vector<DiscreteAssignment>& assignments) {
             return DiscreteInterventionSpec{assignments};
           }),
           py::arg("assignments"))
      .def_readwrite("assignments", &DiscreteInterventionSpec::assignments)
      .def_static("single", &DiscreteInterventionSpec::single);

  py::class_<DiscreteCbn>(m, "DiscreteCbn")
      .def(py::init<Dag, std::vector<int>,
                    std::vector<std::vector<std::vector<double>>>>(),
           py::arg("dag"), py::arg("domain_sizes"), py::arg("cpt_rows"))
      .def_property_readonly("dag", &DiscreteCbn::dag)
      .def_property_readonly("n", &DiscreteCbn::n)
      .def("domain_size", &DiscreteCbn::domain_size)
      .def("max_domain_size", &DiscreteCbn::max_domain_size)
      .def("__eq__",
           [](const DiscreteCbn& a, const DiscreteCbn& b) { return a == b; });

  py::class_<GammaResult>(m, "GammaResult")
      .def_readonly("gamma", &GammaResult::gamma)
      .def_readonly("faithful", &GammaResult::faithful);

  m.def("mutilate", &mutilate);
  m.def("sample_discrete",
        py::overload_cast<const DiscreteCbn&, const DiscreteInterventionSpec&,
                          std::int64_t, std::uint64_t>(&sample),
        py::arg("cbn"), py::arg("spec"), py::arg("m"), py::arg("seed"));
  m.def("exact_interventional_marginal", &exact_interventional_marginal,
        py::arg("cbn"), py::arg("target"), py::arg("spec"),
        py::arg("enumeration_cap") = kEnumerationCap);
  m.def("compute_gamma", &compute_gamma, py::arg("cbn"),
        py::arg("enumeration_cap") = kEnumerationCap);
  m.def("compute_gamma_transitive", &compute_gamma_transitive, py::arg("cbn"),
        py::arg("enumeration_cap") = kEnumerationCap);
  m.def("random_discrete_cbn", &random_discrete_cbn, py::arg("dag"),
        py::arg("r_max"), py::arg("gamma_floor"), py::arg("seed"),
        py::arg("max_retries") = 1000);

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("GAUSSIAN", NoiseKind::kGaussian)
      .value("UNIFORM", NoiseKind::kUniform);

  py::class_<ContinuousAssignment>(m, "ContinuousAssignment")
      .def(py::init([](int node, double value, std::optional<double> variance) {
             return ContinuousAssignment{node, value, variance};
           }),
           py::arg("node"), py::arg("value"), py::arg("variance") = std::nullopt)
      .def_readwrite("node", &ContinuousAssignment::node)
      .def_readwrite("value", &ContinuousAssignment::value)
      .def_readwrite("variance", &ContinuousAssignment::variance);

  py::class_<ContinuousInterventionSpec>(m, "ContinuousInterventionSpec")
      .def(py::init<>())
      .def(py::init([](const std::vector<ContinuousAssignment>& assignments) {
             return ContinuousInterventionSpec{assignments};
           }),
           py::arg("assignments"))
      .def_readwrite("assignments", &ContinuousInterventionSpec::assignments)
      .def_static("single", &ContinuousInterventionSpec::single);

  py::class_<AsgnNetwork>(m, "AsgnNetwork")
      .def(py::init<Dag, std::vector<double>, std::vector<double>, NoiseKind,
                    std::optional<std::vector<double>>>(),
           py::arg("dag"), py::arg("weights"), py::arg("noise_variances"),
           py::arg("noise_kind") = NoiseKind::kGaussian,
           py::arg("intervention_variances") = std::nullopt)
      .def_property_readonly("dag", &AsgnNetwork::dag)
      .def_property_readonly("n", &AsgnNetwork::n)
      .def("weight", &AsgnNetwork::weight, py::arg("j"), py::arg("i"))
      .def_property_readonly("noise_variances", &AsgnNetwork::noise_variances)
      .def("__eq__",
           [](const AsgnNetwork& a, const AsgnNetwork& b) { return a == b; });

  py::class_<Moments>(m, "Moments")
      .def_readonly("mean", &Moments::mean)
      .def_readonly("variance", &Moments::variance);

  py::class_<AsgnConstants>(m, "AsgnConstants")
      .def_readonly("w_min", &AsgnConstants::w_min)
      .def_readonly("w_max", &AsgnConstants::w_max)
      .def_readonly("sigma_ub", &AsgnConstants::sigma_ub)
      .def_readonly("z", &AsgnConstants::z)
      .def_readonly("faithful", &AsgnConstants::faithful);

  m.def("mutilate_weights", &mutilate_weights);
  m.def("sample_asgn",
        py::overload_cast<const AsgnNetwork&, const ContinuousInterventionSpec&,
                          std::int64_t, std::uint64_t>(&sample),
        py::arg("net"), py::arg("spec"), py::arg("m"), py::arg("seed"));
  m.def("analytic_moments", &analytic_moments);
  m.def("compute_wmin_wmax", &compute_wmin_wmax);
  m.def("compute_wmin_wmax_transitive", &compute_wmin_wmax_transitive);
  m.def("random_asgn", &random_asgn, py::arg("dag"), py::arg("seed"),
        py::arg("max_retries") = 1000);

  // -------------------------------------------------------------- samplers
  py::class_<DiscreteSampler>(m, "DiscreteSampler");
  py::class_<ContinuousSampler>(m, "ContinuousSampler");
  py::class_<CbnSampler, DiscreteSampler>(m, "CbnSampler")
      .def(py::init<const DiscreteCbn&>(), py::keep_alive<1, 2>())
      .def("sample_target", &CbnSampler::sample_target)
      .def("sample_counts", &CbnSampler::sample_counts);
  py::class_<CbnMultinomialSampler, DiscreteSampler>(m, "CbnMultinomialSampler")
      .def(py::init<const DiscreteCbn&>(), py::keep_alive<1, 2>())
      .def("sample_counts", &CbnMultinomialSampler::sample_counts);
  py::class_<BatchedCbnSampler, DiscreteSampler>(m, "BatchedCbnSampler")
      .def(py::init<const DiscreteCbn&, std::uint64_t>(), py::keep_alive<1, 2>())
      .def("batches_drawn", &BatchedCbnSampler::batches_drawn);
  py::class_<AsgnSampler, ContinuousSampler>(m, "AsgnSampler")
      .def(py::init<const AsgnNetwork&, bool>(), py::arg("net"),
           py::arg("imperfect") = false, py::keep_alive<1, 2>())
      .def("sample_target", &AsgnSampler::sample_target);
  py::class_<AsgnAnalyticSampler, ContinuousSampler>(m, "AsgnAnalyticSampler")
      .def(py::init<const AsgnNetwork&, bool>(), py::arg("net"),
           py::arg("imperfect") = false, py::keep_alive<1, 2>());

  // --------------------------------------------------------------- queries
  py::class_<QueryOutcome>(m, "QueryOutcome")
      .def_readonly("answer", &QueryOutcome::answer)
      .def_readonly("samples_used", &QueryOutcome::samples_used)
      .def_readonly("max_gap", &QueryOutcome::max_gap);

  m.def("path_query_discrete", &path_query_discrete, py::arg("sampler"),
        py::arg("i"), py::arg("j"), py::arg("m"), py::arg("threshold"),
        py::arg("seed"));
  m.def("path_query_continuous", &path_query_continuous, py::arg("sampler"),
        py::arg("i"), py::arg("j"), py::arg("m"), py::arg("z"), py::arg("seed"));
  m.def("transitive_query_discrete", &transitive_query_discrete,
        py::arg("sampler"), py::arg("i"), py::arg("j"), py::arg("blocking"),
        py::arg("m"), py::arg("threshold"), py::arg("seed"));
  m.def("transitive_query_continuous", &transitive_query_continuous,
        py::arg("sampler"), py::arg("i"), py::arg("j"), py::arg("blocking"),
        py::arg("m"), py::arg("z1"), py::arg("z2"), py::arg("seed"));
  m.def("path_query_discrete_imperfect", &path_query_discrete_imperfect,
        py::arg("sampler"), py::arg("i"), py::arg("j"), py::arg("m"),
        py::arg("threshold"), py::arg("phi"), py::arg("seed"));
  m.def("oracle_path_query", &oracle_path_query);
  m.def("oracle_transitive_query", &oracle_transitive_query);

  // --------------------------------------------------------------- learner
  py::enum_<Regime>(m, "Regime")
      .value("DISCRETE", Regime::kDiscrete)
      .value("CONTINUOUS", Regime::kContinuous)
      .value("DISCRETE_IMPERFECT", Regime::kDiscreteImperfect)
      .value("TRANSITIVE_DISCRETE", Regime::kTransitiveDiscrete)
      .value("TRANSITIVE_CONTINUOUS", Regime::kTransitiveContinuous);

  py::class_<PlanConstants>(m, "PlanConstants")
      .def(py::init([](double gamma, int r, double sigma_ub, double alpha) {
             return PlanConstants{gamma, r, sigma_ub, alpha};
           }),
           py::arg("gamma") = 0.0, py::arg("r") = 0, py::arg("sigma_ub") = 0.0,
           py::arg("alpha") = 1.0)
      .def_readwrite("gamma", &PlanConstants::gamma)
      .def_readwrite("r", &PlanConstants::r)
      .def_readwrite("sigma_ub", &PlanConstants::sigma_ub)
      .def_readwrite("alpha", &PlanConstants::alpha);

  py::class_<SampleSizePlan>(m, "SampleSizePlan")
      .def_readonly("m_per_distribution", &SampleSizePlan::m_per_distribution)
      .def_readonly("m_per_query", &SampleSizePlan::m_per_query)
      .def_readonly("regime", &SampleSizePlan::regime)
      .def_readonly("decision_threshold", &SampleSizePlan::decision_threshold);

  m.def("plan_samples", &plan_samples, py::arg("regime"), py::arg("n"),
        py::arg("delta"), py::arg("constants"));

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("precision", &Metrics::precision)
      .def_readonly("recall", &Metrics::recall)
      .def_readonly("f1", &Metrics::f1);

  py::class_<RecoveryReport>(m, "RecoveryReport")
      .def_readonly("learned_edges", &RecoveryReport::learned_edges)
      .def_readonly("path_queries_issued", &RecoveryReport::path_queries_issued)
      .def_readonly("transitive_queries_issued",
                    &RecoveryReport::transitive_queries_issued)
      .def_readonly("total_samples", &RecoveryReport::total_samples)
      .def_readonly("vs_truth", &RecoveryReport::vs_truth)
      .def_readonly("cycle_salvaged", &RecoveryReport::cycle_salvaged);

  py::class_<LearnResult>(m, "LearnResult")
      .def_readonly("graph", &LearnResult::graph)
      .def_readonly("report", &LearnResult::report);

  m.def("learn_tr", &learn_tr, py::arg("n"), py::arg("query"));
  m.def("learn_transitive_edges", &learn_transitive_edges, py::arg("tr"),
        py::arg("tquery"));
  m.def("evaluate", &evaluate, py::arg("truth"), py::arg("learned"));
  m.def("report_to_json", &report_to_json);

  // -------------------------------------------------------------- model io
  py::class_<NamedNetwork>(m, "NamedNetwork")
      .def_readonly("name", &NamedNetwork::name)
      .def_readonly("node_names", &NamedNetwork::node_names)
      .def_readonly("value_names", &NamedNetwork::value_names)
      .def_property_readonly("dag", &NamedNetwork::dag)
      .def("is_discrete", &NamedNetwork::is_discrete)
      .def("discrete", &NamedNetwork::discrete)
      .def("asgn", &NamedNetwork::asgn);

  py::class_<BifParseResult>(m, "BifParseResult")
      .def_readonly("network", &BifParseResult::network)
      .def_readonly("warnings", &BifParseResult::warnings);

  m.def("parse_bif", &parse_bif);
  m.def("serialize_network", &serialize_network);
  m.def("parse_network", &parse_network);
  m.def("export_dot", &export_dot);
  m.def("write_edge_list", &write_edge_list);
  m.def("parse_edge_list", &parse_edge_list);
  m.def("dump_cpt_csv", &dump_cpt_csv);
  m.def("read_text_file", &read_text_file);
  m.def("write_text_file", &write_text_file);

  // ------------------------------------------------------------ experiments
  py::class_<CurveRow>(m, "CurveRow")
      .def_readonly("n", &CurveRow::n)
      .def_readonly("c", &CurveRow::c)
      .def_readonly("m", &CurveRow::m)
      .def_readonly("trials", &CurveRow::trials)
      .def_readonly("successes", &CurveRow::successes);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("regime", &ExperimentConfig::regime)
      .def_readwrite("imperfect", &ExperimentConfig::imperfect)
      .def_readwrite("n_values", &ExperimentConfig::n_values)
      .def_readwrite("c_grid", &ExperimentConfig::c_grid)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("edge_density", &ExperimentConfig::edge_density)
      .def_readwrite("r_max", &ExperimentConfig::r_max)
      .def_readwrite("gamma_floor", &ExperimentConfig::gamma_floor)
      .def_readwrite("phi", &ExperimentConfig::phi)
      .def_readwrite("nu2_equals_sigma2", &ExperimentConfig::nu2_equals_sigma2)
      .def_readwrite("sampler", &ExperimentConfig::sampler)
      .def_readwrite("seed", &ExperimentConfig::seed);

  py::class_<CensusRow>(m, "CensusRow")
      .def_readonly("name", &CensusRow::name)
      .def_readonly("vertices", &CensusRow::vertices)
      .def_readonly("edges", &CensusRow::edges)
      .def_readonly("transitive_edges", &CensusRow::transitive_edges)
      .def_readonly("ratio", &CensusRow::ratio);

  py::class_<CensusResult>(m, "CensusResult")
      .def_readonly("rows", &CensusResult::rows)
      .def_readonly("mean_ratio", &CensusResult::mean_ratio)
      .def_readonly("median_ratio", &CensusResult::median_ratio)
      .def_readonly("errors", &CensusResult::errors);

  py::class_<RecoveryOptions>(m, "RecoveryOptions")
      .def(py::init<>())
      .def_readwrite("delta", &RecoveryOptions::delta)
      .def_readwrite("oracle", &RecoveryOptions::oracle)
      .def_readwrite("batched", &RecoveryOptions::batched)
      .def_readwrite("transitive", &RecoveryOptions::transitive)
      .def_readwrite("imperfect", &RecoveryOptions::imperfect)
      .def_readwrite("phi", &RecoveryOptions::phi)
      .def_readwrite("alpha", &RecoveryOptions::alpha)
      .def_readwrite("m_override", &RecoveryOptions::m_override)
      .def_readwrite("gamma_override", &RecoveryOptions::gamma_override)
      .def_readwrite("sigma_ub_override", &RecoveryOptions::sigma_ub_override)
      .def_readwrite("sampler", &RecoveryOptions::sampler)
      .def_readwrite("seed", &RecoveryOptions::seed);

  py::class_<RecoveryRunResult>(m, "RecoveryRunResult")
      .def_readonly("learned", &RecoveryRunResult::learned)
      .def_readonly("report", &RecoveryRunResult::report)
      .def_readonly("gamma", &RecoveryRunResult::gamma)
      .def_readonly("gamma_transitive", &RecoveryRunResult::gamma_transitive)
      .def_readonly("sigma_ub", &RecoveryRunResult::sigma_ub)
      .def_readonly("z", &RecoveryRunResult::z)
      .def_readonly("m_path", &RecoveryRunResult::m_path)
      .def_readonly("m_transitive", &RecoveryRunResult::m_transitive);

  m.def("parse_experiment_config", &parse_experiment_config);
  m.def("experiment_config_to_json", &experiment_config_to_json);
  m.def("run_phase_transition", &run_phase_transition);
  m.def("render_curve_svg", &render_curve_svg);
  m.def("run_census", &run_census);
  m.def("census_to_csv", &census_to_csv);
  m.def("run_benchmark_recovery", &run_benchmark_recovery, py::arg("net"),
        py::arg("options"));
  m.def("recovery_to_json", &recovery_to_json);
  m.def("write_curve_csv", &write_curve_csv);

  m.def("derive_seed", [](std::uint64_t root, const std::vector<std::uint64_t>& path) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t label : path)
      s = splitmix64(s ^ splitmix64(label + 0x632be59bd9b4e019ULL));
    return s;
  });
}
