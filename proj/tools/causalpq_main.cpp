// causalpq command line tool: random network generation, structure learning
// from simulated interventions, single queries, benchmark census, and the
// phase-transition experiment harness.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalpq/errors.hpp"
#include "causalpq/experiments.hpp"
#include "causalpq/learner.hpp"
#include "causalpq/model_io.hpp"
#include "causalpq/queries.hpp"
#include "causalpq/rng.hpp"
#include "causalpq/samplers.hpp"

namespace {

using namespace causalpq;

constexpr int kExitValidation = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitIo = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CAUSALPQ_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 1;
}

NamedNetwork load_network(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".bif") {
    BifParseResult parsed = parse_bif(text);
    for (const std::string& w : parsed.warnings) std::cerr << "note: " << w << "\n";
    return std::move(parsed.network);
  }
  return parse_network(text);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_text_file(path, content);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"structure learning for causal Bayesian networks from interventional path queries"};
  app.require_subcommand(1);

  // ------------------------------------------------------------------ gen
  auto* gen = app.add_subcommand("gen", "generate a random network as JSON");
  std::string gen_kind = "discrete";
  int gen_n = 10;
  double gen_density = 0.15;
  int gen_rmax = 5;
  double gen_gamma_floor = 0.01;
  std::uint64_t gen_seed = default_seed();
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "discrete | asgn")
      ->check(CLI::IsMember({"discrete", "asgn"}));
  gen->add_option("-n,--nodes", gen_n, "vertex count")->check(CLI::PositiveNumber);
  gen->add_option("--density", gen_density, "edge probability before reduction");
  gen->add_option("--r-max", gen_rmax, "max domain size (discrete)");
  gen->add_option("--gamma-floor", gen_gamma_floor, "generator rejection floor (discrete)");
  gen->add_option("--seed", gen_seed, "root seed");
  gen->add_option("-o,--output", gen_out, "output path (default stdout)");

  // ---------------------------------------------------------------- learn
  auto* learn = app.add_subcommand("learn", "learn a network's structure from simulated interventions");
  std::string learn_input;
  std::string learn_regime = "discrete";
  double learn_delta = 0.05;
  std::optional<double> learn_gamma;
  std::optional<double> learn_sigma_ub;
  double learn_alpha = 0.9;
  double learn_phi = 0.9;
  bool learn_imperfect = false;
  std::optional<std::int64_t> learn_m;
  std::uint64_t learn_seed = default_seed();
  bool learn_batched = false;
  bool learn_oracle = false;
  bool learn_no_transitive = false;
  std::string learn_sampler = "per-draw";
  std::string learn_report_out;
  std::string learn_dot_out;
  learn->add_option("input", learn_input, "network file (.bif or .json)")->required();
  learn->add_option("--regime", learn_regime, "discrete | continuous")
      ->check(CLI::IsMember({"discrete", "continuous"}));
  learn->add_option("--delta", learn_delta, "total error budget");
  learn->add_option("--gamma", learn_gamma, "override the measured gamma");
  learn->add_option("--sigma-ub", learn_sigma_ub, "override the measured variance bound");
  learn->add_option("--alpha", learn_alpha, "imperfect-intervention planner constant");
  learn->add_option("--phi", learn_phi, "imperfect-intervention success probability");
  learn->add_flag("--imperfect", learn_imperfect, "simulate imperfect interventions");
  learn->add_option("--m-override", learn_m, "fixed per-distribution sample count");
  learn->add_option("--seed", learn_seed, "root seed");
  learn->add_flag("--batched", learn_batched, "share draws across targets per intervention");
  learn->add_flag("--oracle", learn_oracle, "noiseless queries against the true graph");
  learn->add_flag("--no-transitive", learn_no_transitive, "stop after the transitive reduction");
  learn->add_option("--sampler", learn_sampler, "per-draw | exact")
      ->check(CLI::IsMember({"per-draw", "exact"}));
  learn->add_option("-o,--report", learn_report_out, "report JSON path (default stdout)");
  learn->add_option("--dot", learn_dot_out, "write the learned graph as DOT");

  // ---------------------------------------------------------------- query
  auto* query = app.add_subcommand("query", "answer one noisy path or transitive query");
  std::string query_input;
  int query_i = 0, query_j = 0;
  std::vector<int> query_blocking;
  std::int64_t query_m = 1000;
  std::optional<double> query_threshold;
  std::optional<double> query_z;
  std::uint64_t query_seed = default_seed();
  query->add_option("input", query_input, "network file (.bif or .json)")->required();
  query->add_option("-i,--origin", query_i)->required();
  query->add_option("-j,--target", query_j)->required();
  query->add_option("-S,--blocking", query_blocking, "blocking set (transitive query)");
  query->add_option("-m,--samples", query_m, "samples per distribution");
  query->add_option("--threshold", query_threshold, "discrete decision threshold");
  query->add_option("-z", query_z, "continuous intervention value");
  query->add_option("--seed", query_seed);

  // --------------------------------------------------------------- census
  auto* census = app.add_subcommand("census", "per-network transitive edge census");
  std::vector<std::string> census_files;
  std::string census_out;
  census->add_option("files", census_files, "network files")->required();
  census->add_option("-o,--output", census_out, "CSV output path (default stdout)");

  // ---------------------------------------------------------------- phase
  auto* phase = app.add_subcommand("phase", "phase-transition experiment grid");
  std::string phase_config;
  std::string phase_out;
  std::string phase_svg;
  phase->add_option("config", phase_config, "experiment config JSON")->required();
  phase->add_option("-o,--output", phase_out, "CSV output path (default stdout)");
  phase->add_option("--svg", phase_svg, "also render an SVG line chart");

  // -------------------------------------------------------------- convert
  auto* convert = app.add_subcommand("convert", "convert between network and graph formats");
  std::string convert_input;
  std::string convert_to = "json";
  std::string convert_out;
  convert->add_option("input", convert_input, "network file (.bif or .json)")->required();
  convert->add_option("--to", convert_to, "json | dot | edges | cpt-csv")
      ->check(CLI::IsMember({"json", "dot", "edges", "cpt-csv"}));
  convert->add_option("-o,--output", convert_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const Dag g = random_tr_dag(gen_n, gen_density, derive_seed(gen_seed, {1}));
    std::vector<std::string> names;
    for (int v = 0; v < gen_n; ++v) names.push_back("X" + std::to_string(v));
    NamedNetwork net = [&]() -> NamedNetwork {
      if (gen_kind == "discrete")
        return {"random_discrete",
                random_discrete_cbn(g, gen_rmax, gen_gamma_floor,
                                    derive_seed(gen_seed, {2})),
                names,
                {}};
      return {"random_asgn", random_asgn(g, derive_seed(gen_seed, {2})), names, {}};
    }();
    emit(gen_out, serialize_network(net));
    return 0;
  }

  if (learn->parsed()) {
    const NamedNetwork net = load_network(learn_input);
    if (learn_regime == "continuous" && net.is_discrete())
      throw ValidationError("continuous regime needs an ASGN network");
    if (learn_regime == "discrete" && !net.is_discrete())
      throw ValidationError("discrete regime needs a discrete network");
    RecoveryOptions options;
    options.delta = learn_delta;
    options.oracle = learn_oracle;
    options.batched = learn_batched;
    options.transitive = !learn_no_transitive;
    options.imperfect = learn_imperfect;
    options.phi = learn_phi;
    options.alpha = learn_alpha;
    options.m_override = learn_m;
    options.gamma_override = learn_gamma;
    options.sigma_ub_override = learn_sigma_ub;
    options.sampler = learn_sampler;
    options.seed = learn_seed;
    const RecoveryRunResult run = run_benchmark_recovery(net, options);
    emit(learn_report_out, recovery_to_json(net, run));
    if (!learn_dot_out.empty())
      write_text_file(learn_dot_out, export_dot(run.learned, net.node_names));
    return 0;
  }

  if (query->parsed()) {
    const NamedNetwork net = load_network(query_input);
    QueryOutcome out;
    if (net.is_discrete()) {
      CbnSampler sampler(net.discrete());
      const double threshold = query_threshold.value_or(0.05);
      out = transitive_query_discrete(sampler, query_i, query_j, query_blocking,
                                      query_m, threshold, query_seed);
    } else {
      AsgnSampler sampler(net.asgn());
      const double z =
          query_z ? *query_z
                  : compute_wmin_wmax(net.asgn()).z.value_or(1.0);
      out = transitive_query_continuous(sampler, query_i, query_j, query_blocking,
                                        query_m, 0.0, z, query_seed);
    }
    std::cout << "answer " << out.answer << "\nsamples " << out.samples_used
              << "\nstatistic " << out.max_gap << "\n";
    return 0;
  }

  if (census->parsed()) {
    const CensusResult result = run_census(census_files);
    emit(census_out, census_to_csv(result));
    for (const std::string& e : result.errors) std::cerr << "error: " << e << "\n";
    return result.errors.empty() ? 0 : kExitValidation;
  }

  if (phase->parsed()) {
    const ExperimentConfig config = parse_experiment_config(read_text_file(phase_config));
    const std::vector<CurveRow> rows = run_phase_transition(config);
    emit(phase_out, write_curve_csv(rows));
    if (!phase_svg.empty()) write_text_file(phase_svg, render_curve_svg(rows));
    return 0;
  }

  if (convert->parsed()) {
    // Bare edge lists carry a graph only; they convert to graph formats.
    const bool edge_list_input =
        convert_input.size() >= 6 &&
        convert_input.substr(convert_input.size() - 6) == ".edges";
    if (edge_list_input) {
      const Dag g = parse_edge_list(read_text_file(convert_input));
      if (convert_to == "dot") {
        emit(convert_out, export_dot(g, {}));
      } else if (convert_to == "edges") {
        emit(convert_out, write_edge_list(g));
      } else {
        throw ValidationError("edge-list input converts to dot or edges only");
      }
      return 0;
    }
    const NamedNetwork net = load_network(convert_input);
    if (convert_to == "json") {
      emit(convert_out, serialize_network(net));
    } else if (convert_to == "dot") {
      emit(convert_out, export_dot(net.dag(), net.node_names));
    } else if (convert_to == "edges") {
      emit(convert_out, write_edge_list(net.dag()));
    } else {
      if (!net.is_discrete())
        throw ValidationError("cpt-csv needs a discrete network");
      emit(convert_out, dump_cpt_csv(net.discrete()));
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
