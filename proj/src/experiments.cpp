#include "causalpq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <nlohmann/json.hpp>

#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"
#include "causalpq/samplers.hpp"

namespace causalpq {

namespace {

// Seed-path phase labels for the experiment harness.
enum : std::uint64_t { kSeedGraph = 1, kSeedModel = 2, kSeedLearn = 3 };

AsgnNetwork with_intervention_variances(const AsgnNetwork& net,
                                        std::vector<double> nu2) {
  return AsgnNetwork(net.dag(), net.weights(), net.noise_variances(),
                     net.noise_kind(), std::move(nu2));
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("experiment config does not parse: ") + e.what());
  }
  ExperimentConfig config;
  try {
    config.regime = j.value("regime", config.regime);
    config.imperfect = j.value("imperfect", config.imperfect);
    if (j.contains("n_values")) config.n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("c_grid")) config.c_grid = j.at("c_grid").get<std::vector<double>>();
    config.trials = j.value("trials", config.trials);
    config.delta = j.value("delta", config.delta);
    config.edge_density = j.value("edge_density", config.edge_density);
    config.r_max = j.value("r_max", config.r_max);
    config.gamma_floor = j.value("gamma_floor", config.gamma_floor);
    config.phi = j.value("phi", config.phi);
    config.nu2_equals_sigma2 = j.value("nu2_equals_sigma2", config.nu2_equals_sigma2);
    config.sampler = j.value("sampler", config.sampler);
    config.seed = j.value("seed", config.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("experiment config is malformed: ") + e.what());
  }
  if (config.regime != "discrete" && config.regime != "continuous")
    throw ValidationError("regime must be 'discrete' or 'continuous'");
  if (config.sampler != "exact" && config.sampler != "per-draw")
    throw ValidationError("sampler must be 'exact' or 'per-draw'");
  if (config.trials < 1) throw ValidationError("trials must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw ValidationError("delta must lie in (0, 1)");
  for (double c : config.c_grid)
    if (!std::isfinite(c)) throw ValidationError("C grid values must be finite");
  return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["regime"] = config.regime;
  j["imperfect"] = config.imperfect;
  j["n_values"] = config.n_values;
  j["c_grid"] = config.c_grid;
  j["trials"] = config.trials;
  j["delta"] = config.delta;
  j["edge_density"] = config.edge_density;
  j["r_max"] = config.r_max;
  j["gamma_floor"] = config.gamma_floor;
  j["phi"] = config.phi;
  j["nu2_equals_sigma2"] = config.nu2_equals_sigma2;
  j["sampler"] = config.sampler;
  j["seed"] = config.seed;
  return j.dump(2) + "\n";
}

std::vector<CurveRow> run_phase_transition(const ExperimentConfig& config) {
  std::vector<CurveRow> rows;
  const bool discrete = config.regime == "discrete";
  const bool exact = config.sampler == "exact";

  for (int n : config.n_values) {
    for (std::size_t ci = 0; ci < config.c_grid.size(); ++ci) {
      const double c = config.c_grid[ci];
      const double scale =
          discrete ? std::log(static_cast<double>(n) * config.r_max)
                   : std::log(static_cast<double>(n));
      const std::int64_t m =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                        std::ceil(std::exp(c) * scale)));
      int successes = 0;
      for (int trial = 0; trial < config.trials; ++trial) {
        // Fresh models for every (n, C) cell, fully seeded.
        const std::uint64_t u_n = static_cast<std::uint64_t>(n);
        const std::uint64_t u_t = static_cast<std::uint64_t>(trial);
        const std::uint64_t learn_seed =
            derive_seed(config.seed, {kSeedLearn, u_n, u_t, ci});

        const bool success = [&]() -> bool {
          if (discrete) {
            // Redraw the structure when gamma certification would overflow
            // the enumeration cap (deep ancestral sets); the attempt index
            // keeps the redraws seeded.
            std::unique_ptr<DiscreteCbn> cbn;
            Dag truth(1);
            for (std::uint64_t attempt = 0;; ++attempt) {
              if (attempt >= 100)
                throw GenerationError(
                    "no certifiable model structure at n=" + std::to_string(n) +
                    ", C=" + std::to_string(c) + ", trial " + std::to_string(trial));
              truth = random_tr_dag(
                  n, config.edge_density,
                  derive_seed(config.seed, {kSeedGraph, u_n, u_t, ci, attempt}));
              try {
                cbn = std::make_unique<DiscreteCbn>(random_discrete_cbn(
                    truth, config.r_max, config.gamma_floor,
                    derive_seed(config.seed, {kSeedModel, u_n, u_t, ci, attempt})));
                break;
              } catch (const CapacityError&) {
              }
            }
            std::unique_ptr<DiscreteSampler> sampler;
            if (exact) {
              sampler = std::make_unique<CbnMultinomialSampler>(*cbn);
            } else {
              sampler = std::make_unique<CbnSampler>(*cbn);
            }
            const double threshold = config.gamma_floor / 2.0;
            const LearnResult learned = learn_tr(n, [&](int i, int j) {
              const std::uint64_t qseed =
                  derive_seed(learn_seed, {static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(j)});
              if (config.imperfect)
                return path_query_discrete_imperfect(*sampler, i, j, m, threshold,
                                                     config.phi, qseed);
              return path_query_discrete(*sampler, i, j, m, threshold, qseed);
            });
            return learned.graph == truth;
          }

          Dag truth = random_tr_dag(
              n, config.edge_density,
              derive_seed(config.seed, {kSeedGraph, u_n, u_t, ci}));
          AsgnNetwork net = random_asgn(
              truth, derive_seed(config.seed, {kSeedModel, u_n, u_t, ci}));
          if (config.imperfect && config.nu2_equals_sigma2)
            net = with_intervention_variances(net, net.noise_variances());
          const AsgnConstants constants = compute_wmin_wmax(net);
          const double z = constants.z.value_or(0.0);
          std::unique_ptr<ContinuousSampler> sampler;
          if (exact) {
            sampler = std::make_unique<AsgnAnalyticSampler>(net, config.imperfect);
          } else {
            sampler = std::make_unique<AsgnSampler>(net, config.imperfect);
          }
          const LearnResult learned = learn_tr(n, [&](int i, int j) {
            return path_query_continuous(
                *sampler, i, j, m, z,
                derive_seed(learn_seed, {static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(j)}));
          });
          return learned.graph == truth;
        }();
        if (success) ++successes;
      }
      rows.push_back(CurveRow{n, c, m, config.trials, successes});
    }
  }
  return rows;
}

std::string render_curve_svg(const std::vector<CurveRow>& rows) {
  // One polyline per n over the C grid; fixed-size chart, no dependencies.
  const int width = 640, height = 420;
  const int left = 60, right = 20, top = 20, bottom = 50;
  double cmin = 0.0, cmax = 1.0;
  if (!rows.empty()) {
    cmin = cmax = rows.front().c;
    for (const CurveRow& r : rows) {
      cmin = std::min(cmin, r.c);
      cmax = std::max(cmax, r.c);
    }
    if (cmax == cmin) cmax = cmin + 1.0;
  }
  auto px = [&](double c) {
    return left + (c - cmin) / (cmax - cmin) * (width - left - right);
  };
  auto py = [&](double f) { return top + (1.0 - f) * (height - top - bottom); };

  std::vector<int> ns;
  for (const CurveRow& r : rows)
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
      "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  char buf[256];
  // Axes and gridlines at frequency 0, 0.5, 1.
  for (double f : {0.0, 0.5, 1.0}) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                  "stroke=\"#cccccc\"/>\n",
                  left, py(f), width - right, py(f));
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%.1f\" font-size=\"12\" "
                  "text-anchor=\"end\">%.1f</text>\n",
                  left - 6, py(f) + 4, f);
    svg += buf;
  }
  for (std::size_t k = 0; k < ns.size(); ++k) {
    std::string points;
    for (const CurveRow& r : rows) {
      if (r.n != ns[k]) continue;
      const double f = static_cast<double>(r.successes) / r.trials;
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(r.c), py(f));
      points += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"2\" "
                  "points=\"%s\"/>\n",
                  palette[k % 5], points.c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-size=\"12\" fill=\"%s\">n=%d</text>\n",
                  width - right - 60, top + 16 * static_cast<int>(k + 1),
                  palette[k % 5], ns[k]);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"12\" text-anchor=\"middle\">"
                "C (samples per query = ceil(e^C log nr))</text>\n",
                (left + width - right) / 2, height - 14);
  svg += buf;
  svg +=
      "<text x=\"16\" y=\"210\" font-size=\"12\" transform=\"rotate(-90 16 210)\" "
      "text-anchor=\"middle\">exact recovery frequency</text>\n";
  svg += "</svg>\n";
  return svg;
}

CensusResult run_census(const std::vector<std::string>& paths) {
  CensusResult result;
  std::vector<double> ratios;
  for (const std::string& path : paths) {
    try {
      const std::string text = read_text_file(path);
      NamedNetwork net = [&] {
        if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
          return parse_network(text);
        return parse_bif(text).network;
      }();
      CensusRow row;
      row.name = net.name.empty() ? path : net.name;
      row.vertices = net.n();
      row.edges = static_cast<int>(net.dag().num_edges());
      row.transitive_edges = count_transitive_edges(net.dag());
      row.ratio = row.edges == 0
                      ? 0.0
                      : static_cast<double>(row.transitive_edges) / row.edges;
      ratios.push_back(row.ratio);
      result.rows.push_back(std::move(row));
    } catch (const Error& e) {
      result.errors.push_back(path + ": " + e.what());
    }
  }
  if (!ratios.empty()) {
    double sum = 0.0;
    for (double r : ratios) sum += r;
    result.mean_ratio = sum / static_cast<double>(ratios.size());
    std::sort(ratios.begin(), ratios.end());
    const std::size_t mid = ratios.size() / 2;
    result.median_ratio = ratios.size() % 2 ? ratios[mid]
                                            : 0.5 * (ratios[mid - 1] + ratios[mid]);
  }
  return result;
}

std::string census_to_csv(const CensusResult& result) {
  std::string out = "network,vertices,edges,transitive_edges,ratio_percent\n";
  char buf[256];
  for (const CensusRow& row : result.rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.2f\n", row.name.c_str(),
                  row.vertices, row.edges, row.transitive_edges, 100.0 * row.ratio);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "mean,,,,%.2f\nmedian,,,,%.2f\n",
                100.0 * result.mean_ratio, 100.0 * result.median_ratio);
  out += buf;
  return out;
}

RecoveryRunResult run_benchmark_recovery(const NamedNetwork& net,
                                         const RecoveryOptions& options) {
  const Dag& truth = net.dag();
  const int n = truth.n();
  RecoveryRunResult run{Dag(n), {}, 0, 0, 0, 0, 0, 0};
  const double phase_delta = options.transitive ? options.delta / 2.0 : options.delta;

  if (options.oracle) {
    const ReachabilityMatrix reach = transitive_closure(truth);
    LearnResult tr = learn_tr(
        n, [&](int i, int j) { return oracle_path_query(reach, i, j); });
    run.report = tr.report;
    run.learned = tr.graph;
    if (options.transitive) {
      LearnResult full = learn_transitive_edges(
          tr.graph, [&](int i, int j, const std::vector<int>&) {
            return oracle_transitive_query(truth, reach, i, j);
          });
      run.learned = full.graph;
      run.report.transitive_queries_issued = full.report.transitive_queries_issued;
      run.report.total_samples += full.report.total_samples;
      run.report.learned_edges = full.report.learned_edges;
    }
    run.report.vs_truth = evaluate(truth, run.learned);
    return run;
  }

  if (net.is_discrete()) {
    const DiscreteCbn& cbn = net.discrete();
    const int r = cbn.max_domain_size();
    if (options.gamma_override) {
      run.gamma = *options.gamma_override;
    } else {
      const GammaResult gr = compute_gamma(cbn);
      if (!gr.faithful)
        throw FaithfulnessError("network admits no single-parent margin");
      run.gamma = gr.gamma;
    }
    const Regime path_regime =
        options.imperfect ? Regime::kDiscreteImperfect : Regime::kDiscrete;
    PlanConstants constants{run.gamma, r, 0.0, options.alpha};
    const SampleSizePlan plan = plan_samples(path_regime, n, phase_delta, constants);
    run.m_path = options.m_override.value_or(plan.m_per_distribution);

    std::unique_ptr<DiscreteSampler> sampler;
    if (options.batched) {
      sampler = std::make_unique<BatchedCbnSampler>(
          cbn, derive_seed(options.seed, {kSeedModel}));
    } else if (options.sampler == "exact") {
      sampler = std::make_unique<CbnMultinomialSampler>(cbn);
    } else {
      sampler = std::make_unique<CbnSampler>(cbn);
    }

    LearnResult tr = learn_tr(n, [&](int i, int j) {
      const std::uint64_t qseed = derive_seed(
          options.seed, {1, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      if (options.imperfect)
        return path_query_discrete_imperfect(*sampler, i, j, run.m_path,
                                             plan.decision_threshold, options.phi,
                                             qseed);
      return path_query_discrete(*sampler, i, j, run.m_path,
                                 plan.decision_threshold, qseed);
    });
    run.report = tr.report;
    run.learned = tr.graph;

    if (options.transitive) {
      if (options.gamma_override) {
        run.gamma_transitive = *options.gamma_override;
      } else {
        const GammaResult gt = compute_gamma_transitive(cbn);
        if (!gt.faithful)
          throw FaithfulnessError("network admits no parent-subset margin");
        run.gamma_transitive = gt.gamma;
      }
      const SampleSizePlan tplan =
          plan_samples(Regime::kTransitiveDiscrete, n, phase_delta,
                       PlanConstants{run.gamma_transitive, r, 0.0, 1.0});
      run.m_transitive = options.m_override.value_or(tplan.m_per_distribution);
      LearnResult full = learn_transitive_edges(
          tr.graph, [&](int i, int j, const std::vector<int>& blocking) {
            return transitive_query_discrete(
                *sampler, i, j, blocking, run.m_transitive, tplan.decision_threshold,
                derive_seed(options.seed, {2, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(j)}));
          });
      run.learned = full.graph;
      run.report.transitive_queries_issued = full.report.transitive_queries_issued;
      run.report.total_samples += full.report.total_samples;
      run.report.learned_edges = full.report.learned_edges;
    }
  } else {
    const AsgnNetwork& asgn = net.asgn();
    const AsgnConstants constants = compute_wmin_wmax(asgn);
    if (!constants.z && !options.sigma_ub_override)
      throw FaithfulnessError("w_min = 0: path effects cancel exactly");
    run.sigma_ub = options.sigma_ub_override.value_or(constants.sigma_ub);
    run.z = constants.z.value_or(0.0);
    const SampleSizePlan plan =
        plan_samples(Regime::kContinuous, n, phase_delta,
                     PlanConstants{0.0, 0, run.sigma_ub, 1.0});
    run.m_path = options.m_override.value_or(plan.m_per_distribution);

    std::unique_ptr<ContinuousSampler> sampler;
    if (options.sampler == "exact") {
      sampler = std::make_unique<AsgnAnalyticSampler>(asgn, options.imperfect);
    } else {
      sampler = std::make_unique<AsgnSampler>(asgn, options.imperfect);
    }

    LearnResult tr = learn_tr(n, [&](int i, int j) {
      return path_query_continuous(
          *sampler, i, j, run.m_path, run.z,
          derive_seed(options.seed, {1, static_cast<std::uint64_t>(i),
                                     static_cast<std::uint64_t>(j)}));
    });
    run.report = tr.report;
    run.learned = tr.graph;

    if (options.transitive) {
      const AsgnConstants tconstants = compute_wmin_wmax_transitive(asgn);
      const double sigma_ub_t = options.sigma_ub_override.value_or(tconstants.sigma_ub);
      const SampleSizePlan tplan =
          plan_samples(Regime::kTransitiveContinuous, n, phase_delta,
                       PlanConstants{0.0, 0, sigma_ub_t, 1.0});
      run.m_transitive = options.m_override.value_or(tplan.m_per_distribution);
      const double z2 = tconstants.z.value_or(run.z);
      LearnResult full = learn_transitive_edges(
          tr.graph, [&](int i, int j, const std::vector<int>& blocking) {
            return transitive_query_continuous(
                *sampler, i, j, blocking, run.m_transitive, 0.0, z2,
                derive_seed(options.seed, {2, static_cast<std::uint64_t>(i),
                                           static_cast<std::uint64_t>(j)}));
          });
      run.learned = full.graph;
      run.report.transitive_queries_issued = full.report.transitive_queries_issued;
      run.report.total_samples += full.report.total_samples;
      run.report.learned_edges = full.report.learned_edges;
    }
  }

  run.report.vs_truth = evaluate(truth, run.learned);
  return run;
}

std::string recovery_to_json(const NamedNetwork& net, const RecoveryRunResult& run) {
  nlohmann::json j = nlohmann::json::parse(report_to_json(run.report));
  j["network"] = net.name;
  j["n"] = net.n();
  j["true_edges"] = net.dag().num_edges();
  if (run.gamma > 0) j["gamma"] = run.gamma;
  if (run.gamma_transitive > 0) j["gamma_transitive"] = run.gamma_transitive;
  if (run.sigma_ub > 0) j["sigma_ub"] = run.sigma_ub;
  if (run.z > 0) j["z"] = run.z;
  if (run.m_path > 0) j["m_path"] = run.m_path;
  if (run.m_transitive > 0) j["m_transitive"] = run.m_transitive;
  return j.dump(2) + "\n";
}

}  // namespace causalpq
