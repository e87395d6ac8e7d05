#include <doctest.h>

#include <cmath>

#include "causalpq/asgn.hpp"
#include "causalpq/errors.hpp"
#include "causalpq/rng.hpp"
#include "test_util.hpp"

using namespace causalpq;

namespace {

// Figure-style cancellation triangle: 0 -> 1 (+1), 1 -> 2 (+1), 0 -> 2 (-1).
AsgnNetwork cancellation_triangle() {
  Dag g(3, {{0, 1}, {0, 2}, {1, 2}});
  std::vector<double> w(9, 0.0);
  w[1 * 3 + 0] = 1.0;
  w[2 * 3 + 1] = 1.0;
  w[2 * 3 + 0] = -1.0;
  return AsgnNetwork(g, w, {1.0, 1.0, 1.0});
}

AsgnNetwork chain(double weight, double var0 = 1.0, double var1 = 1.0) {
  Dag g(2, {{0, 1}});
  std::vector<double> w(4, 0.0);
  w[1 * 2 + 0] = weight;
  return AsgnNetwork(g, w, {var0, var1});
}

double mean_of(const std::vector<std::vector<double>>& draws, int node) {
  double sum = 0.0;
  for (const auto& row : draws) sum += row[node];
  return sum / static_cast<double>(draws.size());
}

double variance_of(const std::vector<std::vector<double>>& draws, int node) {
  const double mu = mean_of(draws, node);
  double sum = 0.0;
  for (const auto& row : draws) sum += (row[node] - mu) * (row[node] - mu);
  return sum / static_cast<double>(draws.size() - 1);
}

}  // namespace

TEST_CASE("weight support must match the edge set") {
  Dag g(2, {{0, 1}});
  std::vector<double> zero(4, 0.0);
  CHECK_THROWS_AS(AsgnNetwork(g, zero, {1.0, 1.0}), ValidationError);
  std::vector<double> extra(4, 0.0);
  extra[0 * 2 + 1] = 0.5;  // weight on the reversed non-edge
  extra[1 * 2 + 0] = 0.5;
  CHECK_THROWS_AS(AsgnNetwork(g, extra, {1.0, 1.0}), ValidationError);
}

TEST_CASE("mutilating rows") {
  const AsgnNetwork net = cancellation_triangle();
  CHECK(mutilate_weights(net, {}) == net.weights());
  CHECK(mutilate_weights(net, {0}) == net.weights());  // root row already zero
  const auto cut = mutilate_weights(net, {1});
  CHECK(cut[1 * 3 + 0] == 0.0);
  CHECK(cut[2 * 3 + 0] == -1.0);
  CHECK(cut[2 * 3 + 1] == 1.0);
}

TEST_CASE("edge-free networks sample pure noise") {
  Dag g(3);
  AsgnNetwork net(g, std::vector<double>(9, 0.0), {1.0, 2.0, 0.5});
  const auto draws = sample(net, {}, 200'000, 3);
  for (int v = 0; v < 3; ++v) CHECK(std::abs(mean_of(draws, v)) < 0.02);
}

TEST_CASE("unit chain propagates the intervention value") {
  const AsgnNetwork net = chain(1.0);
  const auto draws = sample(net, ContinuousInterventionSpec::single(0, 1.0),
                            1'000'000, 5);
  CHECK(std::abs(mean_of(draws, 1) - 1.0) < 0.005);
}

TEST_CASE("cancellation triangle leaves the sink untouched on average") {
  const AsgnNetwork net = cancellation_triangle();
  const auto draws = sample(net, ContinuousInterventionSpec::single(0, 4.0),
                            1'000'000, 7);
  CHECK(std::abs(mean_of(draws, 2)) < 0.01);
}

TEST_CASE("uniform noise matches the requested variance") {
  Dag g(1);
  AsgnNetwork net(g, {0.0}, {2.5}, NoiseKind::kUniform);
  const auto draws = sample(net, {}, 400'000, 9);
  CHECK(std::abs(mean_of(draws, 0)) < 0.02);
  CHECK(variance_of(draws, 0) == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("analytic moments") {
  SUBCASE("no intervention means zero means") {
    const AsgnNetwork net = cancellation_triangle();
    for (int v = 0; v < 3; ++v) CHECK(analytic_moments(net, v, {}).mean == 0.0);
  }
  SUBCASE("chain with weight w") {
    const AsgnNetwork net = chain(0.7, 1.0, 1.3);
    const Moments m =
        analytic_moments(net, 1, ContinuousInterventionSpec::single(0, 2.0));
    CHECK(m.mean == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(1.3).epsilon(1e-12));
  }
  SUBCASE("cancellation is exact for any intervention value") {
    const AsgnNetwork net = cancellation_triangle();
    for (double z : {-5.0, 1.0, 7.0}) {
      const Moments m =
          analytic_moments(net, 2, ContinuousInterventionSpec::single(0, z));
      CHECK(m.mean == 0.0);
    }
  }
  SUBCASE("imperfect interventions add the injected variance") {
    const AsgnNetwork net = chain(1.0);
    ContinuousInterventionSpec spec;
    spec.assignments.push_back({0, 2.0, 0.25});
    const Moments m = analytic_moments(net, 1, spec);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.variance == doctest::Approx(1.25).epsilon(1e-12));
  }
}

TEST_CASE("empirical moments track the analytic ones") {
  const Dag g = random_tr_dag(10, 0.3, 41);
  const AsgnNetwork net = random_asgn(g, 43);
  const std::int64_t m = 100'000;
  for (int i = 0; i < 10; ++i) {
    const auto spec = ContinuousInterventionSpec::single(i, 1.5);
    const auto draws = sample(net, spec, m, derive_seed(47, {static_cast<std::uint64_t>(i)}));
    for (int j = 0; j < 10; ++j) {
      if (j == i) continue;
      const Moments expect = analytic_moments(net, j, spec);
      const double tolerance = 5.0 * std::sqrt(expect.variance / m);
      CHECK(std::abs(mean_of(draws, j) - expect.mean) < tolerance);
      CHECK(variance_of(draws, j) ==
            doctest::Approx(expect.variance).epsilon(0.1));
    }
  }
}

TEST_CASE("corollary constants on the chain") {
  const AsgnConstants c = compute_wmin_wmax(chain(0.5));
  CHECK(c.faithful);
  CHECK(c.w_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.z.value() == doctest::Approx(2.0).epsilon(1e-12));
  // B = [[1,0],[0.5,1]]: worst squared row norm 1.25; unit noises.
  CHECK(c.w_max == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(c.sigma_ub == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("single node network has unit weight effect") {
  Dag g(1);
  AsgnNetwork net(g, {0.0}, {3.0});
  const AsgnConstants c = compute_wmin_wmax(net);
  CHECK(c.w_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.sigma_ub == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("path cancellation raises the faithfulness flag") {
  const AsgnConstants c = compute_wmin_wmax(cancellation_triangle());
  CHECK_FALSE(c.faithful);
  CHECK_FALSE(c.z.has_value());
}

TEST_CASE("transitive constants") {
  SUBCASE("triangle reads the raw weight matrix") {
    const AsgnConstants c = compute_wmin_wmax_transitive(cancellation_triangle());
    CHECK(c.faithful);
    CHECK(c.w_min == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("chains coincide with the single-intervention constants") {
    const AsgnNetwork net = chain(0.5, 1.0, 2.0);
    const AsgnConstants a = compute_wmin_wmax(net);
    const AsgnConstants b = compute_wmin_wmax_transitive(net);
    CHECK(a.w_min == doctest::Approx(b.w_min).epsilon(1e-12));
    CHECK(a.w_max == doctest::Approx(b.w_max).epsilon(1e-12));
    CHECK(a.sigma_ub == doctest::Approx(b.sigma_ub).epsilon(1e-12));
  }
}

TEST_CASE("corollary separation holds on generated networks") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dag g = random_tr_dag(8, 0.3, derive_seed(51, {seed}));
    const AsgnNetwork net = random_asgn(g, derive_seed(53, {seed}));
    const AsgnConstants c = compute_wmin_wmax(net);
    REQUIRE(c.faithful);
    const ReachabilityMatrix reach = transitive_closure(g);
    for (int i = 0; i < 8; ++i) {
      const auto spec = ContinuousInterventionSpec::single(i, *c.z);
      for (int j = 0; j < 8; ++j) {
        if (i == j) continue;
        const Moments m = analytic_moments(net, j, spec);
        if (g.has_edge(i, j)) {
          CHECK(std::abs(m.mean) >= 1.0 - 1e-9);
        } else if (!reach.at(i, j)) {
          CHECK(std::abs(m.mean) < 1e-9);
        }
        CHECK(m.variance <= c.sigma_ub + 1e-9);
        CHECK(analytic_moments(net, j, {}).variance <= c.sigma_ub + 1e-9);
      }
    }
  }
}

TEST_CASE("random asgn generator") {
  const Dag g = random_tr_dag(10, 0.3, 61);
  const AsgnNetwork a = random_asgn(g, 63);
  const AsgnNetwork b = random_asgn(g, 63);
  CHECK(a == b);
  for (const auto& [i, j] : g.edges()) {
    const double w = std::abs(a.weight(j, i));
    CHECK(w >= 0.01);
    CHECK(w <= 1.25);
  }
  for (double v : a.noise_variances()) {
    CHECK(v >= 1.0);
    CHECK(v <= 5.0);
  }
  // Row-norm rejection implies every observational variance is at most
  // sigma_max^2 * 20 = 100.
  for (int v = 0; v < 10; ++v)
    CHECK(analytic_moments(a, v, {}).variance <= 100.0 + 1e-9);
}
