#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "coopsense/optimizer.hpp"

using namespace coopsense;

namespace {

int evaluation_bound(int N) { return 2 * static_cast<int>(std::ceil(std::log2(static_cast<double>(N)))) + 4; }

// Convex integer sequence: cumulative sums of sorted integer slopes, so
// plateaus and exact ties occur often.
std::vector<double> random_convex_sequence(std::mt19937_64& rng, int N) {
  std::uniform_int_distribution<int> slope(-6, 6);
  std::vector<int> slopes(std::max(N - 1, 0));
  for (auto& s : slopes) s = slope(rng);
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> values{static_cast<double>(std::uniform_int_distribution<int>(0, 50)(rng))};
  for (int s : slopes) values.push_back(values.back() + s);
  return values;
}

struct RandomScenario {
  SensingConfig cfg;
};

SensingConfig random_config(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> un(3, 64);
  std::uniform_int_distribution<int> um(2, 24);
  std::uniform_real_distribution<double> udb(-10.0, 15.0);
  const double alphas[] = {0.001, 0.01, 0.1};
  return SensingConfig{un(rng), um(rng), db_to_linear(udb(rng)), alphas[std::uniform_int_distribution<int>(0, 2)(rng)]};
}

}  // namespace

TEST_CASE("objective is -ln Q_d with the alpha-matched threshold") {
  const auto cfg = SensingConfig::from_db(8, 12, 0.0, 0.01);
  for (int n = 1; n <= 8; ++n) {
    const double lam = lambda_for_alpha(0.01, n, 8, 12);
    const double qd = global_qd(n, 8, avg_pd(12, lam, cfg.avg_snr));
    CHECK(std::abs(objective(n, cfg) + std::log(qd)) <= 1e-12);
    CHECK(objective(n, cfg) >= 0.0);
  }
  CHECK_THROWS_AS(objective(0, cfg), std::domain_error);
  CHECK_THROWS_AS(objective(9, cfg), std::domain_error);
}

TEST_CASE("objective is zero under perfect detection") {
  const SensingConfig cfg{4, 24, 1e9, 0.1};
  CHECK(objective(1, cfg) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("four users at 5 dB: objective increases and OR is optimal") {
  const auto cfg = SensingConfig::from_db(4, 12, 5.0, 0.01);
  Objective f(cfg);
  CHECK(f(1) < f(2));
  CHECK(f(2) < f(3));
  CHECK(f(3) < f(4));
  CHECK(binary_search_opt(cfg).n_opt == 1);
  CHECK(exhaustive_opt(cfg).n_opt == 1);
}

TEST_CASE("thirty-two users at 5 dB: interior optimum") {
  const auto cfg = SensingConfig::from_db(32, 12, 5.0, 0.01);
  const auto result = binary_search_opt(cfg);
  CHECK(result.n_opt > 1);
  CHECK(result.n_opt < 32);
  CHECK(result.n_opt == exhaustive_opt(cfg).n_opt);
}

TEST_CASE("thirty-two users at 0 dB: interior optimum matching the exhaustive scan") {
  const auto cfg = SensingConfig::from_db(32, 12, 0.0, 0.01);
  const auto result = binary_search_opt(cfg);
  CHECK(result.n_opt > 1);
  CHECK(result.n_opt < 32);
  CHECK(result.n_opt == exhaustive_opt(cfg).n_opt);
}

TEST_CASE("single user reduces to the local Neyman-Pearson test") {
  for (int M : {1, 2, 12}) {
    const auto cfg = SensingConfig::from_db(1, M, 0.0, 0.01);
    const auto result = binary_search_opt(cfg);
    CHECK(result.n_opt == 1);
    CHECK(std::abs(result.lambda_opt - inv_zeta(M, 0.01)) <= 1e-9);
    CHECK(convexity_check(cfg).convex);
  }
  CHECK(convexity_check(SensingConfig::from_db(2, 12, 0.0, 0.01)).convex);
}

TEST_CASE("search logic on random convex sequences") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const int N = std::uniform_int_distribution<int>(1, 80)(rng);
    const auto values = random_convex_sequence(rng, N);
    Objective f(N, [&](int n) { return values[n - 1]; });
    const auto binary = binary_search_opt(f);
    const auto exhaustive = exhaustive_opt(f);
    const int expected = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin()) + 1;
    CHECK(binary.n_opt == expected);
    CHECK(exhaustive.n_opt == expected);
    CHECK_FALSE(binary.used_fallback);
    CHECK(static_cast<int>(binary.evaluations()) <= std::max(1, evaluation_bound(N)));
    CHECK(convexity_check(f).convex);
  }
}

TEST_CASE("ties resolve toward the smaller n") {
  Objective flat(2, [](int) { return 0.25; });
  CHECK(exhaustive_opt(flat).n_opt == 1);
  CHECK(binary_search_opt(flat).n_opt == 1);
  const std::vector<double> plateau{5, 3, 1, 1, 1, 4};
  Objective g(6, [&](int n) { return plateau[n - 1]; });
  CHECK(binary_search_opt(g).n_opt == 3);
  CHECK(exhaustive_opt(g).n_opt == 3);
}

TEST_CASE("non-convex objective triggers the exhaustive fallback") {
  const std::vector<double> values{0, 9, 9, 9, 1, 9, 9, 9};
  Objective f(8, [&](int n) { return values[n - 1]; });
  const auto result = binary_search_opt(f);
  CHECK(result.used_fallback);
  CHECK(result.n_opt == 1);
  const auto report = convexity_check(f);
  CHECK_FALSE(report.convex);
  REQUIRE(report.first_violation.has_value());
  CHECK(*report.first_violation == 1);
}

TEST_CASE("infinite objective values do not break the search") {
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> values{inf, 4, 2, 3, inf};
  Objective f(5, [&](int n) { return values[n - 1]; });
  CHECK(binary_search_opt(f).n_opt == 3);
  CHECK(exhaustive_opt(f).n_opt == 3);
}

TEST_CASE("randomized scenarios: oracle agreement, constraint, dominance, convexity") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const auto cfg = random_config(rng);
    const int N = cfg.num_users;
    CAPTURE(N);
    CAPTURE(cfg.num_samples);
    CAPTURE(cfg.avg_snr);
    CAPTURE(cfg.alpha);
    Objective f(cfg);
    const auto binary = binary_search_opt(f);
    const auto exhaustive = exhaustive_opt(f);
    CHECK(binary.n_opt == exhaustive.n_opt);
    CHECK_FALSE(binary.used_fallback);
    CHECK(static_cast<int>(binary.evaluations()) <= evaluation_bound(N));
    CHECK(convexity_check(f).convex);

    const auto achieved = evaluate_pair(cfg, ThresholdPair{binary.n_opt, binary.lambda_opt});
    CHECK(std::abs(achieved.q_f - cfg.alpha) <= 1e-8);
    CHECK(std::abs(binary.q_d - std::exp(-f(binary.n_opt))) <= 1e-10);
    CHECK(std::abs(achieved.q_d - binary.q_d) <= 1e-12);

    const double left = binary.n_opt > 1 ? f(binary.n_opt - 1) : std::numeric_limits<double>::infinity();
    const double right = binary.n_opt < N ? f(binary.n_opt + 1) : std::numeric_limits<double>::infinity();
    CHECK(f(binary.n_opt) <= left);
    CHECK(f(binary.n_opt) <= right);

    for (const auto& rule : {FusionRule::or_rule(N), FusionRule::and_rule(N), FusionRule::majority_rule(N)}) {
      const auto m = evaluate_pair(cfg, alpha_matched_pair(cfg, rule));
      CHECK(binary.q_d >= m.q_d - 1e-12);
    }
  }
}

TEST_CASE("binary search trace records first evaluations in order") {
  const auto cfg = SensingConfig::from_db(20, 12, 2.0, 0.01);
  const auto result = binary_search_opt(cfg);
  std::vector<int> seen;
  for (const auto& [n, value] : result.objective_trace) {
    CHECK(std::find(seen.begin(), seen.end(), n) == seen.end());
    seen.push_back(n);
    CHECK(value == objective(n, cfg));
  }
}
