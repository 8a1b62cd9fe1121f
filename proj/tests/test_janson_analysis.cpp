#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rpart/errors.hpp"
#include "rpart/janson_analysis.hpp"
#include "rpart/random_multiplicities.hpp"

using namespace rpart;

namespace {

AnalysisInstance inst(std::vector<Exponent> i, std::vector<std::uint64_t> a, unsigned beta) {
  AnalysisInstance x;
  x.i_list = std::move(i);
  x.a_list = std::move(a);
  x.beta = beta;
  return x;
}

MicroInstance random_micro(std::mt19937_64& rng, std::size_t max_ground) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_ground);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  MicroInstance mi;
  const std::size_t n = size_dist(rng);
  for (std::size_t k = 0; k < n; ++k) mi.probabilities.push_back(prob(rng));
  std::uniform_int_distribution<std::size_t> count_dist(1, 10);
  std::uniform_int_distribution<std::uint32_t> elem(0, static_cast<std::uint32_t>(n - 1));
  std::uniform_int_distribution<std::size_t> width(1, std::min<std::size_t>(n, 4));
  const std::size_t events = count_dist(rng);
  for (std::size_t e = 0; e < events; ++e) {
    std::set<std::uint32_t> s;
    const std::size_t w = width(rng);
    while (s.size() < w) s.insert(elem(rng));
    mi.events.emplace_back(s.begin(), s.end());
  }
  return mi;
}

}  // namespace

TEST_CASE("compute_mu examples") {
  CHECK(compute_mu(inst({4, 3}, {1, 2}, 1)) == doctest::Approx(0.1875).epsilon(1e-12));
  for (Exponent t = 1; t <= 40; ++t) {
    CHECK(compute_mu(inst({t, t}, {1, 2}, 0)) == doctest::Approx(std::ldexp(1.0, -static_cast<int>(t))).epsilon(1e-12));
  }
  const auto idx = special_indices(pow2(20), PartSet::factorials(pow2(20)));
  const auto a = AnalysisInstance::from_indices(idx, 3);
  CHECK(compute_mu(a) == doctest::Approx(2520.0 * 2520.0 * 2520.0 / 1048576.0).epsilon(1e-12));
  CHECK(log_mu(a) == doctest::Approx(3 * std::log(2520.0) - 20 * std::log(2.0)).epsilon(1e-12));
  // Astronomically large instances stay finite in log space.
  const auto big = inst({60, 59, 58, 57, 56, 55}, {1, 2, 3, 4, 5, 6}, 200);
  CHECK(std::isfinite(log_mu(big)));
  CHECK(expected_events(a) == doctest::Approx(compute_mu(a) * 8000.0).epsilon(1e-12));
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(compute_mu(inst({4}, {1}, 1)), precondition_error);
  CHECK_THROWS_AS(compute_mu(inst({4, 3}, {2, 3}, 1)), precondition_error);
  CHECK_THROWS_AS(compute_mu(inst({4, 3}, {1, 1}, 1)), precondition_error);
  CHECK_THROWS_AS(compute_mu(inst({4, 3}, {1}, 1)), precondition_error);
  CHECK_THROWS_AS(claim2_bound(inst({4, 3}, {1, 2}, 1), 1), precondition_error);
  CHECK_THROWS_AS(claim2_bound(inst({4, 3}, {1, 2}, 1), 3), precondition_error);
}

TEST_CASE("claim forms against hand-evaluated displays") {
  {
    const auto x = inst({4, 3}, {1, 2}, 1);
    const double mu = expected_events(x);
    CHECK(claim1_bound(x).bound == doctest::Approx(mu * mu / 3).epsilon(1e-12));
    CHECK(claim2_bound(x, 2) == doctest::Approx(mu * mu / 2).epsilon(1e-12));
    CHECK(delta_total_bound(x) == doctest::Approx(mu * mu / 3 + mu * mu / 2).epsilon(1e-12));
  }
  {
    const auto x = inst({5, 4, 4}, {1, 2, 3}, 2);
    const double mu = expected_events(x);
    CHECK(claim1_bound(x).bound == doctest::Approx(mu * mu * ((1 + 1.0 / 16) * (1 + 1.0 / 16) - 1)).epsilon(1e-12));
    CHECK(claim2_bound(x, 2) == doctest::Approx(mu * mu * 2 * (1.0 / 25) * (1 + 1.0 / 16)).epsilon(1e-12));
    // ell = 3: 2^{i_1}/2^{i_3} / (i_1^b i_2^b), empty product over r > 3.
    CHECK(claim2_bound(x, 3) == doctest::Approx(mu * mu * 2 / (25.0 * 16.0)).epsilon(1e-12));
  }
  {
    // Level bounds for q = 4.
    const auto x = inst({9, 7, 6, 5}, {1, 2, 3, 4}, 2);
    const double mu = expected_events(x);
    const double i1 = 81, i2 = 49, i3 = 36, i4 = 25;
    CHECK(claim2_bound(x, 2) == doctest::Approx(mu * mu * std::ldexp(1.0, 9 - 7) / i1 * (1 + 1 / i3) * (1 + 1 / i4)).epsilon(1e-12));
    CHECK(claim2_bound(x, 3) == doctest::Approx(mu * mu * std::ldexp(1.0, 9 - 6) / (i1 * i2) * (1 + 1 / i4)).epsilon(1e-12));
    CHECK(claim2_bound(x, 4) == doctest::Approx(mu * mu * std::ldexp(1.0, 9 - 5) / (i1 * i2 * i3)).epsilon(1e-12));
  }
  {
    // beta = 0 with equal indices: p_j = 2^{-t}, N_j p_j = 1.
    const Exponent t = 6;
    const auto x = inst({t, t, t}, {1, 2, 3}, 0);
    const double mu = std::ldexp(1.0, -static_cast<int>(t));
    CHECK(expected_events(x) == doctest::Approx(mu).epsilon(1e-12));
    CHECK(claim1_bound(x).bound == doctest::Approx(mu * mu * 3).epsilon(1e-12));
    CHECK(claim2_bound(x, 2) == doctest::Approx(mu * mu * 2).epsilon(1e-12));
    CHECK(claim2_bound(x, 3) == doctest::Approx(mu * mu).epsilon(1e-12));
  }
}

TEST_CASE("index-set analysis at n = 2^20") {
  const auto idx = special_indices(pow2(20), PartSet::factorials(pow2(20)));
  const auto a = AnalysisInstance::from_indices(idx, 3);
  const auto c1 = claim1_bound(a);
  const double mu = expected_events(a);
  const double expect = mu * mu * ((1 + 1 / 3375.0) * (1 + 1 / 2744.0) * (1 + 1 / 1728.0) - 1);
  CHECK(c1.bound == doctest::Approx(expect).epsilon(1e-10));
  REQUIRE(c1.crude.has_value());
  CHECK(*c1.crude == doctest::Approx(mu * mu / 400.0).epsilon(1e-10));
  double total = c1.bound;
  for (std::size_t ell = 2; ell <= 4; ++ell) total += claim2_bound(a, ell);
  CHECK(delta_total_bound(a) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("janson_failure_bound examples") {
  CHECK(janson_failure_bound(2, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(janson_failure_bound(3, 3) == doctest::Approx(std::exp(-1.5)).epsilon(1e-15));
  CHECK(janson_failure_bound(0.1875, 0.5) == doctest::Approx(std::exp(-0.03515625)).epsilon(1e-15));
  CHECK_THROWS_AS(janson_failure_bound(2, 1), precondition_error);
  CHECK_THROWS_AS(janson_failure_bound(0, 1), precondition_error);
}

TEST_CASE("exact oracles on small examples") {
  CHECK(exact_no_event_probability({{0.5}, {{0}}}) == doctest::Approx(0.5));
  CHECK(exact_no_event_probability({{0.5, 0.5}, {{0}, {1}}}) == doctest::Approx(0.25));
  const MicroInstance nested{{0.3, 0.6, 0.9}, {{0, 1}, {0, 1, 2}}};
  CHECK(exact_no_event_probability(nested) == doctest::Approx(1 - 0.3 * 0.6));

  const auto disjoint = exact_delta({{0.5, 0.4, 0.3}, {{0}, {1, 2}}});
  CHECK(disjoint.delta == 0.0);
  CHECK(disjoint.mu == doctest::Approx(0.5 + 0.12));

  const double p = 0.7;
  const auto same = exact_delta({{p, p, p}, {{0, 1, 2}, {0, 1, 2}}});
  CHECK(same.mu == doctest::Approx(2 * p * p * p));
  CHECK(same.delta == doctest::Approx(2 * p * p * p));

  CHECK(exact_no_event_probability({{0.2, 0.3}, {}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(exact_no_event_probability({std::vector<double>(25, 0.5), {{0}}}), size_error);
  CHECK_THROWS_AS(exact_no_event_probability({{1.5}, {{0}}}), input_error);
  CHECK_THROWS_AS(exact_no_event_probability({{0.5}, {{1}}}), input_error);
}

TEST_CASE("exact oracles agree with inclusion-exclusion and direct pair sums") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    const MicroInstance mi = random_micro(rng, 12);
    CAPTURE(trial);
    const double exact = exact_no_event_probability(mi);
    CHECK(exact == doctest::Approx(oracle::no_event_inclusion_exclusion(mi.probabilities, mi.events)).epsilon(1e-10));
    const auto ed = exact_delta(mi);
    const auto [mu, delta] = oracle::mu_delta(mi.probabilities, mi.events);
    CHECK(ed.mu == doctest::Approx(mu).epsilon(1e-12));
    CHECK(ed.delta == doctest::Approx(delta).epsilon(1e-12));
  }
}

TEST_CASE("Janson inequality holds on random micro-instances") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const MicroInstance mi = random_micro(rng, 16);
    const auto ed = exact_delta(mi);
    if (ed.mu == 0.0) continue;
    const double D = std::max(ed.mu, ed.delta);
    CAPTURE(trial);
    CHECK(exact_no_event_probability(mi) <= janson_failure_bound(ed.mu, D) + 1e-12);
    CHECK(exact_no_event_probability(mi) <= janson_failure_bound(ed.mu, 2 * D) + 1e-12);
  }
}

TEST_CASE("structured micro examples") {
  const auto a = build_structured_micro({2, 2}, {1, 2}, 5, {0.5, 0.5});
  CHECK(a.tuples == std::vector<std::vector<std::uint64_t>>{{1, 2}, {3, 1}});
  REQUIRE(a.instance.events.size() == 2);
  // Element index: block offset + m - 1, blocks [0,4) and [4,8).
  CHECK(a.instance.events[0] == std::vector<std::uint32_t>{0, 5});
  CHECK(a.instance.events[1] == std::vector<std::uint32_t>{2, 4});
  CHECK(a.instance.probabilities.size() == 8);

  CHECK(build_structured_micro({2, 2}, {1, 2}, 100, {0.5, 0.5}).tuples.empty());
  CHECK(build_structured_micro({1, 1}, {1, 1}, 2, {0.5, 0.5}).tuples == std::vector<std::vector<std::uint64_t>>{{1, 1}});
  CHECK_THROWS_AS(build_structured_micro({9, 9}, {1, 2}, 5, {0.5, 0.5}), size_error);
}

TEST_CASE("structured micro-instances: claims, tuple count, exact mu") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> q_dist(2, 3);
  std::uniform_int_distribution<Exponent> i_dist(1, 4);
  std::uniform_real_distribution<double> p_dist(0.05, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int q = q_dist(rng);
    std::vector<Exponent> i_list;
    std::vector<std::uint64_t> a_list{1};
    std::vector<double> p;
    for (int j = 0; j < q; ++j) {
      i_list.push_back(i_dist(rng));
      p.push_back(p_dist(rng));
    }
    for (int j = 1; j < q; ++j) a_list.push_back(a_list.back() + 1 + rng() % 3);
    std::uint64_t max_sum = 0;
    for (int j = 0; j < q; ++j) max_sum += a_list[j] << i_list[j];
    const std::uint64_t n = 1 + rng() % max_sum;
    const auto sm = build_structured_micro(i_list, a_list, n, p);

    std::vector<std::uint64_t> i64(i_list.begin(), i_list.end());
    const auto tuples = oracle::solution_tuples(i64, a_list, n);
    REQUIRE(sm.tuples == tuples);
    REQUIRE(residual_window_count(i_list, a_list, n) == tuples.size());

    const auto levels = exact_delta_by_level(sm);
    const auto ed = exact_delta(sm.instance);
    double sum = 0;
    for (double x : levels) sum += x;
    CHECK(sum == doctest::Approx(ed.delta).epsilon(1e-12));
    const BlockModel model = sm.block_model();
    CHECK(levels[0] <= claim1_bound(model) * (1 + 1e-9));
    for (std::size_t ell = 2; ell <= model.q(); ++ell) CHECK(levels[ell - 1] <= claim2_bound(model, ell) * (1 + 1e-9));
    CHECK(ed.mu <= formal_mu(model) * (1 + 1e-9));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("exact mu equals the formal count when every choice admits m_1") {
  // i = (6, 2, 2), a = (1, 2, 6): sum_{j>=2} m_j a_j spans 24 values, within 2^6.
  const std::vector<Exponent> i_list{6, 2, 2};
  const std::vector<std::uint64_t> a_list{1, 2, 6};
  const std::uint64_t n = 2 * 4 + 6 * 4 + 1;
  for (unsigned beta : {1u, 2u}) {
    const auto x = inst(i_list, a_list, beta);
    const BlockModel model = x.block_model();
    const auto sm = build_structured_micro(i_list, a_list, n, model.probs);
    CHECK(sm.tuples.size() == 16);
    CHECK(residual_window_count(i_list, a_list, n) == 16);
    const double exact = exact_delta(sm.instance).mu;
    CHECK(exact == doctest::Approx(formal_mu(model)).epsilon(1e-9));
    CHECK(exact == doctest::Approx(expected_events(x)).epsilon(1e-9));
    CHECK(exact == doctest::Approx(compute_mu(x) * std::pow(6.0, beta)).epsilon(1e-9));
  }
}

TEST_CASE("residual window count") {
  // With 2^{i_1} at least the spread of the remaining sum, every choice fits.
  CHECK(residual_window_count({10, 3, 2}, {1, 5, 7}, 5 * 8 + 7 * 4 + 1) == 32);
  CHECK(residual_window_count({2, 2}, {1, 2}, 100) == 0);
  CHECK_THROWS_AS(residual_window_count({2, 2}, {2, 3}, 5), precondition_error);
}
