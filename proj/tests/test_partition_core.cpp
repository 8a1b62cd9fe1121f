#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rpart/errors.hpp"
#include "rpart/partition_core.hpp"

using namespace rpart;

namespace {

std::vector<Natural> nat(std::initializer_list<std::uint64_t> xs) {
  return std::vector<Natural>(xs.begin(), xs.end());
}

PartSet parts_of(std::initializer_list<std::uint64_t> xs) { return PartSet::custom(nat(xs)); }
MultSet mults_of(std::initializer_list<std::uint64_t> xs) { return MultSet(nat(xs)); }

Representation rep_of(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> terms) {
  Representation r;
  for (auto [p, m] : terms) r.add(p, m);
  return r;
}

oracle::Rep to_oracle(const Representation& r) {
  oracle::Rep out;
  for (const auto& [p, m] : r.terms()) out[p.convert_to<std::uint64_t>()] = m.convert_to<std::uint64_t>();
  return out;
}

std::vector<std::uint64_t> random_subset(std::mt19937_64& rng, std::uint64_t hi, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size_dist(0, max_size);
  std::uniform_int_distribution<std::uint64_t> value(1, hi);
  std::set<std::uint64_t> s;
  const std::size_t want = size_dist(rng);
  while (s.size() < want) s.insert(value(rng));
  return {s.begin(), s.end()};
}

std::vector<Natural> to_nat(const std::vector<std::uint64_t>& xs) {
  return std::vector<Natural>(xs.begin(), xs.end());
}

}  // namespace

TEST_CASE("count examples") {
  CHECK(count_partitions(3, parts_of({1, 2}), mults_of({1})) == oracle::brute_count(3, {1, 2}, {1}));
  CHECK(count_partitions(3, parts_of({1, 2}), mults_of({1})) == 1);
  CHECK(count_partitions(5, parts_of({1, 2}), mults_of({})) == 0);
  CHECK(count_partitions(7, parts_of({1}), mults_of({7})) == 1);
}

TEST_CASE("series examples") {
  CHECK(count_via_series(3, parts_of({1, 2}), mults_of({1})) == 1);
  CHECK(count_via_series(4, parts_of({1}), mults_of({1, 2, 3})) == 0);
  CHECK(count_via_series(0, parts_of({1, 2}), mults_of({1})) == 1);
  CHECK(count_partitions(0, parts_of({1, 2}), mults_of({1})) == 1);
}

TEST_CASE("enumeration examples") {
  auto a = enumerate_partitions(3, parts_of({1, 2}), mults_of({1}), 10);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == rep_of({{1, 1}, {2, 1}}));

  auto b = enumerate_partitions(2, parts_of({1, 2}), mults_of({1, 2}), 10);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == rep_of({{1, 2}}));
  CHECK(b[1] == rep_of({{2, 1}}));

  CHECK(enumerate_partitions(1, parts_of({2}), mults_of({1}), 10).empty());
  CHECK_THROWS_AS(enumerate_partitions(1, parts_of({1}), mults_of({1}), 0), input_error);
}

TEST_CASE("validation examples") {
  const auto P = parts_of({1, 2});
  const auto M = mults_of({1});
  CHECK(validate_representation(rep_of({{1, 1}, {2, 1}}), 3, P, M));
  CHECK_FALSE(validate_representation(rep_of({{1, 3}}), 3, P, M));
  CHECK(validate_representation(Representation{}, 0, P, M));
  CHECK_FALSE(validate_representation(Representation{}, 5, P, M));
  CHECK_FALSE(validate_representation(rep_of({{3, 1}}), 3, P, M));
}

TEST_CASE("cumulative bound examples") {
  auto a = cumulative_count_bound(3, parts_of({1, 2}), mults_of({1}));
  CHECK(a.sum == 3);
  CHECK(a.bound == 4);
  CHECK(a.holds);
  auto b = cumulative_count_bound(1, parts_of({1}), mults_of({1}));
  CHECK(b.sum == 1);
  CHECK(b.bound == 2);
  CHECK(b.holds);
  auto c = cumulative_count_bound(5, parts_of({1, 2}), mults_of({}));
  CHECK(c.sum == 0);
  CHECK(c.bound == 1);
  CHECK(c.holds);
}

TEST_CASE("representation rejects zero and repeated parts") {
  Representation r;
  CHECK_THROWS_AS(r.add(0, 1), input_error);
  CHECK_THROWS_AS(r.add(1, 0), input_error);
  r.add(2, 1);
  CHECK_THROWS_AS(r.add(2, 3), input_error);
  CHECK(r.value() == 2);
}

TEST_CASE("prefix bounds are enforced") {
  const PartSet P = PartSet::custom(nat({1, 2, 4}), Natural(10));
  const MultSet M(nat({1, 3}), Natural(20));
  CHECK_NOTHROW(count_partitions(10, P, M));
  CHECK_THROWS_AS(count_partitions(11, P, M), bound_error);
  CHECK_THROWS_AS(count_via_series(11, P, M), bound_error);
  CHECK_THROWS_AS(enumerate_partitions(11, P, M, 1), bound_error);
  CHECK_THROWS_AS(PartSet::custom(nat({2, 1})), input_error);
  CHECK_THROWS_AS(MultSet(nat({0, 1})), input_error);
  CHECK_THROWS_AS(PartSet::custom(nat({1, 20}), Natural(10)), input_error);
}

TEST_CASE("named part sequences") {
  CHECK(PartSet::factorials(130).elements() == nat({1, 2, 6, 24, 120}));
  CHECK(PartSet::factorials(130).origin() == PartOrigin::factorials);
  CHECK(PartSet::powers_kk(300).elements() == nat({1, 4, 27, 256}));
  CHECK(PartSet::from_exponents({0, 1, 4, 5}, 40).elements() == nat({1, 2, 16, 32}));
  CHECK(PartSet::factorials(130).covers(130));
  CHECK_FALSE(PartSet::factorials(130).covers(131));
}

TEST_CASE("randomized agreement with the exhaustive oracle") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> n_dist(0, 60);
  for (int trial = 0; trial < 300; ++trial) {
    const auto parts = random_subset(rng, 20, 5);
    const auto mults = random_subset(rng, 20, 5);
    const std::uint64_t n = n_dist(rng);
    const PartSet P = PartSet::custom(to_nat(parts));
    const MultSet M(to_nat(mults));
    const auto expected = oracle::all_representations(n, parts, mults);
    CAPTURE(trial);
    CAPTURE(n);
    REQUIRE(count_partitions(n, P, M) == expected.size());
    REQUIRE(count_via_series(n, P, M) == expected.size());
    const auto got = enumerate_partitions(n, P, M, 1000000);
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      REQUIRE(to_oracle(got[k]) == expected[k]);
      REQUIRE(validate_representation(got[k], n, P, M));
    }
    if (!expected.empty()) {
      const auto first = enumerate_partitions(n, P, M, 1);
      REQUIRE(first.size() == 1);
      REQUIRE(to_oracle(first[0]) == expected[0]);
    }
  }
}

TEST_CASE("monotone in parts and multiplicities") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint64_t> n_dist(1, 150);
  for (int trial = 0; trial < 100; ++trial) {
    auto parts = random_subset(rng, 40, 5);
    auto mults = random_subset(rng, 40, 5);
    const std::uint64_t n = n_dist(rng);
    const Natural base = count_partitions(n, PartSet::custom(to_nat(parts)), MultSet(to_nat(mults)));

    auto more_mults = mults;
    more_mults.push_back(41 + trial % 10);
    std::sort(more_mults.begin(), more_mults.end());
    more_mults.erase(std::unique(more_mults.begin(), more_mults.end()), more_mults.end());
    CHECK(base <= count_partitions(n, PartSet::custom(to_nat(parts)), MultSet(to_nat(more_mults))));

    auto more_parts = parts;
    more_parts.push_back(1);
    std::sort(more_parts.begin(), more_parts.end());
    more_parts.erase(std::unique(more_parts.begin(), more_parts.end()), more_parts.end());
    CHECK(base <= count_partitions(n, PartSet::custom(to_nat(more_parts)), MultSet(to_nat(mults))));
  }
}

TEST_CASE("unrestricted counts match the pentagonal recurrence") {
  const std::size_t N = 450;
  std::vector<Natural> p(N + 1, 0);
  p[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    for (long k = 1;; ++k) {
      const long g1 = k * (3 * k - 1) / 2;
      if (g1 > static_cast<long>(n)) break;
      const bool plus = k % 2 == 1;
      const long g2 = k * (3 * k + 1) / 2;
      for (long g : {g1, g2}) {
        if (g > static_cast<long>(n)) continue;
        if (plus) {
          p[n] += p[n - g];
        } else {
          p[n] -= p[n - g];
        }
      }
    }
  }
  std::vector<Natural> all;
  for (std::uint64_t k = 1; k <= N; ++k) all.emplace_back(k);
  const PartSet P = PartSet::custom(all);
  const MultSet M(all);
  for (std::uint64_t n : {1u, 10u, 100u, 450u}) {
    CAPTURE(n);
    CHECK(count_partitions(n, P, M) == p[n]);
    CHECK(count_via_series(n, P, M) == p[n]);
  }
  CHECK(p[450] > Natural(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("cumulative bound holds on random instances") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> m_dist(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const auto parts = random_subset(rng, 60, 6);
    const auto mults = random_subset(rng, 60, 6);
    const std::uint64_t m = m_dist(rng);
    const auto r = cumulative_count_bound(m, PartSet::custom(to_nat(parts)), MultSet(to_nat(mults)));
    std::uint64_t sum = 0;
    for (std::uint64_t n = 1; n <= m; ++n) sum += oracle::brute_count(n, parts, mults);
    CHECK(r.sum == sum);
    CHECK(r.holds);
  }
}
