#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fiberwalk/fiber.hpp"

#include <algorithm>
#include <set>

using namespace fiberwalk;

TEST_CASE("enumerate_fiber solves the lattice system exactly") {
  Configuration a = univariate_poisson_config(3);

  Fiber f = enumerate_fiber(a, {{2, 4}});
  REQUIRE(f.tables.size() == 2);
  CHECK(f.tables[0].counts == std::vector<Count>{0, 2, 0});
  CHECK(f.tables[1].counts == std::vector<Count>{1, 0, 1});

  Fiber zero = enumerate_fiber(a, {{0, 0}});
  REQUIRE(zero.tables.size() == 1);
  CHECK(zero.tables[0].counts == std::vector<Count>{0, 0, 0});

  Configuration lifted = lawrence_lifting(univariate_poisson_config(2));
  Fiber single = enumerate_fiber(lifted, {{1, 1, 1, 1}});
  REQUIRE(single.tables.size() == 1);
  CHECK(single.tables[0].counts == std::vector<Count>{1, 0, 0, 1});

  CHECK(enumerate_fiber(a, {{2, 100}}).tables.empty());
  CHECK_THROWS_AS(enumerate_fiber(a, {{2, 4, 9}}), ShapeError);
}

TEST_CASE("enumeration needs a weight row or an explicit bound") {
  Configuration unweighted(1, {2}, {1, 2});  // one constraint, no weight
  CHECK_THROWS_AS(enumerate_fiber(unweighted, {{4}}), DomainError);

  EnumerationLimits limits;
  limits.total_bound = 4;
  Fiber f = enumerate_fiber(unweighted, {{4}}, limits);
  // x1 + 2 x2 = 4 with x1 + x2 <= 4
  std::set<std::vector<Count>> expect{{0, 2}, {2, 1}, {4, 0}};
  std::set<std::vector<Count>> got;
  for (const Table& t : f.tables) got.insert(t.counts);
  CHECK(got == expect);
}

TEST_CASE("enumeration is deterministic and lexicographically sorted") {
  Configuration a = univariate_poisson_config(4);
  Fiber f1 = enumerate_fiber(a, {{3, 7}});
  Fiber f2 = enumerate_fiber(a, {{3, 7}});
  REQUIRE(f1.tables.size() == f2.tables.size());
  CHECK(std::is_sorted(f1.tables.begin(), f1.tables.end(),
                       [](const Table& x, const Table& y) { return x.counts < y.counts; }));
  for (std::size_t i = 0; i < f1.tables.size(); ++i) CHECK(f1.tables[i] == f2.tables[i]);
  for (const Table& t : f1.tables)
    CHECK(sufficient_statistic(a, t).values == std::vector<Count>{3, 7});
}

TEST_CASE("total-count-2 fibers are the equal-index-sum pairs") {
  const int levels = 5;
  Configuration a = univariate_poisson_config(levels);
  for (Count c = 2; c <= 2 * levels; ++c) {
    Fiber f = enumerate_fiber(a, {{2, c}});
    std::set<std::vector<Count>> expect;
    for (int j = 1; j <= levels; ++j)
      for (int jp = j; jp <= levels; ++jp)
        if (j + jp == c) {
          std::vector<Count> t(levels, 0);
          t[static_cast<std::size_t>(j - 1)] += 1;
          t[static_cast<std::size_t>(jp - 1)] += 1;
          expect.insert(t);
        }
    std::set<std::vector<Count>> got;
    for (const Table& t : f.tables) got.insert(t.counts);
    CHECK(got == expect);
  }
}

TEST_CASE("node guard throws a resource error naming the statistic") {
  Configuration a = univariate_poisson_config(6);
  EnumerationLimits limits;
  limits.node_guard = 3;
  CHECK_THROWS_WITH_AS(enumerate_fiber(a, {{6, 21}}, limits),
                       doctest::Contains("(6,21)"), ResourceError);
}

TEST_CASE("is_connected walks the move graph") {
  Configuration a = univariate_poisson_config(3);
  Fiber f = enumerate_fiber(a, {{2, 4}});
  REQUIRE(f.tables.size() == 2);

  CHECK(is_connected(f, poisson_moves(3)));
  CHECK_FALSE(is_connected(f, MoveSet({}, "empty")));

  Fiber single = enumerate_fiber(a, {{0, 0}});
  CHECK(is_connected(single, MoveSet({}, "empty")));
}

TEST_CASE("positive marginal statistics enumerate trials and feasible layer sums") {
  auto stats11 = positive_marginal_statistics(1, 1, 1);
  CHECK(stats11.size() == 2);  // layer-1 count 0 or 1, trials pinned at 1
  for (const auto& t : stats11) CHECK(t.values.back() == 1);

  Configuration base2 = univariate_poisson_config(2);
  auto stats = positive_marginal_statistics(base2, 1);
  CHECK(stats.size() == 4);

  // every statistic has a witness table
  Configuration lifted = lawrence_lifting(base2);
  for (const auto& t : stats) CHECK(enumerate_fiber(lifted, t).tables.size() >= 1);

  auto stats22 = positive_marginal_statistics(2, 2, 2);
  Configuration lifted22 = lawrence_lifting(
      segre_product(univariate_poisson_config(2), univariate_poisson_config(2)));
  for (const auto& t : stats22) {
    REQUIRE(t.values.size() == lifted22.rows());
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(t.values[4 + c] >= 1);
      CHECK(t.values[4 + c] <= 2);
    }
    CHECK(enumerate_fiber(lifted22, t).tables.size() >= 1);
  }
}

TEST_CASE("verify_connectivity_theorem sweeps the statistic family") {
  VerifyReport r = verify_connectivity_theorem(TheoremId::prop1, {4}, 3);
  CHECK(r.all_connected);
  CHECK(r.fibers_checked > 0);
  CHECK_FALSE(r.counterexample.has_value());
  CHECK(r.move_count == 3);

  VerifyReport thm1 = verify_connectivity_theorem(TheoremId::thm1, {4}, 1);
  CHECK(thm1.all_connected);

  VerifyReport thm2 = verify_connectivity_theorem(TheoremId::thm2, {2, 2}, 2);
  CHECK(thm2.all_connected);

  VerifyReport thm3 = verify_connectivity_theorem(TheoremId::thm3, {2, 2}, 1);
  CHECK(thm3.all_connected);

  VerifyReport conj = verify_connectivity_theorem(TheoremId::conj_b02, {2, 2}, 1);
  CHECK(conj.all_connected);

  CHECK_THROWS_AS(verify_connectivity_theorem(TheoremId::prop1, {4, 4}, 2), DomainError);
  CHECK_THROWS_AS(verify_connectivity_theorem(TheoremId::thm1, {5}, 2, 2), ResourceError);
}
