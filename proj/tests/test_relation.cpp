#include <doctest.h>

#include <random>

#include "ptopk/errors.hpp"
#include "ptopk/relation.hpp"
#include "support.hpp"

using namespace ptopk;
using test::make_dataset;

TEST_CASE("validate accepts the sensor relation") {
  Dataset data = test::load_fixture_relation("example2.tsv");
  CHECK(validate(data.rel).ok());
  CHECK_FALSE(data.rel.simple());
}

TEST_CASE("validate flags an infeasible part sum") {
  Dataset data = make_dataset({{0, 1, 2.0, 0.7}, {1, 1, 1.0, 0.5}});
  ValidationReport report = validate(data.rel);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].message.find("part sum") != std::string::npos);
}

TEST_CASE("validate flags probabilities outside (0,1]") {
  Dataset zero = make_dataset({{0, 0, 1.0, 0.0}});
  CHECK_FALSE(validate(zero.rel).ok());
  Dataset above = make_dataset({{0, 0, 1.0, 1.5}});
  ValidationReport report = validate(above.rel);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations[0].message.find("prob out of (0,1]") != std::string::npos);
}

TEST_CASE("validate flags duplicate ids") {
  ProbRelation rel({{3, 0, 0.5, {}}, {3, 1, 0.5, {}}});
  CHECK_FALSE(validate(rel).ok());
}

TEST_CASE("parts cover all tuples and are disjoint") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 12, .max_part = 4});
    std::size_t covered = 0;
    std::set<TupleId> seen;
    for (const auto& [part, members] : data.rel.parts()) {
      covered += members.size();
      for (TupleId id : members) CHECK(seen.insert(id).second);
    }
    CHECK(covered == data.rel.size());
  }
}

TEST_CASE("rank orders the fellowship shortlist with no ties") {
  Dataset data = test::load_fixture_relation("example1.tsv");
  RankedView view = rank(data.rel, data.scores);
  CHECK(view.order == std::vector<TupleId>{0, 1, 2});
  CHECK(view.tie_groups.size() == 3);
  CHECK_FALSE(view.has_ties());
}

TEST_CASE("rank groups all-equal scores into one tie group") {
  Dataset data = make_dataset({{0, 0, 7.0, 0.2}, {1, 1, 7.0, 0.3}, {2, 2, 7.0, 0.4}});
  RankedView view = rank(data.rel, data.scores);
  REQUIRE(view.tie_groups.size() == 1);
  CHECK(view.tie_groups[0] == std::pair<std::size_t, std::size_t>{0, 3});
  for (std::size_t pos = 0; pos < 3; ++pos) {
    CHECK(view.strictly_higher(pos) == 0);
    CHECK(view.higher_or_equal(pos) == 3);
  }
}

TEST_CASE("rank computes strictly-higher counts across a leading tie") {
  Dataset data = make_dataset({{0, 0, 5.0, 0.2}, {1, 1, 5.0, 0.3}, {2, 2, 3.0, 0.4}});
  RankedView view = rank(data.rel, data.scores);
  CHECK(view.tie_groups[0] == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(view.strictly_higher(2) == 2);
  CHECK(view.higher_or_equal(2) == 3);
}

TEST_CASE("rank is deterministic and i < position <= j holds") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 10, .allow_ties = true});
    RankedView a = rank(data.rel, data.scores);
    RankedView b = rank(data.rel, data.scores);
    CHECK(a.order == b.order);
    for (std::size_t pos = 0; pos < a.size(); ++pos) {
      CHECK(a.strictly_higher(pos) <= pos);
      CHECK(pos + 1 <= a.higher_or_equal(pos));
    }
  }
}

TEST_CASE("injective scores give singleton tie groups") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 10, .allow_ties = false});
    REQUIRE(data.scores.injective());
    RankedView view = rank(data.rel, data.scores);
    for (const auto& [b, e] : view.tie_groups) CHECK(e - b == 1);
  }
}

TEST_CASE("rank rejects missing scores") {
  ProbRelation rel({{0, 0, 0.5, {}}, {1, 1, 0.5, {}}});
  ScoreAssignment partial;
  partial.set(0, 1.0);
  CHECK_THROWS_AS(rank(rel, partial), MissingScoreError);
}
