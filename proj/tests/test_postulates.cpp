#include <doctest.h>

#include <random>

#include "ptopk/errors.hpp"
#include "ptopk/postulates.hpp"
#include "support.hpp"

using namespace ptopk;
using test::make_dataset;

namespace {

void run_fixture(const std::string& stem) {
  test::Fixture fixture = test::load_fixture(stem);
  for (const test::FixtureCheck& check : fixture.checks) {
    CAPTURE(stem);
    PostulateVerdict verdict = test::run_fixture_check(fixture, check);
    CHECK(verdict.holds == check.holds);
    if (!check.holds) {
      REQUIRE(verdict.witness.has_value());
      if (check.witness_answer)
        CHECK(verdict.witness->answer_set == *check.witness_answer);
    }
  }
}

}  // namespace

TEST_CASE("fixture suite reproduces the recorded verdicts") {
  run_fixture("example1");
  run_fixture("appendix_5b");
  run_fixture("appendix_7b");
  run_fixture("appendix_8");
  run_fixture("appendix_12");
}

TEST_CASE("the U-kRanks stability counterexample flips the raised winner") {
  test::Fixture fixture = test::load_fixture("appendix_12");
  SemanticsFn sem = make_semantics(Semantics::UkRanks);
  // Before: winners {t1, t3}; raising t3 above t2 hands both ranks to t1/t2.
  CHECK(winner_union(sem, fixture.data.rel, fixture.data.scores, 2) ==
        std::vector<TupleId>{1, 3});
}

TEST_CASE("Global-Topk satisfies Exact-k on random relations") {
  std::mt19937_64 rng(201);
  SemanticsFn sem = make_semantics(Semantics::GlobalTopk);
  for (int trial = 0; trial < 40; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 8, .max_part = 3, .allow_ties = true});
    std::uniform_int_distribution<int> k_dist(1, static_cast<int>(data.rel.parts().size()));
    CHECK(check_exact_k(sem, data.rel, data.scores, k_dist(rng)).holds);
  }
}

TEST_CASE("Faithfulness holds on simple relations for Global-Topk, PT-k and U-Topk") {
  std::mt19937_64 rng(203);
  for (int trial = 0; trial < 40; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 8, .max_part = 1});
    std::uniform_int_distribution<int> k_dist(1, static_cast<int>(data.rel.size()));
    const int k = k_dist(rng);
    CHECK(check_faithfulness(make_semantics(Semantics::GlobalTopk), data.rel,
                             data.scores, k)
              .holds);
    CHECK(check_faithfulness(make_semantics(Semantics::UTopk), data.rel, data.scores, k)
              .holds);
    CHECK(check_faithfulness(make_semantics(Semantics::PTk, 0.3), data.rel,
                             data.scores, k)
              .holds);
  }
}

TEST_CASE("Stability holds for Global-Topk under random winner/loser perturbations") {
  std::mt19937_64 rng(205);
  SemanticsFn sem = make_semantics(Semantics::GlobalTopk);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 7, .max_part = 3, .allow_ties = true});
    const int k = 1 + static_cast<int>(trial % 3);
    std::vector<TupleId> winners = winner_union(sem, data.rel, data.scores, k);

    std::vector<Perturbation> perturbations;
    for (const TupleRecord& t : data.rel.tuples()) {
      const bool is_winner =
          std::binary_search(winners.begin(), winners.end(), t.id);
      Perturbation p;
      p.tuple = t.id;
      if (is_winner) {
        p.direction = Perturbation::Direction::Raise;
        if (unit(rng) < 0.5) {
          p.target = Perturbation::Target::Score;
          p.new_value = data.scores.score(t.id) + 0.1 + unit(rng);
        } else {
          p.target = Perturbation::Target::Prob;
          // Stay feasible within the part.
          double slack = 1.0;
          for (TupleId other : data.rel.parts().at(t.part))
            if (other != t.id) slack -= data.rel.prob(other);
          if (slack <= t.prob) continue;
          p.new_value = t.prob + (slack - t.prob) * unit(rng) * 0.9;
          if (p.new_value <= t.prob) continue;
        }
      } else {
        p.direction = Perturbation::Direction::Lower;
        if (unit(rng) < 0.5) {
          p.target = Perturbation::Target::Score;
          p.new_value = data.scores.score(t.id) - 0.1 - unit(rng);
        } else {
          p.target = Perturbation::Target::Prob;
          p.new_value = t.prob * (0.1 + 0.8 * unit(rng));
        }
      }
      perturbations.push_back(p);
    }
    CHECK(check_stability(sem, data.rel, data.scores, k, perturbations).holds);
  }
}

TEST_CASE("identity perturbations are vacuous; invalid ones are rejected") {
  Dataset data = test::load_fixture_relation("example1.tsv");
  SemanticsFn sem = make_semantics(Semantics::GlobalTopk);

  Perturbation identity{1, Perturbation::Target::Score,
                        Perturbation::Direction::Raise, 0.55};
  CHECK(check_stability(sem, data.rel, data.scores, 2, {identity}).holds);

  Perturbation wrong_direction{1, Perturbation::Target::Score,
                               Perturbation::Direction::Raise, 0.1};
  CHECK_THROWS_AS(check_stability(sem, data.rel, data.scores, 2, {wrong_direction}),
                  InvalidPerturbationError);

  Perturbation bad_prob{1, Perturbation::Target::Prob,
                        Perturbation::Direction::Raise, 1.5};
  CHECK_THROWS_AS(check_stability(sem, data.rel, data.scores, 2, {bad_prob}),
                  InvalidPerturbationError);
}

TEST_CASE("exact-k guard: small partitions pass vacuously") {
  Dataset data = make_dataset({{0, 0, 1.0, 0.5}});
  SemanticsFn sem = make_semantics(Semantics::UTopk);
  CHECK(check_exact_k(sem, data.rel, data.scores, 3).holds);
}
