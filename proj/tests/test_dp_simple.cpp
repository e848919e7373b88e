#include <doctest.h>

#include <cmath>
#include <random>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"
#include "ptopk/worlds.hpp"
#include "support.hpp"

using namespace ptopk;
using test::make_dataset;

TEST_CASE("the first two DP rows match their closed forms") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double p1 = unit(rng), p2 = unit(rng), p3 = unit(rng), p4 = unit(rng);
    std::vector<double> probs{p1, p2, p3, p4};
    DPTable table = ind_topk_sub_kernel(probs, 2);
    const double q1 = 1 - p1, q2 = 1 - p2, q3 = 1 - p3;
    CHECK(table.q(1, 1) == doctest::Approx(p1).epsilon(1e-12));
    CHECK(table.q(1, 2) == doctest::Approx(q1 * p2).epsilon(1e-12));
    CHECK(table.q(1, 3) == doctest::Approx(q1 * q2 * p3).epsilon(1e-12));
    CHECK(table.q(1, 4) == doctest::Approx(q1 * q2 * q3 * p4).epsilon(1e-12));
    CHECK(table.q(2, 1) == doctest::Approx(p1).epsilon(1e-12));
    CHECK(table.q(2, 2) == doctest::Approx(p2).epsilon(1e-12));
    CHECK(table.q(2, 3) == doctest::Approx((q2 + q1 * p2) * p3).epsilon(1e-12));
    CHECK(table.q(2, 4) ==
          doctest::Approx(((q2 + q1 * p2) * q3 + q1 * q2 * p3) * p4).epsilon(1e-12));
  }
}

TEST_CASE("q(k,i) equals p(t_i) for i <= k") {
  std::vector<double> probs{0.3, 0.7, 0.2, 0.9, 0.5};
  DPTable table = ind_topk_sub_kernel(probs, 5);
  for (std::size_t i = 1; i <= probs.size(); ++i)
    for (int k = static_cast<int>(i); k <= 5; ++k)
      CHECK(table.q(k, i) == doctest::Approx(probs[i - 1]).epsilon(1e-12));
}

TEST_CASE("DP column k equals the enumeration oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 10, .max_part = 1});
    const int n = static_cast<int>(data.rel.size());
    std::uniform_int_distribution<int> k_dist(0, n + 1);
    const int k = k_dist(rng);
    TopkProbVector oracle = global_topk_oracle(data.rel, k, data.scores);
    std::vector<double> probs = ind_topk_probs(data.rel, data.scores, k);
    for (std::size_t i = 0; i < data.rel.size(); ++i)
      CHECK(std::abs(probs[i] - oracle[data.rel.tuples()[i].id]) < 1e-9);
  }
}

TEST_CASE("streaming and full-table modes agree bitwise") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> probs;
    for (int i = 0; i < 40; ++i) probs.push_back(unit(rng));
    const int k = 7;
    DPTable full = ind_topk_sub_kernel(probs, k);
    ind_topk_sub_scan(probs, k, [&](std::size_t i, std::span<const double> column) {
      for (int r = 0; r <= k; ++r) CHECK(column[r] == full.q(r, i));
    });
  }
}

TEST_CASE("the recursion is recomputable entry-wise for i > k") {
  std::vector<double> probs{0.4, 0.8, 0.15, 0.6, 0.33, 0.99};
  const int k = 2;
  DPTable table = ind_topk_sub_kernel(probs, k);
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i <= probs.size(); ++i) {
    const double prev = probs[i - 2];
    const double expect =
        (table.q(k, i - 1) * (1 - prev) / prev + table.q(k - 1, i - 1)) * probs[i - 1];
    CHECK(table.q(k, i) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("faithfulness of the DP values on simple relations") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 9, .max_part = 1});
    const int n = static_cast<int>(data.rel.size());
    std::uniform_int_distribution<int> k_dist(1, n);
    const int k = k_dist(rng);
    std::vector<double> probs = ind_topk_probs(data.rel, data.scores, k);
    const auto& tuples = data.rel.tuples();
    for (std::size_t a = 0; a < tuples.size(); ++a)
      for (std::size_t b = 0; b < tuples.size(); ++b) {
        if (data.scores.score(tuples[a].id) > data.scores.score(tuples[b].id) &&
            tuples[a].prob > tuples[b].prob)
          CHECK(probs[a] > probs[b]);
      }
  }
}

TEST_CASE("ind_topk selects the fellowship answer set") {
  Dataset data = test::load_fixture_relation("example1.tsv");
  AnswerSet answer = ind_topk(data.rel, data.scores, 2);
  CHECK(answer.ids() == std::vector<TupleId>{1, 0});  // prob desc: Bob, Aidan
  CHECK(answer.members[0].prob == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(answer.members[1].prob == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("ind_topk edge cases") {
  Dataset data = test::load_fixture_relation("example1.tsv");
  CHECK(ind_topk(data.rel, data.scores, 0).size() == 0);
  CHECK(ind_topk(data.rel, data.scores, 7).size() == 3);
  CHECK_THROWS_AS(ind_topk(test::load_fixture_relation("example2.tsv").rel,
                           test::load_fixture_relation("example2.tsv").scores, 1),
                  NotSimpleError);
}

TEST_CASE("answer probabilities match the oracle's top-k multiset") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 10, .max_part = 1});
    const int n = static_cast<int>(data.rel.size());
    std::uniform_int_distribution<int> k_dist(0, n);
    const int k = k_dist(rng);
    AnswerSet answer = ind_topk(data.rel, data.scores, k);
    TopkProbVector oracle = global_topk_oracle(data.rel, k, data.scores);
    std::vector<double> want;
    for (const auto& [id, p] : oracle) want.push_back(p);
    std::sort(want.rbegin(), want.rend());
    want.resize(std::min<std::size_t>(want.size(), k));
    REQUIRE(answer.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      CHECK(std::abs(answer.members[i].prob - want[i]) < 1e-9);
  }
}

TEST_CASE("bounded heap keeps the k best with id tie-break") {
  BoundedHeap heap(2);
  heap.push(5, 0.3);
  heap.push(1, 0.3);
  heap.push(9, 0.3);
  CHECK(heap.size() == 2);
  AnswerSet answer = heap.take();
  CHECK(answer.ids() == std::vector<TupleId>{1, 5});
}
