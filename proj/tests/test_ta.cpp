#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"
#include "ptopk/ta.hpp"
#include "support.hpp"

using namespace ptopk;
using test::make_dataset;

namespace {

std::vector<double> sorted_probs(const AnswerSet& answer) {
  std::vector<double> out;
  for (const ScoredTuple& m : answer.members) out.push_back(m.prob);
  std::sort(out.rbegin(), out.rend());
  return out;
}

Dataset correlated_dataset(std::mt19937_64& rng, int n, double mix) {
  // mix = 1 aligns probability with score, mix = -1 inverts it.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<test::Row> rows;
  std::set<double> used;
  for (int i = 0; i < n; ++i) {
    double score;
    do {
      score = unit(rng);
    } while (!used.insert(score).second);
    double base = mix >= 0 ? score : 1.0 - score;
    double noise = 0.05 * unit(rng);
    double prob = std::clamp(std::abs(mix) * base + noise, 1e-6, 1.0);
    rows.push_back({static_cast<TupleId>(i), static_cast<PartId>(i), score, prob});
  }
  return make_dataset(rows);
}

}  // namespace

TEST_CASE("TA matches the basic engine's probability multiset") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 60);
    Dataset data = test::random_dataset(rng, {.max_n = n_dist(rng), .max_part = 1});
    const int n = static_cast<int>(data.rel.size());
    std::uniform_int_distribution<int> k_dist(0, n + 1);
    const int k = k_dist(rng);
    auto [answer, stats] = ta_ind_topk(data.rel, data.scores, k);
    AnswerSet basic = ind_topk(data.rel, data.scores, k);
    auto got = sorted_probs(answer), want = sorted_probs(basic);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(std::abs(got[i] - want[i]) < 1e-9);
    CHECK(stats.tuples_examined <= static_cast<std::size_t>(n));
  }
}

TEST_CASE("perfect correlation stops almost immediately") {
  // k=1, top tuple carries probability 0.9, every later probability <= 0.1:
  // the first threshold check already rules the rest out.
  Dataset data = make_dataset({{0, 0, 10.0, 0.9},
                               {1, 1, 9.0, 0.1},
                               {2, 2, 8.0, 0.09},
                               {3, 3, 7.0, 0.08},
                               {4, 4, 6.0, 0.07}});
  auto [answer, stats] = ta_ind_topk(data.rel, data.scores, 1);
  REQUIRE(answer.size() == 1);
  CHECK(answer.members[0].id == 0);
  CHECK(stats.tuples_examined <= 3);
}

TEST_CASE("k >= n examines every tuple and returns all") {
  Dataset data = make_dataset({{0, 0, 3.0, 0.2}, {1, 1, 2.0, 0.4}, {2, 2, 1.0, 0.6}});
  auto [answer, stats] = ta_ind_topk(data.rel, data.scores, 5);
  CHECK(answer.size() == 3);
  CHECK(stats.tuples_examined == 3);
}

TEST_CASE("unexamined tuples can never beat the reported answers") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    Dataset data = test::random_dataset(rng, {.max_n = 40, .max_part = 1});
    const int n = static_cast<int>(data.rel.size());
    std::uniform_int_distribution<int> k_dist(1, std::max(1, n / 2));
    const int k = k_dist(rng);
    auto [answer, stats] = ta_ind_topk(data.rel, data.scores, k);
    if (answer.size() < static_cast<std::size_t>(k)) continue;

    std::vector<double> all = ind_topk_probs(data.rel, data.scores, k);
    std::map<TupleId, double> by_id;
    for (std::size_t i = 0; i < data.rel.size(); ++i)
      by_id[data.rel.tuples()[i].id] = all[i];
    RankedView ranked = rank(data.rel, data.scores);
    const double lowest_kept = answer.members.back().prob;
    for (std::size_t pos = stats.stop_index; pos < ranked.size(); ++pos)
      CHECK(by_id[ranked.order[pos]] <= lowest_kept + 1e-9);
  }
}

TEST_CASE("positive correlation examines no more tuples than negative, on average") {
  std::mt19937_64 rng(79);
  const int trials = 30, n = 400, k = 10;
  double pos_total = 0.0, neg_total = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Dataset pos = correlated_dataset(rng, n, 1.0);
    Dataset neg = correlated_dataset(rng, n, -1.0);
    pos_total += ta_ind_topk(pos.rel, pos.scores, k).second.tuples_examined;
    neg_total += ta_ind_topk(neg.rel, neg.scores, k).second.tuples_examined;
  }
  CHECK(pos_total / trials <= neg_total / trials);
}

TEST_CASE("TA refuses general relations") {
  Dataset data = test::load_fixture_relation("example2.tsv");
  CHECK_THROWS_AS(ta_ind_topk(data.rel, data.scores, 1), NotSimpleError);
}
