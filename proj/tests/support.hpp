#ifndef PTOPK_TESTS_SUPPORT_HPP
#define PTOPK_TESTS_SUPPORT_HPP

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ptopk/io.hpp"
#include "ptopk/postulates.hpp"
#include "ptopk/relation.hpp"

namespace ptopk::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(PTOPK_FIXTURE_DIR) + "/" + name;
}

inline Dataset load_fixture_relation(const std::string& name) {
  return load_relation(fixture_path(name));
}

// Row = (id, part, score, prob).
using Row = std::tuple<TupleId, PartId, double, double>;

inline Dataset make_dataset(const std::vector<Row>& rows) {
  std::vector<TupleRecord> tuples;
  std::map<TupleId, double> scores;
  for (const auto& [id, part, score, prob] : rows) {
    tuples.push_back({id, part, prob, {}});
    scores[id] = score;
  }
  Dataset data;
  data.rel = ProbRelation(std::move(tuples));
  data.scores = ScoreAssignment(std::move(scores));
  return data;
}

struct RandomSpec {
  int max_n = 10;
  int max_part = 3;      // 1 = force simple
  bool allow_ties = false;
  double part_bias = 0.4;  // chance a tuple opens/extends a non-trivial part
};

inline Dataset random_dataset(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<int> n_dist(1, spec.max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = n_dist(rng);

  std::vector<TupleRecord> tuples(n);
  std::map<TupleId, double> scores;
  PartId part = 0;
  int i = 0;
  while (i < n) {
    int size = 1;
    if (spec.max_part > 1 && unit(rng) < spec.part_bias) {
      std::uniform_int_distribution<int> size_dist(2, std::min(spec.max_part, n - i < 2 ? 2 : n - i));
      size = std::min(size_dist(rng), n - i);
    }
    for (int j = 0; j < size; ++j) tuples[i + j].part = part;
    ++part;
    i += size;
  }

  std::set<double> used;
  for (int t = 0; t < n; ++t) {
    tuples[t].id = static_cast<TupleId>(t);
    tuples[t].prob = 1.0 - unit(rng);
    if (spec.allow_ties) {
      std::uniform_int_distribution<int> pool(1, std::max(2, n / 2));
      scores[t] = static_cast<double>(pool(rng));
    } else {
      double s;
      do {
        s = unit(rng);
      } while (!used.insert(s).second);
      scores[t] = s;
    }
  }

  std::map<PartId, double> sums;
  for (const TupleRecord& t : tuples) sums[t.part] += t.prob;
  for (TupleRecord& t : tuples)
    if (sums[t.part] > 1.0) t.prob *= 0.99 / sums[t.part];

  Dataset data;
  data.rel = ProbRelation(std::move(tuples));
  data.scores = ScoreAssignment(std::move(scores));
  return data;
}

// Expected-verdict sidecar for a fixture relation.
struct FixtureCheck {
  Semantics semantics;
  double tau = 0.0;
  Postulate postulate;
  bool holds = true;
  std::optional<std::vector<TupleId>> witness_answer;
  std::vector<Perturbation> perturbations;
};

struct Fixture {
  Dataset data;
  int k = 0;
  std::vector<FixtureCheck> checks;
};

inline Semantics semantics_from_name(const std::string& name) {
  if (name == "global-topk") return Semantics::GlobalTopk;
  if (name == "u-topk") return Semantics::UTopk;
  if (name == "u-kranks") return Semantics::UkRanks;
  if (name == "pt-k") return Semantics::PTk;
  throw Error("unknown semantics name " + name);
}

inline Postulate postulate_from_name(const std::string& name) {
  if (name == "exact-k") return Postulate::ExactK;
  if (name == "faithfulness") return Postulate::Faithfulness;
  if (name == "stability") return Postulate::Stability;
  throw Error("unknown postulate name " + name);
}

inline Fixture load_fixture(const std::string& stem) {
  Fixture fixture;
  fixture.data = load_fixture_relation(stem + ".tsv");
  std::ifstream in(fixture_path(stem + ".expected.json"));
  if (!in) throw Error("missing sidecar for " + stem);
  nlohmann::json doc = nlohmann::json::parse(in);
  fixture.k = doc.at("k").get<int>();
  for (const auto& entry : doc.at("checks")) {
    FixtureCheck check;
    check.semantics = semantics_from_name(entry.at("semantics").get<std::string>());
    if (entry.contains("tau")) check.tau = entry.at("tau").get<double>();
    check.postulate = postulate_from_name(entry.at("postulate").get<std::string>());
    check.holds = entry.at("holds").get<bool>();
    if (entry.contains("witness_answer"))
      check.witness_answer = entry.at("witness_answer").get<std::vector<TupleId>>();
    if (entry.contains("perturbations")) {
      for (const auto& p : entry.at("perturbations")) {
        Perturbation perturbation;
        perturbation.tuple = p.at("tuple").get<TupleId>();
        perturbation.target = p.at("target").get<std::string>() == "prob"
                                  ? Perturbation::Target::Prob
                                  : Perturbation::Target::Score;
        perturbation.direction = p.at("direction").get<std::string>() == "lower"
                                     ? Perturbation::Direction::Lower
                                     : Perturbation::Direction::Raise;
        perturbation.new_value = p.at("new_value").get<double>();
        check.perturbations.push_back(perturbation);
      }
    }
    fixture.checks.push_back(std::move(check));
  }
  return fixture;
}

inline PostulateVerdict run_fixture_check(const Fixture& fixture,
                                          const FixtureCheck& check) {
  SemanticsFn sem = make_semantics(check.semantics, check.tau);
  switch (check.postulate) {
    case Postulate::ExactK:
      return check_exact_k(sem, fixture.data.rel, fixture.data.scores, fixture.k);
    case Postulate::Faithfulness:
      return check_faithfulness(sem, fixture.data.rel, fixture.data.scores, fixture.k);
    case Postulate::Stability:
      return check_stability(sem, fixture.data.rel, fixture.data.scores, fixture.k,
                             check.perturbations);
  }
  throw Error("unknown postulate");
}

}  // namespace ptopk::test

#endif
