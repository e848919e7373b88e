#include "ptopk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"
#include "ptopk/event_relation.hpp"
#include "ptopk/rollback.hpp"
#include "ptopk/ta.hpp"
#include "ptopk/tie_aware.hpp"
#include "ptopk/worlds.hpp"

namespace ptopk {

std::vector<EngineSpec> default_engines() {
  std::vector<EngineSpec> engines;
  engines.push_back({"basic", true, true,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return ind_topk_probs(rel, s, k);
                     },
                     nullptr});
  engines.push_back({"ta", true, true, nullptr,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return ta_ind_topk(rel, s, k).first;
                     }});
  engines.push_back({"reduction", false, true,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return indexp_topk_probs(rel, s, k);
                     },
                     nullptr});
  engines.push_back({"rollback", false, true,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return rollback_topk(rel, s, k).probs;
                     },
                     nullptr});
  engines.push_back({"rollbacksort", false, true,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       std::map<PartId, std::size_t> sizes;
                       for (const auto& [part, members] : rel.parts())
                         sizes[part] = members.size();
                       return rollbacksort_topk(rel, s, k, sizes).probs;
                     },
                     nullptr});
  engines.push_back({"gen-simple", true, false,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return ind_topk_gen_probs(rel, s, k);
                     },
                     nullptr});
  engines.push_back({"gen-full", false, false,
                     [](const ProbRelation& rel, const ScoreAssignment& s, int k) {
                       return general_topk_probs(rel, s, k);
                     },
                     nullptr});
  return engines;
}

namespace {

// Small random instances; roughly half get tied scores, part sizes lean
// small so enumeration stays cheap.
Dataset random_instance(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> n_dist(1, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = n_dist(rng);
  const bool want_ties = unit(rng) < 0.5;

  std::vector<TupleRecord> tuples(n);
  std::map<TupleId, double> scores;
  PartId part = 0;
  int i = 0;
  while (i < n) {
    std::uniform_int_distribution<int> size_dist(1, std::min(3, n - i));
    int size = unit(rng) < 0.6 ? 1 : size_dist(rng);
    for (int j = 0; j < size; ++j) tuples[i + j].part = part;
    ++part;
    i += size;
  }
  std::set<double> used;
  for (int t = 0; t < n; ++t) {
    tuples[t].id = static_cast<TupleId>(t);
    tuples[t].prob = 1.0 - unit(rng);
    if (want_ties) {
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
  // Rescale infeasible parts.
  std::map<PartId, double> sums;
  for (const TupleRecord& t : tuples) sums[t.part] += t.prob;
  for (TupleRecord& t : tuples)
    if (sums[t.part] > 1.0) t.prob *= 0.99 / sums[t.part];

  Dataset data;
  data.rel = ProbRelation(std::move(tuples));
  data.scores = ScoreAssignment(std::move(scores));
  return data;
}

using FailureCheck = std::function<bool(const Dataset&, int)>;

// Greedy shrink: drop tuples one at a time while the failure persists.
Dataset shrink(Dataset data, int k, const FailureCheck& fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t victim = 0; victim < data.rel.size(); ++victim) {
      std::vector<TupleRecord> reduced = data.rel.tuples();
      reduced.erase(reduced.begin() + victim);
      Dataset candidate;
      candidate.rel = ProbRelation(std::move(reduced));
      candidate.scores = data.scores;
      if (fails(candidate, k)) {
        data = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return data;
}

std::optional<std::string> check_engine(const EngineSpec& engine, const Dataset& data,
                                        int k, double tol) {
  const ProbRelation& rel = data.rel;
  if (engine.needs_simple && !rel.simple()) return std::nullopt;
  if (engine.needs_injective && !data.scores.injective()) return std::nullopt;

  TopkProbVector oracle = global_topk_oracle(rel, k, data.scores);
  if (engine.probs) {
    std::vector<double> got = engine.probs(rel, data.scores, k);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      const TupleId id = rel.tuples()[i].id;
      if (std::abs(got[i] - oracle[id]) > tol) {
        std::ostringstream msg;
        msg << "tuple " << id << ": engine " << got[i] << " vs oracle " << oracle[id]
            << " (k=" << k << ")";
        return msg.str();
      }
    }
    return std::nullopt;
  }

  // Answer-only engine: compare the probability multiset of its answer with
  // the k highest oracle probabilities.
  AnswerSet got = engine.answer(rel, data.scores, k);
  std::vector<double> got_probs;
  for (const ScoredTuple& m : got.members) got_probs.push_back(m.prob);
  std::vector<double> want;
  for (const auto& [id, p] : oracle) want.push_back(p);
  std::sort(want.begin(), want.end(), std::greater<>());
  want.resize(std::min<std::size_t>(want.size(), k < 0 ? 0 : static_cast<std::size_t>(k)));
  std::sort(got_probs.begin(), got_probs.end(), std::greater<>());
  if (got_probs.size() != want.size())
    return "answer cardinality " + std::to_string(got_probs.size()) + " vs " +
           std::to_string(want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    if (std::abs(got_probs[i] - want[i]) > tol) {
      std::ostringstream msg;
      msg << "answer multiset mismatch at position " << i << ": " << got_probs[i]
          << " vs " << want[i] << " (k=" << k << ")";
      return msg.str();
    }
  return std::nullopt;
}

std::optional<std::string> check_invariants(const Dataset& data, int k, double tol) {
  const ProbRelation& rel = data.rel;
  auto worlds = enumerate_worlds(rel);
  double mass = 0.0, expected_hits = 0.0;
  for (const PossibleWorld& w : worlds) {
    mass += w.prob;
    expected_hits +=
        w.prob * std::min<std::size_t>(w.members.size(), k < 0 ? 0 : static_cast<std::size_t>(k));
  }
  if (std::abs(mass - 1.0) > tol)
    return "world probabilities sum to " + std::to_string(mass);

  TopkProbVector p_k = global_topk_oracle(rel, k, data.scores);
  TopkProbVector p_k1 = global_topk_oracle(rel, k + 1, data.scores);
  double total = 0.0;
  for (const auto& [id, p] : p_k) {
    total += p;
    if (p > rel.prob(id) + tol)
      return "P exceeds tuple probability for tuple " + std::to_string(id);
    if (p > p_k1[id] + 1e-12)
      return "P not monotone in k for tuple " + std::to_string(id);
  }
  if (std::abs(total - expected_hits) > tol)
    return "allocation mass " + std::to_string(total) + " vs " +
           std::to_string(expected_hits);
  return std::nullopt;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts,
                              const std::vector<EngineSpec>& engines) {
  std::vector<EngineSpec> selected;
  for (const EngineSpec& e : engines) {
    if (opts.engines.empty() ||
        std::find(opts.engines.begin(), opts.engines.end(), e.name) != opts.engines.end())
      selected.push_back(e);
  }

  VerifyReport report;
  std::mt19937_64 rng(opts.seed);
  for (int trial = 0; trial < opts.trials; ++trial) {
    Dataset data = random_instance(rng, opts.max_n);
    std::uniform_int_distribution<int> k_dist(0, static_cast<int>(data.rel.size()) + 1);
    const int k = k_dist(rng);
    ++report.trials;

    auto record = [&](const std::string& property, const std::string& detail,
                      const FailureCheck& fails) {
      Dataset witness = shrink(data, k, fails);
      std::string path = opts.reproducer_dir + "/ptopk_repro_" +
                         std::to_string(opts.seed) + "_" + std::to_string(trial) + ".tsv";
      save_relation(witness, path);
      report.failures.push_back({property, detail, k, path});
    };

    if (auto detail = check_invariants(data, k, opts.tolerance)) {
      record("invariants", *detail, [&](const Dataset& d, int kk) {
        return check_invariants(d, kk, opts.tolerance).has_value();
      });
      continue;  // a broken instance would confuse the engine comparisons
    }

    for (const EngineSpec& engine : selected) {
      if (auto detail = check_engine(engine, data, k, opts.tolerance)) {
        record("oracle-equivalence:" + engine.name, *detail,
               [&](const Dataset& d, int kk) {
                 return check_engine(engine, d, kk, opts.tolerance).has_value();
               });
      }
    }
  }
  return report;
}

VerifyReport run_verification(const VerifyOptions& opts) {
  return run_verification(opts, default_engines());
}

}  // namespace ptopk
