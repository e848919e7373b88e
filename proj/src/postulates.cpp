#include "ptopk/postulates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ptopk/errors.hpp"
#include "ptopk/worlds.hpp"

namespace ptopk {
namespace {

std::vector<std::vector<TupleId>> subsets_filling(
    const std::vector<TupleId>& mandatory, const std::vector<TupleId>& candidates,
    std::size_t slots) {
  std::vector<std::vector<TupleId>> sets;
  if (slots > candidates.size()) return sets;
  std::vector<std::size_t> pick(slots);
  for (std::size_t i = 0; i < slots; ++i) pick[i] = i;
  while (true) {
    std::vector<TupleId> set = mandatory;
    for (std::size_t i : pick) set.push_back(candidates[i]);
    std::sort(set.begin(), set.end());
    sets.push_back(std::move(set));
    if (slots == 0) break;
    std::size_t i = slots;
    while (i > 0 && pick[i - 1] == candidates.size() - slots + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < slots; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

AnswerCollection global_topk_collection(const ProbRelation& rel,
                                        const ScoreAssignment& s, int k,
                                        double tol) {
  if (k <= 0) return {{}};
  TopkProbVector probs = global_topk_oracle(rel, k, s);
  if (rel.size() <= static_cast<std::size_t>(k)) {
    std::vector<TupleId> all;
    for (const TupleRecord& t : rel.tuples()) all.push_back(t.id);
    std::sort(all.begin(), all.end());
    return {all};
  }

  std::vector<std::pair<double, TupleId>> order;
  for (const auto& [id, p] : probs) order.push_back({p, id});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const double cutoff = order[k - 1].first;

  std::vector<TupleId> mandatory, boundary;
  for (const auto& [p, id] : order) {
    if (p > cutoff + tol)
      mandatory.push_back(id);
    else if (p >= cutoff - tol)
      boundary.push_back(id);
  }
  return subsets_filling(mandatory, boundary, k - mandatory.size());
}

AnswerCollection utopk_collection(const ProbRelation& rel,
                                  const ScoreAssignment& s, int k, double tol) {
  std::map<std::vector<TupleId>, double> set_probs;
  for (const PossibleWorld& w : enumerate_worlds(rel)) {
    auto sets = topk_answer_sets(w.members, k, s);
    set_probs[sets.front()] += w.prob;
  }
  double best = 0.0;
  for (const auto& [set, prob] : set_probs) best = std::max(best, prob);
  AnswerCollection out;
  for (const auto& [set, prob] : set_probs)
    if (prob >= best - tol) out.push_back(set);
  return out;
}

AnswerCollection ukranks_collection(const ProbRelation& rel,
                                    const ScoreAssignment& s, int k, double tol) {
  RankTable table = ukranks_rank_table(rel, k, s);
  std::vector<std::vector<TupleId>> per_rank;
  for (const auto& row : table) {
    double best = 0.0;
    for (const auto& [id, prob] : row) best = std::max(best, prob);
    if (best <= 0.0) continue;  // unreachable rank
    std::vector<TupleId> choices;
    for (const auto& [id, prob] : row)
      if (prob >= best - tol) choices.push_back(id);
    per_rank.push_back(std::move(choices));
  }

  // One answer per combination of per-rank winners, as a set.
  std::set<std::vector<TupleId>> sets;
  std::vector<std::size_t> pick(per_rank.size(), 0);
  while (true) {
    std::vector<TupleId> set;
    for (std::size_t r = 0; r < per_rank.size(); ++r) set.push_back(per_rank[r][pick[r]]);
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    sets.insert(std::move(set));
    std::size_t r = 0;
    while (r < per_rank.size() && ++pick[r] == per_rank[r].size()) pick[r++] = 0;
    if (r == per_rank.size()) break;
  }
  return {sets.begin(), sets.end()};
}

AnswerCollection ptk_collection(const ProbRelation& rel, const ScoreAssignment& s,
                                int k, double p_tau) {
  return {ptk_oracle(rel, k, s, p_tau)};
}

}  // namespace

SemanticsFn make_semantics(Semantics which, double p_tau, double tie_tol) {
  switch (which) {
    case Semantics::GlobalTopk:
      return [tie_tol](const ProbRelation& rel, const ScoreAssignment& s, int k) {
        return global_topk_collection(rel, s, k, tie_tol);
      };
    case Semantics::UTopk:
      return [tie_tol](const ProbRelation& rel, const ScoreAssignment& s, int k) {
        return utopk_collection(rel, s, k, tie_tol);
      };
    case Semantics::UkRanks:
      return [tie_tol](const ProbRelation& rel, const ScoreAssignment& s, int k) {
        return ukranks_collection(rel, s, k, tie_tol);
      };
    case Semantics::PTk:
      return [p_tau](const ProbRelation& rel, const ScoreAssignment& s, int k) {
        return ptk_collection(rel, s, k, p_tau);
      };
  }
  throw Error("unknown semantics");
}

std::vector<TupleId> winner_union(const SemanticsFn& sem, const ProbRelation& rel,
                                  const ScoreAssignment& s, int k) {
  std::set<TupleId> winners;
  for (const auto& set : sem(rel, s, k)) winners.insert(set.begin(), set.end());
  return {winners.begin(), winners.end()};
}

PostulateVerdict check_exact_k(const SemanticsFn& sem, const ProbRelation& rel,
                               const ScoreAssignment& s, int k) {
  PostulateVerdict verdict{Postulate::ExactK, true, std::nullopt};
  if (rel.parts().size() < static_cast<std::size_t>(k)) return verdict;  // guard
  for (const auto& set : sem(rel, s, k)) {
    if (set.size() != static_cast<std::size_t>(k)) {
      std::ostringstream msg;
      msg << "answer set of cardinality " << set.size() << ", expected " << k;
      verdict.holds = false;
      verdict.witness = PostulateWitness{msg.str(), set, std::nullopt};
      return verdict;
    }
  }
  return verdict;
}

PostulateVerdict check_faithfulness(const SemanticsFn& sem,
                                    const ProbRelation& rel,
                                    const ScoreAssignment& s, int k) {
  PostulateVerdict verdict{Postulate::Faithfulness, true, std::nullopt};
  for (const auto& set : sem(rel, s, k)) {
    for (const TupleRecord& t2 : rel.tuples()) {
      if (!std::binary_search(set.begin(), set.end(), t2.id)) continue;
      for (const TupleRecord& t1 : rel.tuples()) {
        if (s.score(t1.id) > s.score(t2.id) && t1.prob > t2.prob &&
            !std::binary_search(set.begin(), set.end(), t1.id)) {
          std::ostringstream msg;
          msg << "tuple " << t2.id << " answered while its dominator " << t1.id
              << " is not";
          verdict.holds = false;
          verdict.witness = PostulateWitness{msg.str(), set, std::nullopt};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

namespace {

ProbRelation with_prob(const ProbRelation& rel, TupleId id, double prob) {
  std::vector<TupleRecord> tuples = rel.tuples();
  for (TupleRecord& t : tuples)
    if (t.id == id) t.prob = prob;
  return ProbRelation(std::move(tuples));
}

ScoreAssignment with_score(const ScoreAssignment& s, TupleId id, double score) {
  ScoreAssignment out = s;
  out.set(id, score);
  return out;
}

bool member(const std::vector<TupleId>& sorted, TupleId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

PostulateVerdict check_stability(const SemanticsFn& sem, const ProbRelation& rel,
                                 const ScoreAssignment& s, int k,
                                 const std::vector<Perturbation>& perturbations) {
  PostulateVerdict verdict{Postulate::Stability, true, std::nullopt};
  std::vector<TupleId> before = winner_union(sem, rel, s, k);

  for (const Perturbation& p : perturbations) {
    const double old_value = p.target == Perturbation::Target::Prob
                                 ? rel.prob(p.tuple)
                                 : s.score(p.tuple);
    if (!std::isfinite(p.new_value))
      throw InvalidPerturbationError("perturbed value must be finite");
    if (p.target == Perturbation::Target::Prob &&
        (!(p.new_value > 0.0) || p.new_value > 1.0))
      throw InvalidPerturbationError("perturbed probability must stay in (0,1]");
    if (p.direction == Perturbation::Direction::Raise && p.new_value < old_value)
      throw InvalidPerturbationError("raise must not decrease the value");
    if (p.direction == Perturbation::Direction::Lower && p.new_value > old_value)
      throw InvalidPerturbationError("lower must not increase the value");
    if (p.new_value == old_value) continue;  // identity, vacuous

    const bool was_winner = member(before, p.tuple);
    if (p.direction == Perturbation::Direction::Raise && !was_winner) continue;
    if (p.direction == Perturbation::Direction::Lower && was_winner) continue;

    std::vector<TupleId> after;
    if (p.target == Perturbation::Target::Prob) {
      ProbRelation perturbed = with_prob(rel, p.tuple, p.new_value);
      if (!validate(perturbed).ok())
        throw InvalidPerturbationError("perturbed relation fails validation");
      after = winner_union(sem, perturbed, s, k);
    } else {
      after = winner_union(sem, rel, with_score(s, p.tuple, p.new_value), k);
    }

    const bool is_winner = member(after, p.tuple);
    const bool violated = p.direction == Perturbation::Direction::Raise
                              ? (was_winner && !is_winner)
                              : (!was_winner && is_winner);
    if (violated) {
      std::ostringstream msg;
      msg << "tuple " << p.tuple << " flipped "
          << (p.direction == Perturbation::Direction::Raise ? "winner->loser"
                                                            : "loser->winner")
          << " after "
          << (p.direction == Perturbation::Direction::Raise ? "raising" : "lowering")
          << (p.target == Perturbation::Target::Prob ? " probability" : " score")
          << " to " << p.new_value;
      verdict.holds = false;
      verdict.witness = PostulateWitness{msg.str(), after, p};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace ptopk
