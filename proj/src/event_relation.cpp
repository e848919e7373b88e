#include "ptopk/event_relation.hpp"

#include <unordered_map>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"

namespace ptopk {
namespace {

void require_injective(const ScoreAssignment& s) {
  if (!s.injective()) throw NotInjectiveError("scoring function is not injective");
}

// Per-part running sums of the probabilities of already-traversed tuples,
// kept in first-encounter order. Sums live in a dense array so the per-target
// scan does no hashing.
struct PrefixSums {
  std::vector<PartId> encounter_order;
  std::vector<double> sums;  // aligned with encounter_order
  std::unordered_map<PartId, std::size_t> slot;

  void add(PartId part, double prob) {
    auto [it, inserted] = slot.emplace(part, encounter_order.size());
    if (inserted) {
      encounter_order.push_back(part);
      sums.push_back(prob);
    } else {
      sums[it->second] += prob;
    }
  }
};

}  // namespace

EventRelation induce_event_relation(const ProbRelation& rel,
                                    const ScoreAssignment& s, TupleId t) {
  require_injective(s);
  RankedView ranked = rank(rel, s);
  const std::size_t target = ranked.position(t);

  PrefixSums prefix;
  for (std::size_t pos = 0; pos < target; ++pos)
    prefix.add(ranked.part[pos], ranked.prob[pos]);

  EventRelation out;
  const PartId own = ranked.part[target];
  for (std::size_t slot = 0; slot < prefix.encounter_order.size(); ++slot) {
    if (prefix.encounter_order[slot] == own) continue;  // Rule 2 skips t's own part
    out.events.push_back({prefix.encounter_order[slot], prefix.sums[slot]});
  }
  out.events.push_back({std::nullopt, ranked.prob[target]});
  return out;
}

double topk_prob_via_reduction(const ProbRelation& rel, int k,
                               const ScoreAssignment& s, TupleId t) {
  if (k <= 0) return 0.0;
  EventRelation ev = induce_event_relation(rel, s, t);
  return ind_topk_sub_last(ev.probs(), k);
}

std::vector<double> indexp_topk_probs(const ProbRelation& rel,
                                      const ScoreAssignment& s, int k) {
  require_injective(s);
  RankedView ranked = rank(rel, s);
  const std::size_t n = ranked.size();
  std::vector<double> by_position(n, 0.0);

  if (k > 0) {
    PrefixSums prefix;
    std::vector<double> event_probs;
    event_probs.reserve(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const PartId own = ranked.part[pos];
      event_probs.clear();
      for (std::size_t slot = 0; slot < prefix.encounter_order.size(); ++slot) {
        if (prefix.encounter_order[slot] == own) continue;
        event_probs.push_back(prefix.sums[slot]);
      }
      event_probs.push_back(ranked.prob[pos]);  // self event, lowest score
      by_position[pos] = ind_topk_sub_last(event_probs, k);
      prefix.add(own, ranked.prob[pos]);
    }
  }

  std::vector<double> out(rel.size(), 0.0);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    out[idx] = by_position[ranked.position(rel.tuples()[idx].id)];
  return out;
}

AnswerSet indexp_topk(const ProbRelation& rel, const ScoreAssignment& s, int k) {
  std::vector<double> probs = indexp_topk_probs(rel, s, k);
  BoundedHeap heap(k);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    heap.push(rel.tuples()[idx].id, probs[idx]);
  return heap.take();
}

}  // namespace ptopk
