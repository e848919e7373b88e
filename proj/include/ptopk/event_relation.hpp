#ifndef PTOPK_EVENT_RELATION_HPP
#define PTOPK_EVENT_RELATION_HPP

#include <optional>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

/// One tuple of an induced event relation: either "some strictly
/// higher-scored tuple of part `source` occurs" or, when `source` is empty,
/// the inducing tuple's own occurrence (always last, always probability
/// p(t)). Event tuples with probability 0 are never materialized, so the
/// relation is simple and valid.
struct EventTuple {
  std::optional<PartId> source;  // empty = the Rule-1 self tuple
  double prob = 0.0;
};

struct EventRelation {
  std::vector<EventTuple> events;  // self tuple last

  std::vector<double> probs() const {
    std::vector<double> out;
    out.reserve(events.size());
    for (const EventTuple& e : events) out.push_back(e.prob);
    return out;
  }
};

// Event relation induced by t under an injective scoring function: one event
// per part (other than t's own) holding a strictly higher-scored tuple, with
// the part's summed probability, in part-first-encounter order of the
// score-descending traversal; then the self tuple.
EventRelation induce_event_relation(const ProbRelation& rel,
                                    const ScoreAssignment& s, TupleId t);

// Global-Topk probability of t in a general relation: run the simple-
// relation recursion over the induced event relation and read q(k, |E|),
// i.e. p(t) times the probability that fewer than k higher events occur.
double topk_prob_via_reduction(const ProbRelation& rel, int k,
                               const ScoreAssignment& s, TupleId t);

// Per-tuple Global-Topk probabilities, one shared score-descending traversal
// with per-part prefix sums (no re-sorting per target). O(k n^2) time,
// O(k + n) working space. Output in relation tuple order.
std::vector<double> indexp_topk_probs(const ProbRelation& rel,
                                      const ScoreAssignment& s, int k);

// Heap-selected answer set over indexp_topk_probs.
AnswerSet indexp_topk(const ProbRelation& rel, const ScoreAssignment& s, int k);

}  // namespace ptopk

#endif
